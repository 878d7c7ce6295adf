// Copyright 2026 The seqauto Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "seqauto/scenario.hpp"

#include <functional>
#include <map>
#include <set>

namespace seqauto {

const RobotSpec* Scenario::find_robot(const AgentId& id) const {
  for (const auto& r : robots)
    if (r.id == id) return &r;
  return nullptr;
}

bool is_cyclic(const Scenario& sc) {
  std::map<AgentId, const RobotSpec*> index;
  for (const auto& robot : sc.robots) index.emplace(robot.id, &robot);
  auto it = index.find(sc.head);
  std::set<AgentId> seen;
  while (it != index.end() && it->second->successor && seen.insert(it->first).second) {
    if (*it->second->successor == sc.head) return true;
    it = index.find(*it->second->successor);
  }
  return false;
}

namespace {

void check_bindings(const RobotSpec& robot, const hfsm::MachineDef& def,
                    std::vector<ScenarioIssue>& out) {
  for (const auto& [name, s] : def.states) {
    if (s.child) check_bindings(robot, *s.child, out);
    if (!s.action || s.action->server == agents::kTimerServer) continue;
    const ServerSpec* server = nullptr;
    for (const auto& candidate : robot.servers)
      if (candidate.name == s.action->server) server = &candidate;
    if (!server) {
      out.push_back({robot.id, "state " + name + " binds unknown action server: " + s.action->server});
      continue;
    }
    bool found = false;
    for (const auto& a : server->actuators) found = found || a.id == s.action->actuator;
    if (!found)
      out.push_back({robot.id, "state " + name + " binds unknown actuator: " + s.action->actuator});
  }
}

}  // namespace

std::vector<ScenarioIssue> check_scenario(const Scenario& sc) {
  std::vector<ScenarioIssue> out;
  if (sc.horizon <= 0) out.push_back({"", "horizon must be positive"});
  if (sc.ping_interval <= 0) out.push_back({"", "ping_interval must be positive"});
  if (sc.feedback_interval <= 0) out.push_back({"", "feedback_interval must be positive"});
  if (sc.epochs < 1) out.push_back({"", "epochs must be at least 1"});

  std::map<AgentId, int> ids;
  std::map<std::string, AgentId> topics;
  std::map<DomainId, AgentId> engines;
  std::set<DomainId> domains;
  for (const auto& r : sc.robots) {
    if (!hfsm::is_token(r.id)) out.push_back({r.id, "invalid robot id"});
    if (++ids[r.id] > 1) out.push_back({r.id, "duplicate robot id: " + r.id});
    domains.insert(r.domain);
    if (auto [it, fresh] = topics.emplace(r.trigger_topic, r.id); !fresh)
      out.push_back({r.id, "duplicate trigger topic: " + r.trigger_topic});
    // Each robot hosts a behavior engine, and an engine cannot share its domain.
    if (auto [it, fresh] = engines.emplace(r.domain, r.id); !fresh)
      out.push_back({r.id, "single behavior engine per domain: robots " + it->second + " and " +
                               r.id + " both host an engine on domain " + to_string(r.domain)});
  }

  for (const auto& r : sc.robots) {
    if (r.ping_interval && *r.ping_interval <= 0)
      out.push_back({r.id, "ping_interval must be positive"});
    if (r.successor && !ids.count(*r.successor))
      out.push_back({r.id, "unknown successor: " + *r.successor});
    if (r.successor && *r.successor == r.id && r.id != sc.head)
      out.push_back({r.id, "robot cannot be its own successor"});
    if (!r.probe_peer.empty() && !ids.count(r.probe_peer))
      out.push_back({r.id, "unknown probe peer: " + r.probe_peer});
    if (!r.successor && !r.probe_peer.empty())
      out.push_back({r.id, "probe peer set on a robot without successor"});
    auto report = hfsm::validate_machine(r.behavior);
    for (const auto& d : report.diagnostics)
      out.push_back({r.id, "behavior " + d.machine + ": " + d.message});
    if (!r.behavior.is_terminal(r.success_outcome))
      out.push_back({r.id, "success outcome is not a terminal of the behavior: " + r.success_outcome});
    std::set<std::string> server_names;
    for (const auto& s : r.servers) {
      if (s.name == agents::kTimerServer) out.push_back({r.id, "server name is reserved: timer"});
      if (!server_names.insert(s.name).second) out.push_back({r.id, "duplicate server: " + s.name});
      std::set<std::string> act_ids;
      for (const auto& a : s.actuators) {
        if (!act_ids.insert(a.id).second) out.push_back({r.id, "duplicate actuator: " + a.id});
        if (!(a.min <= a.max) || !(a.speed > 0) || a.position < a.min || a.position > a.max)
          out.push_back({r.id, "invalid actuator model: " + a.id});
      }
    }
    check_bindings(r, r.behavior, out);

    if (r.successor) {
      if (const RobotSpec* next = sc.find_robot(*r.successor); next && next->domain != r.domain) {
        bus::BridgeRule needed{r.domain, next->domain, next->trigger_topic};
        bool bridged = false;
        for (const auto& rule : sc.bridges) bridged = bridged || rule == needed;
        if (!bridged)
          out.push_back({r.id, "no bridge rule forwards " + next->trigger_topic + " from domain " +
                                   to_string(r.domain) + " to domain " + to_string(next->domain)});
      }
    }
  }

  for (const auto& rule : sc.bridges) {
    if (!domains.count(rule.from) || !domains.count(rule.to))
      out.push_back({"", "bridge rule references an unknown domain"});
    if (rule.from == rule.to) out.push_back({"", "bridge rule within a single domain"});
  }
  for (const auto& [key, schedule] : sc.links.links())
    if (!ids.count(key.first) || !ids.count(key.second))
      out.push_back({"", "link references an unknown robot: " + bus::link_name(key)});
  for (const auto& a : sc.aborts)
    if (!ids.count(a.robot)) out.push_back({"", "abort injection for unknown robot: " + a.robot});
  for (const auto& d : sc.duplicates) {
    if (!ids.count(d.robot)) out.push_back({"", "duplicate injection for unknown robot: " + d.robot});
    if (d.count < 0 || d.spacing <= 0) out.push_back({d.robot, "invalid duplicate injection"});
  }

  if (sc.robots.empty()) return out;
  if (!ids.count(sc.head)) {
    out.push_back({"", "unknown head robot: " + sc.head});
    return out;
  }
  // Chain shape: from the head, successors either end or return to the head.
  std::set<AgentId> chain;
  const RobotSpec* r = sc.find_robot(sc.head);
  bool cyclic = false;
  while (r) {
    chain.insert(r->id);
    if (!r->successor) break;
    if (*r->successor == sc.head) {
      cyclic = true;
      break;
    }
    if (chain.count(*r->successor)) {
      out.push_back({r->id, "successor cycle does not return to the head robot"});
      break;
    }
    r = sc.find_robot(*r->successor);
  }
  for (const auto& robot : sc.robots)
    if (!chain.count(robot.id)) out.push_back({robot.id, "robot is not on the mission chain: " + robot.id});
  if (!cyclic && sc.epochs > 1) out.push_back({"", "epochs > 1 requires a cyclic chain"});
  return out;
}

}  // namespace seqauto
