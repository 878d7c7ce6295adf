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

#include "seqauto/harness.hpp"

#include <chrono>
#include <map>
#include <memory>
#include <thread>

#include "seqauto/agents.hpp"
#include "seqauto/bus.hpp"
#include "seqauto/coordinator.hpp"

namespace seqauto::sim {

bool RunResult::all_done() const {
  for (const auto& a : agents)
    if (!a.mission_done) return false;
  return true;
}

Scheduler::Pacer realtime_pacer(double scale) {
  auto origin = std::chrono::steady_clock::now();
  return [origin, scale](TimeMs t) {
    std::this_thread::sleep_until(origin + std::chrono::duration<double, std::milli>(t * scale));
  };
}

RunResult run_scenario(const Scenario& sc, const RunOptions& options) {
  if (auto issues = check_scenario(sc); !issues.empty()) {
    std::string message = "invalid scenario:";
    for (const auto& i : issues) message += " [" + (i.robot.empty() ? "" : i.robot + ": ") + i.message + "]";
    throw ScenarioError(message);
  }
  const std::uint64_t seed = options.seed.value_or(sc.seed);

  EventLog log;
  Scheduler scheduler;
  log.emit(0, "scenario", EventKind::ScenarioStart,
           {{"name", sc.name},
            {"mission", sc.mission_id},
            {"seed", std::to_string(seed)},
            {"robots", std::to_string(sc.robots.size())}});

  bus::MessageBus bus(scheduler, log, sc.links, sc.latency, seed);
  for (const auto& r : sc.robots) bus.add_domain(r.domain);
  for (const auto& r : sc.robots) bus.register_agent(r.id, r.domain);
  for (const auto& rule : sc.bridges) bus.add_bridge_rule(rule);

  std::vector<std::unique_ptr<agents::ActionServer>> servers;
  std::map<AgentId, std::unique_ptr<coord::Coordinator>> coordinators;
  const bool cyclic = is_cyclic(sc);
  for (const auto& r : sc.robots) {
    std::map<std::string, agents::ActionServer*> endpoints;
    for (const auto& spec : r.servers) {
      auto server = std::make_unique<agents::MotorServer>(spec.name, r.id, scheduler, log,
                                                          sc.feedback_interval);
      for (const auto& a : spec.actuators) server->add_actuator(a);
      for (const auto& inj : sc.aborts)
        if (inj.robot == r.id && inj.server == spec.name) server->inject_abort(inj.actuator, inj.occurrence);
      endpoints[spec.name] = server.get();
      servers.push_back(std::move(server));
    }
    auto timer = std::make_unique<agents::TimerServer>(r.id, scheduler, log);
    endpoints[std::string(agents::kTimerServer)] = timer.get();
    servers.push_back(std::move(timer));

    auto c = std::make_unique<coord::Coordinator>(coord::make_agent_config(sc, r, cyclic), scheduler, bus,
                                                  log, std::move(endpoints));
    c->attach();
    for (const auto& dup : sc.duplicates) {
      if (dup.robot != r.id || dup.count == 0) continue;
      coord::Coordinator* self = c.get();
      c->set_accept_hook([self, dup, &scheduler](const coord::TriggerMessage& msg,
                                                 const std::optional<coord::DeliveryInfo>& delivery,
                                                 TimeMs t) {
        for (int k = 1; k <= dup.count; ++k)
          scheduler.schedule(t + k * dup.spacing, DispatchClass::Delivery, self->id(),
                             [self, msg, delivery](TimeMs now) { self->on_trigger(msg, now, delivery); });
      });
    }
    coordinators.emplace(r.id, std::move(c));
  }

  for (const auto& [key, schedule] : sc.links.links()) {
    const std::string name = bus::link_name(key);
    for (const auto& iv : schedule.outages()) {
      const Detail detail{{"a", key.first}, {"b", key.second}};
      if (iv.start <= sc.horizon)
        scheduler.schedule(iv.start, DispatchClass::LinkChange, name, [&log, name, detail](TimeMs t) {
          log.emit(t, name, EventKind::LinkDown, detail);
        });
      if (iv.end <= sc.horizon)
        scheduler.schedule(iv.end, DispatchClass::LinkChange, name, [&log, name, detail](TimeMs t) {
          log.emit(t, name, EventKind::LinkUp, detail);
        });
    }
  }

  if (!sc.robots.empty()) {
    coord::Coordinator* head = coordinators.at(sc.head).get();
    const coord::TriggerMessage initial{sc.mission_id, 0, std::string(coord::kOperator), 0};
    scheduler.schedule(0, DispatchClass::Delivery, sc.head,
                       [head, initial](TimeMs t) { head->on_trigger(initial, t); });
  }

  auto all_finished = [&] {
    for (const auto& [id, c] : coordinators)
      if (!c->finished()) return false;
    return true;
  };
  while (!scheduler.empty() && scheduler.next_time() <= sc.horizon && !all_finished()) {
    if (options.pacer) options.pacer(scheduler.next_time());
    scheduler.step();
  }

  TimeMs end = log.records().back().t;
  for (const auto& [id, c] : coordinators) {
    if (c->finished()) continue;
    c->fail(sc.horizon, c->phase() == coord::Phase::AwaitingReachability ? "TimedOutEpoch" : "TimedOut");
    end = sc.horizon;
  }

  RunResult result;
  for (const auto& r : sc.robots) {
    const auto& c = *coordinators.at(r.id);
    result.agents.push_back({r.id, c.phase() == coord::Phase::MissionDone, c.fault_reason()});
  }
  log.emit(end, "scenario", EventKind::ScenarioEnd,
           {{"status", result.all_done() ? "mission_done" : "fault"}});
  result.end_time = end;
  result.log = log.records();
  return result;
}

}  // namespace seqauto::sim
