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

#include "seqauto/analysis.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace seqauto::analysis {

void Summary::add(TimeMs value) {
  if (count == 0) {
    min = max = value;
  } else {
    min = std::min(min, value);
    max = std::max(max, value);
  }
  ++count;
  sum_ += static_cast<double>(value);
  mean = sum_ / static_cast<double>(count);
}

LatencyStats compute_latency(const std::vector<EventRecord>& log) {
  LatencyStats stats;
  std::map<std::string, const EventRecord*> published;
  std::map<std::string, int> received;
  std::optional<TimeMs> first_trigger;
  std::optional<TimeMs> last_start;

  for (const auto& r : log) {
    switch (r.kind) {
      case EventKind::TriggerPublished:
        published[r.get("msg")] = &r;
        if (auto w = r.get_int("wait")) stats.deferral.add(*w);
        break;
      case EventKind::TriggerReceived:
        if (!first_trigger) first_trigger = r.t;
        if (r.detail.count("msg")) ++received[r.get("msg")];
        break;
      case EventKind::BehaviorStarted:
        last_start = r.t;
        break;
      default:
        break;
    }
  }

  for (const auto& r : log) {
    if (r.kind != EventKind::TriggerReceived || !r.detail.count("msg")) continue;
    auto it = published.find(r.get("msg"));
    if (it == published.end()) {
      stats.integrity_violations.push_back("receipt without publish: msg " + r.get("msg"));
      continue;
    }
    const TimeMs latency = r.t - it->second->t;
    stats.trigger.add(latency);
    if (auto bridge = r.get_int("bridge_ms")) {
      stats.hop.add(*bridge);
      stats.bridged_trigger.add(latency);
    } else {
      stats.direct_trigger.add(latency);
    }
    if (auto link = r.get_int("link_ms")) stats.hop.add(*link);
  }
  for (const auto& [msg, rec] : published) {
    const int n = received.count(msg) ? received[msg] : 0;
    if (n != 1)
      stats.integrity_violations.push_back("trigger msg " + msg + " from " + rec->agent + " at t=" +
                                           std::to_string(rec->t) + " received " + std::to_string(n) +
                                           " times");
  }
  if (first_trigger && last_start) stats.end_to_end = *last_start - *first_trigger;
  return stats;
}

std::string format_latency_summary(const LatencyStats& s) {
  std::ostringstream out;
  auto row = [&](const char* label, const Summary& sum) {
    out << std::left << std::setw(18) << label << " count=" << sum.count;
    if (sum.count)
      out << " min=" << sum.min << "ms mean=" << std::fixed << std::setprecision(1) << sum.mean
          << "ms max=" << sum.max << "ms";
    out << "\n";
  };
  out << "latency summary\n";
  row("  per-hop", s.hop);
  row("  trigger", s.trigger);
  row("  trigger direct", s.direct_trigger);
  row("  trigger bridged", s.bridged_trigger);
  row("  deferral wait", s.deferral);
  out << "  end-to-end        ";
  if (s.end_to_end)
    out << *s.end_to_end << "ms\n";
  else
    out << "n/a\n";
  out << "  integrity         " << (s.integrity_violations.empty() ? "ok" : "VIOLATIONS") << "\n";
  for (const auto& v : s.integrity_violations) out << "    " << v << "\n";
  return out.str();
}

std::vector<std::string> check_log_integrity(const std::vector<EventRecord>& log) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i < log.size(); ++i)
    if (log[i].t < log[i - 1].t)
      out.push_back("time goes backwards at record " + std::to_string(i));

  auto latency = compute_latency(log);
  out.insert(out.end(), latency.integrity_violations.begin(), latency.integrity_violations.end());

  std::map<std::tuple<AgentId, std::string, std::string>, int> open_actions;
  std::map<AgentId, std::vector<std::string>> stacks;
  std::set<AgentId> terminated;
  for (const auto& r : log) {
    switch (r.kind) {
      case EventKind::ActionStarted: {
        auto key = std::make_tuple(r.agent, r.get("server"), r.get("goal"));
        if (++open_actions[key] != 1)
          out.push_back("goal started twice: " + r.agent + " " + r.get("server") + " " + r.get("goal"));
        break;
      }
      case EventKind::ActionCompleted: {
        auto key = std::make_tuple(r.agent, r.get("server"), r.get("goal"));
        if (open_actions[key] != 1)
          out.push_back("completion without start: " + r.agent + " " + r.get("server") + " " + r.get("goal"));
        open_actions[key] = 2;
        break;
      }
      case EventKind::StateEntered:
        stacks[r.agent].push_back(r.get("path"));
        break;
      case EventKind::StateExited: {
        auto& stack = stacks[r.agent];
        if (stack.empty() || stack.back() != r.get("path"))
          out.push_back("StateExited without matching StateEntered: " + r.agent + " " + r.get("path") +
                        " at t=" + std::to_string(r.t));
        else
          stack.pop_back();
        break;
      }
      case EventKind::Fault:
        terminated.insert(r.agent);
        stacks[r.agent].clear();
        break;
      default:
        break;
    }
  }
  for (const auto& [key, state] : open_actions)
    if (state == 1 && !terminated.count(std::get<0>(key)))
      out.push_back("goal never finished: " + std::get<0>(key) + " " + std::get<1>(key) + " " + std::get<2>(key));
  for (const auto& [agent, stack] : stacks)
    if (!stack.empty()) out.push_back("unclosed state on " + agent + ": " + stack.back());
  return out;
}

}  // namespace seqauto::analysis
