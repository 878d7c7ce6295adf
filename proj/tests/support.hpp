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

#pragma once

#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "seqauto/dsl.hpp"
#include "seqauto/event_log.hpp"
#include "seqauto/scenario.hpp"

namespace testsupport {

inline std::string scenario_path(const std::string& name) {
  return std::string(SEQAUTO_SCENARIO_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

inline seqauto::Scenario load_bundled(const std::string& name) {
  auto result = seqauto::dsl::load_scenario_file(scenario_path(name));
  std::string messages;
  for (const auto& d : result.diagnostics) messages += seqauto::dsl::format_diagnostic(name, d) + "\n";
  if (!result.ok()) throw std::runtime_error("cannot load " + name + ":\n" + messages);
  return *result.value;
}

inline seqauto::dsl::FileLoader memory_loader(std::map<std::string, std::string> files) {
  return [files = std::move(files)](const std::string& path) -> std::optional<std::string> {
    auto it = files.find(path);
    if (it == files.end()) return std::nullopt;
    return it->second;
  };
}

/// One motion state driving actuator "m" of server "move_motor" to $target.
inline const char* kWorkMachine = R"(version: 1
root: Work

[machine Work]
initial: Move
terminals: failed finished

[state Work/Move]
kind: atomic
outcomes: failed reached
action: move_motor m $target
on_success: reached
on_abort: failed
transition: failed -> failed
transition: reached -> finished
)";

/// One timer state waiting $work ms.
inline const char* kWaitMachine = R"(version: 1
root: Wait

[machine Wait]
initial: Hold
terminals: finished

[state Wait/Hold]
kind: atomic
outcomes: done
action: timer wait $work
on_success: done
transition: done -> finished
)";

struct ChainRobot {
  std::string id;
  double target = 10;
  double speed = 10;
  std::vector<std::pair<long, long>> outages_to_next;
};

/// Linear (or, with cyclic, closed) chain R1 -> R2 -> ... in domains 1..n.
inline std::string chain_scenario(const std::vector<ChainRobot>& robots, std::uint64_t seed,
                                  long horizon, bool cyclic = false, int epochs = 1,
                                  long ping_interval = 500, const std::string& extra_fields = "") {
  std::ostringstream s;
  s << "version: 1\nscenario: chain\nmission: chain\nhead: " << robots.front().id
    << "\nhorizon: " << horizon << "\nseed: " << seed << "\nepochs: " << epochs
    << "\nping_interval: " << ping_interval << "\n" << extra_fields;
  for (std::size_t i = 0; i < robots.size(); ++i) {
    const auto& r = robots[i];
    const bool last = i + 1 == robots.size();
    const std::string next = last ? (cyclic ? robots.front().id : "none") : robots[i + 1].id;
    s << "\n[robot " << r.id << "]\ndomain: " << (i + 1) << "\nbehavior: work.machine\nsuccessor: " << next
      << "\n\n[params " << r.id << "]\ntarget: " << r.target << "\n\n[server " << r.id
      << "/move_motor]\nactuator: m 0 1000 " << r.speed << " 0\n";
  }
  s << "\n[bridge]\n";
  for (std::size_t i = 0; i < robots.size(); ++i) {
    const bool last = i + 1 == robots.size();
    if (last && !cyclic) break;
    const std::size_t j = last ? 0 : i + 1;
    s << "rule: " << (i + 1) << " -> " << (j + 1) << " trigger_" << robots[j].id << "\n";
  }
  for (std::size_t i = 0; i + 1 < robots.size() || (cyclic && i < robots.size()); ++i) {
    const auto& r = robots[i];
    if (r.outages_to_next.empty()) continue;
    const auto& next = robots[(i + 1) % robots.size()];
    s << "\n[link " << r.id << " " << next.id << "]\n";
    for (const auto& [a, b] : r.outages_to_next) s << "outage: " << a << " " << b << "\n";
  }
  return s.str();
}

inline seqauto::Scenario parse_with(const std::string& text, std::map<std::string, std::string> files) {
  auto result = seqauto::dsl::parse_scenario(text, memory_loader(std::move(files)));
  std::string messages;
  for (const auto& d : result.diagnostics) messages += seqauto::dsl::format_diagnostic("<memory>", d) + "\n";
  if (!result.ok()) throw std::runtime_error("scenario rejected:\n" + messages + "\n" + text);
  return *result.value;
}

inline std::vector<seqauto::EventRecord> of_kind(const std::vector<seqauto::EventRecord>& log,
                                                 seqauto::EventKind kind) {
  std::vector<seqauto::EventRecord> out;
  for (const auto& r : log)
    if (r.kind == kind) out.push_back(r);
  return out;
}

inline std::vector<seqauto::EventRecord> of_kind(const std::vector<seqauto::EventRecord>& log,
                                                 seqauto::EventKind kind, const std::string& agent) {
  std::vector<seqauto::EventRecord> out;
  for (const auto& r : log)
    if (r.kind == kind && r.agent == agent) out.push_back(r);
  return out;
}

}  // namespace testsupport
