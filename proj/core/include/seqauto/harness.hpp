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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqauto/event_log.hpp"
#include "seqauto/scenario.hpp"
#include "seqauto/scheduler.hpp"

namespace seqauto::sim {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AgentOutcome {
  AgentId id;
  bool mission_done = false;
  std::string fault;  // empty unless the agent faulted
};

struct RunResult {
  std::vector<EventRecord> log;
  std::vector<AgentOutcome> agents;
  TimeMs end_time = 0;

  bool all_done() const;
};

struct RunOptions {
  /// Overrides the scenario seed.
  std::optional<std::uint64_t> seed;
  /// Wall-clock pacing for demos; leave empty for pure virtual time.
  Scheduler::Pacer pacer;
};

/// Runs a scenario from t=0 until every agent has finished or the horizon
/// passes. Agents still pending at the horizon get a Fault(TimedOut) record.
/// Throws ScenarioError when check_scenario() reports problems.
RunResult run_scenario(const Scenario& scenario, const RunOptions& options = {});

/// Pacer sleeping so that virtual ms advance `scale` times slower than wall ms.
Scheduler::Pacer realtime_pacer(double scale);

}  // namespace seqauto::sim
