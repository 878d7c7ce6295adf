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
#include <string>
#include <vector>

#include "seqauto/agents.hpp"
#include "seqauto/bus.hpp"
#include "seqauto/hfsm.hpp"
#include "seqauto/types.hpp"

namespace seqauto {

inline constexpr TimeMs kDefaultPingInterval = 500;

struct ServerSpec {
  std::string name;
  std::vector<agents::ActuatorModel> actuators;
};

struct RobotSpec {
  AgentId id;
  DomainId domain;
  std::string trigger_topic;           // "trigger_<id>" unless overridden
  std::optional<AgentId> successor;    // none: last robot of a linear chain
  AgentId probe_peer;                  // empty: the successor
  std::optional<TimeMs> ping_interval;  // empty: scenario default
  std::string address;                 // display label for probes
  std::string success_outcome = "finished";
  std::string behavior_path;
  hfsm::MachineDef behavior;
  hfsm::ExecutionContext params;
  std::vector<ServerSpec> servers;

  const AgentId& peer() const { return probe_peer.empty() ? *successor : probe_peer; }
};

/// Abort the n-th accepted goal on one actuator of one robot's server.
struct AbortInjection {
  AgentId robot;
  std::string server;
  std::string actuator;
  int occurrence = 1;
};

/// Re-deliver every accepted trigger of `robot` `count` more times,
/// `spacing` ms apart starting `spacing` ms after the original.
struct DuplicateInjection {
  AgentId robot;
  int count = 1;
  TimeMs spacing = 100;
};

struct Scenario {
  std::string name;
  std::string mission_id;
  AgentId head;
  int epochs = 1;
  TimeMs horizon = 60000;
  std::uint64_t seed = 0;
  TimeMs ping_interval = kDefaultPingInterval;
  TimeMs feedback_interval = agents::kDefaultFeedbackInterval;
  bus::LatencyModel latency = bus::LatencyModel::default_model();
  std::vector<RobotSpec> robots;
  std::vector<bus::BridgeRule> bridges;
  bus::LinkTable links;
  std::vector<AbortInjection> aborts;
  std::vector<DuplicateInjection> duplicates;

  const RobotSpec* find_robot(const AgentId& id) const;
  TimeMs ping_interval_of(const RobotSpec& robot) const {
    return robot.ping_interval.value_or(ping_interval);
  }
};

/// Semantic problem found by check_scenario. `robot` names the robot whose
/// declaration is at fault, or is empty for scenario-wide problems.
struct ScenarioIssue {
  AgentId robot;
  std::string message;
};

/// Cross-reference and chain-shape checks shared by the parser and the runner.
std::vector<ScenarioIssue> check_scenario(const Scenario& scenario);

/// True when following successors from the head returns to the head.
bool is_cyclic(const Scenario& scenario);

}  // namespace seqauto
