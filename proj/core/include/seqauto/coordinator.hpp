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

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "seqauto/agents.hpp"
#include "seqauto/bus.hpp"
#include "seqauto/event_log.hpp"
#include "seqauto/hfsm.hpp"
#include "seqauto/scenario.hpp"
#include "seqauto/scheduler.hpp"

namespace seqauto::coord {

/// Sender id used for the chain head's initial trigger.
inline constexpr std::string_view kOperator = "operator";

enum class Phase {
  WaitingForTrigger,
  Executing,
  AwaitingReachability,
  TriggerSent,
  MissionDone,
  Faulted,
};

std::string_view to_string(Phase phase);

/// Legal lifecycle edges; everything else is a coordinator bug.
bool is_legal_transition(Phase from, Phase to);

struct TriggerMessage {
  std::string mission_id;
  int epoch = 0;
  AgentId sender;
  TimeMs sent_at = 0;

  bus::Payload to_payload() const;
  static std::optional<TriggerMessage> from_payload(const bus::Payload& payload);

  friend bool operator==(const TriggerMessage&, const TriggerMessage&) = default;
};

/// Network metadata of a trigger that arrived through the bus.
struct DeliveryInfo {
  std::uint64_t msg_id = 0;
  std::vector<TimeMs> hops;
};

enum class TriggerDisposition { Accepted, Duplicate, WrongPhase };

/// Static per-agent configuration derived from a scenario.
struct AgentConfig {
  RobotSpec robot;
  std::string mission_id;
  std::string successor_topic;  // empty when the robot has no successor
  AgentId head;
  std::string peer_address;  // address of the probed peer, for the log only
  bool is_head = false;
  bool cyclic = false;
  int epochs = 1;
  TimeMs ping_interval = kDefaultPingInterval;
  TimeMs horizon = 0;
};

AgentConfig make_agent_config(const Scenario& scenario, const RobotSpec& robot);
AgentConfig make_agent_config(const Scenario& scenario, const RobotSpec& robot, bool cyclic);

/// First probe instant `from + k * interval` (k >= 0) at which `link` is up,
/// or nullopt when that instant lies past `horizon`.
std::optional<TimeMs> await_reachability(const bus::LinkSchedule& link, TimeMs from,
                                         TimeMs interval, TimeMs horizon);

/// One robot's mission lifecycle: wait for a trigger, run the assigned
/// behavior, probe the peer until reachable, then trigger the successor.
class Coordinator {
 public:
  using AcceptHook = std::function<void(const TriggerMessage&, const std::optional<DeliveryInfo>&, TimeMs)>;

  Coordinator(AgentConfig config, Scheduler& scheduler, bus::MessageBus& bus, EventLog& log,
              std::map<std::string, agents::ActionServer*> servers);

  Coordinator(const Coordinator&) = delete;
  Coordinator& operator=(const Coordinator&) = delete;

  /// Subscribes to the robot's trigger topic.
  void attach();

  TriggerDisposition on_trigger(const TriggerMessage& msg, TimeMs t,
                                const std::optional<DeliveryInfo>& delivery = std::nullopt);

  /// Called for every accepted trigger; the harness uses it for duplicate injection.
  void set_accept_hook(AcceptHook hook) { accept_hook_ = std::move(hook); }

  const AgentId& id() const { return config_.robot.id; }
  Phase phase() const { return phase_; }
  int epoch() const { return epoch_; }
  bool finished() const { return phase_ == Phase::MissionDone || phase_ == Phase::Faulted; }
  const std::string& fault_reason() const { return fault_reason_; }

  /// Records a terminal fault (used by the harness when the horizon passes).
  void fail(TimeMs t, const std::string& reason);

 private:
  void set_phase(Phase next);
  void start_behavior(TimeMs t);
  void drive(TimeMs t);
  void on_behavior_completed(TimeMs t);
  void probe_tick(TimeMs t, int attempt);
  void emit_trigger(TimeMs t);
  void finish(TimeMs t);

  AgentConfig config_;
  Scheduler* scheduler_;
  bus::MessageBus* bus_;
  EventLog* log_;
  std::map<std::string, agents::ActionServer*> servers_;
  AcceptHook accept_hook_;

  Phase phase_ = Phase::WaitingForTrigger;
  int epoch_ = 0;
  std::set<std::tuple<std::string, int, AgentId>> seen_;
  std::unique_ptr<hfsm::Execution> execution_;
  std::uint64_t execution_serial_ = 0;
  hfsm::GoalId next_goal_ = 1;
  TimeMs completed_at_ = 0;
  std::string fault_reason_;
};

}  // namespace seqauto::coord
