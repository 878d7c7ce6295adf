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
#include <optional>
#include <set>
#include <string>
#include <variant>

#include "seqauto/event_log.hpp"
#include "seqauto/hfsm.hpp"
#include "seqauto/scheduler.hpp"
#include "seqauto/types.hpp"

namespace seqauto::agents {

/// Name of the built-in delay server every robot carries.
inline constexpr std::string_view kTimerServer = "timer";
inline constexpr TimeMs kDefaultFeedbackInterval = 250;

/// Constant-speed, noise-free linear actuator. Positions are unitless ticks.
struct ActuatorModel {
  std::string id;
  double position = 0.0;
  double min = 0.0;
  double max = 0.0;
  double speed = 1.0;  // ticks per second
};

struct MoveMotorGoal {
  std::string actuator;
  double target = 0.0;
};

struct Accepted {
  TimeMs expected_end = 0;
};
struct Rejected {
  std::string reason;
};
using SubmitOutcome = std::variant<Accepted, Rejected>;

using ResultCallback = std::function<void(const hfsm::ActionResult&, TimeMs)>;

/// Goal/feedback/result endpoint that runs at most one goal at a time.
class ActionServer {
 public:
  virtual ~ActionServer() = default;

  virtual const std::string& name() const = 0;
  virtual bool busy() const = 0;
  /// On Accepted, `done` fires from the scheduler when the goal finishes.
  virtual SubmitOutcome submit(hfsm::GoalId goal_id, const MoveMotorGoal& goal, TimeMs now,
                               ResultCallback done) = 0;
};

/// Time to move `distance` ticks at `speed` ticks/s, rounded up to whole ms.
TimeMs motion_duration(double distance, double speed);

/// The move_motor server: drives one actuator at a time along a linear
/// trajectory, reporting progress every feedback interval.
class MotorServer : public ActionServer {
 public:
  MotorServer(std::string name, AgentId owner, Scheduler& scheduler, EventLog& log,
              TimeMs feedback_interval = kDefaultFeedbackInterval);

  /// Throws std::invalid_argument on bad limits, speed or initial position.
  void add_actuator(ActuatorModel model);
  /// Abort the n-th (1-based) accepted goal on `actuator` halfway through.
  void inject_abort(const std::string& actuator, int occurrence);

  const std::string& name() const override { return name_; }
  bool busy() const override { return busy_; }
  SubmitOutcome submit(hfsm::GoalId goal_id, const MoveMotorGoal& goal, TimeMs now,
                       ResultCallback done) override;

  const ActuatorModel* actuator(const std::string& id) const;

 private:
  std::string name_;
  AgentId owner_;
  Scheduler* scheduler_;
  EventLog* log_;
  TimeMs feedback_interval_;
  std::map<std::string, ActuatorModel> actuators_;
  std::map<std::string, int> accepted_counts_;
  std::map<std::string, std::set<int>> aborts_;
  bool busy_ = false;
};

/// Succeeds after `target` milliseconds. Used for wait-and-retry states.
class TimerServer : public ActionServer {
 public:
  TimerServer(AgentId owner, Scheduler& scheduler, EventLog& log);

  const std::string& name() const override { return name_; }
  bool busy() const override { return busy_; }
  SubmitOutcome submit(hfsm::GoalId goal_id, const MoveMotorGoal& goal, TimeMs now,
                       ResultCallback done) override;

 private:
  std::string name_{kTimerServer};
  AgentId owner_;
  Scheduler* scheduler_;
  EventLog* log_;
  bool busy_ = false;
};

// --- behavior fixtures -----------------------------------------------------
//
// Reconstructions of the Deployer pick-and-place behavior and the Stinger leg
// deployment behavior. Only "MoveToDeployPose" and "Centering" are named by
// the source material; the remaining state names are ours.

struct DeployerParams {
  std::string arm_server = "ur10";
  hfsm::GoalValue home_pose = hfsm::ContextRef{"home_pose"};
  hfsm::GoalValue pick_pose = hfsm::ContextRef{"pick_pose"};
  hfsm::GoalValue grip_closed = hfsm::ContextRef{"grip_closed"};
  hfsm::GoalValue deploy_pose = hfsm::ContextRef{"deploy_pose"};
  TimeMs retry_wait = 200;
};

/// MoveToHome -> MoveToPickPose -> Pick -> MoveToDeployPose -> "finished".
/// Aborts end in "failed"; a rejected goal waits and retries the same state.
hfsm::MachineDef build_deployer_machine(const DeployerParams& params = {});

struct StingerParams {
  std::string server = "move_motor";
  hfsm::GoalValue left_leg_target = hfsm::ContextRef{"left_leg_target"};
  hfsm::GoalValue right_leg_target = hfsm::ContextRef{"right_leg_target"};
  /// Optional third leg, driven after the two side legs.
  std::optional<hfsm::GoalValue> third_leg_target;
  TimeMs retry_wait = 200;
};

/// Root machine with a Centering composite that drives left_leg, then
/// right_leg (then third_leg when configured), then reaches "finished".
hfsm::MachineDef build_stinger_machine(const StingerParams& params = {});

}  // namespace seqauto::agents
