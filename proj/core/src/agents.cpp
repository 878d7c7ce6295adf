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

#include "seqauto/agents.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace seqauto::agents {

using hfsm::ActionResult;
using hfsm::ActionStatus;

TimeMs motion_duration(double distance, double speed) {
  // The epsilon absorbs binary rounding in exact quotients such as 100/50.
  return static_cast<TimeMs>(std::ceil(std::abs(distance) * 1000.0 / speed - 1e-9));
}

MotorServer::MotorServer(std::string name, AgentId owner, Scheduler& scheduler, EventLog& log,
                         TimeMs feedback_interval)
    : name_(std::move(name)),
      owner_(std::move(owner)),
      scheduler_(&scheduler),
      log_(&log),
      feedback_interval_(feedback_interval) {
  if (feedback_interval_ <= 0) throw std::invalid_argument("feedback interval must be positive");
}

void MotorServer::add_actuator(ActuatorModel model) {
  if (!(model.min <= model.max)) throw std::invalid_argument("actuator limits out of order");
  if (!(model.speed > 0)) throw std::invalid_argument("actuator speed must be positive");
  if (model.position < model.min || model.position > model.max)
    throw std::invalid_argument("actuator initial position outside limits");
  if (actuators_.count(model.id)) throw std::invalid_argument("duplicate actuator: " + model.id);
  const std::string id = model.id;
  actuators_[id] = std::move(model);
}

void MotorServer::inject_abort(const std::string& actuator, int occurrence) {
  aborts_[actuator].insert(occurrence);
}

const ActuatorModel* MotorServer::actuator(const std::string& id) const {
  auto it = actuators_.find(id);
  return it == actuators_.end() ? nullptr : &it->second;
}

SubmitOutcome MotorServer::submit(hfsm::GoalId goal_id, const MoveMotorGoal& goal, TimeMs now,
                                  ResultCallback done) {
  auto reject = [&](std::string reason) -> SubmitOutcome {
    log_->emit(now, owner_, EventKind::ActionRejected,
               {{"server", name_},
                {"actuator", goal.actuator},
                {"goal", std::to_string(goal_id)},
                {"target", format_number(goal.target)},
                {"reason", reason}});
    return Rejected{std::move(reason)};
  };
  auto it = actuators_.find(goal.actuator);
  if (it == actuators_.end()) return reject("unknown actuator");
  if (busy_) return reject("busy");
  ActuatorModel& act = it->second;
  if (!(goal.target >= act.min && goal.target <= act.max)) return reject("limit");

  const double start = act.position;
  const double distance = goal.target - start;
  const double direction = distance < 0 ? -1.0 : 1.0;
  const TimeMs duration = motion_duration(distance, act.speed);
  const int occurrence = ++accepted_counts_[goal.actuator];
  const bool abort = aborts_[goal.actuator].count(occurrence) > 0;
  const TimeMs end_offset = abort ? duration / 2 : duration;
  const TimeMs end = now + end_offset;

  busy_ = true;
  log_->emit(now, owner_, EventKind::ActionStarted,
             {{"server", name_},
              {"actuator", goal.actuator},
              {"goal", std::to_string(goal_id)},
              {"from", format_number(start)},
              {"target", format_number(goal.target)},
              {"expected_end", std::to_string(now + duration)}});

  auto position_at = [start, direction, distance, speed = act.speed](TimeMs elapsed) {
    const double travelled = std::min(std::abs(distance), speed * static_cast<double>(elapsed) / 1000.0);
    return start + direction * travelled;
  };

  for (TimeMs at = feedback_interval_; at < end_offset; at += feedback_interval_) {
    const double pos = position_at(at);
    scheduler_->schedule(now + at, DispatchClass::Action, owner_,
                         [this, goal, goal_id, pos](TimeMs t) {
                           log_->emit(t, owner_, EventKind::ActionFeedback,
                                      {{"server", name_},
                                       {"actuator", goal.actuator},
                                       {"goal", std::to_string(goal_id)},
                                       {"position", format_number(pos)}});
                         });
  }

  const double final_position = abort ? position_at(end_offset) : goal.target;
  scheduler_->schedule(
      end, DispatchClass::Action, owner_,
      [this, goal, goal_id, final_position, abort, end_offset, done = std::move(done)](TimeMs t) {
        actuators_[goal.actuator].position = final_position;
        busy_ = false;
        ActionResult result;
        result.goal_id = goal_id;
        result.status = abort ? ActionStatus::Aborted : ActionStatus::Succeeded;
        result.final_position = final_position;
        result.duration = end_offset;
        if (abort) result.reason = "injected abort";
        log_->emit(t, owner_, EventKind::ActionCompleted,
                   {{"server", name_},
                    {"actuator", goal.actuator},
                    {"goal", std::to_string(goal_id)},
                    {"status", std::string(hfsm::to_string(result.status))},
                    {"position", format_number(final_position)},
                    {"duration", std::to_string(end_offset)}});
        done(result, t);
      });
  return Accepted{now + duration};
}

TimerServer::TimerServer(AgentId owner, Scheduler& scheduler, EventLog& log)
    : owner_(std::move(owner)), scheduler_(&scheduler), log_(&log) {}

SubmitOutcome TimerServer::submit(hfsm::GoalId goal_id, const MoveMotorGoal& goal, TimeMs now,
                                  ResultCallback done) {
  const std::string reason = busy_ ? "busy" : (goal.target < 0 ? "limit" : "");
  if (!reason.empty()) {
    log_->emit(now, owner_, EventKind::ActionRejected,
               {{"server", name_},
                {"actuator", goal.actuator},
                {"goal", std::to_string(goal_id)},
                {"target", format_number(goal.target)},
                {"reason", reason}});
    return Rejected{reason};
  }
  const auto duration = static_cast<TimeMs>(std::ceil(goal.target));
  busy_ = true;
  log_->emit(now, owner_, EventKind::ActionStarted,
             {{"server", name_},
              {"actuator", goal.actuator},
              {"goal", std::to_string(goal_id)},
              {"from", "0"},
              {"target", format_number(goal.target)},
              {"expected_end", std::to_string(now + duration)}});
  scheduler_->schedule(now + duration, DispatchClass::Action, owner_,
                       [this, goal, goal_id, duration, done = std::move(done)](TimeMs t) {
                         busy_ = false;
                         log_->emit(t, owner_, EventKind::ActionCompleted,
                                    {{"server", name_},
                                     {"actuator", goal.actuator},
                                     {"goal", std::to_string(goal_id)},
                                     {"status", "succeeded"},
                                     {"position", format_number(goal.target)},
                                     {"duration", std::to_string(duration)}});
                         done(ActionResult{goal_id, ActionStatus::Succeeded, goal.target, duration, {}}, t);
                       });
  return Accepted{now + duration};
}

// --- fixtures ----------------------------------------------------------------

namespace {

using hfsm::MachineDef;
using hfsm::StateDef;
using hfsm::StateKind;

/// Adds an action state plus its wait-and-retry companion.
void add_retrying_state(MachineDef& m, const std::string& name, const std::string& server,
                        const std::string& actuator, const hfsm::GoalValue& target,
                        const std::string& success, const std::string& next, TimeMs retry_wait) {
  StateDef s;
  s.name = name;
  s.kind = StateKind::Atomic;
  s.action = hfsm::ActionRef{server, actuator, target};
  s.on_success = success;
  s.on_abort = "failed";
  s.outcomes = {success, "failed", std::string(hfsm::kRejectedOutcome)};
  m.states[name] = s;
  m.transitions[{name, success}] = next;
  m.transitions[{name, "failed"}] = "failed";

  const std::string retry = "Retry" + name;
  m.transitions[{name, std::string(hfsm::kRejectedOutcome)}] = retry;
  StateDef wait;
  wait.name = retry;
  wait.kind = StateKind::Atomic;
  wait.action = hfsm::ActionRef{std::string(kTimerServer), "wait", static_cast<double>(retry_wait)};
  wait.on_success = "done";
  wait.outcomes = {"done"};
  m.states[retry] = wait;
  m.transitions[{retry, "done"}] = name;
}

}  // namespace

hfsm::MachineDef build_deployer_machine(const DeployerParams& p) {
  MachineDef m;
  m.name = "Deployer";
  m.initial = "MoveToHome";
  m.terminal_outcomes = {"finished", "failed"};
  add_retrying_state(m, "MoveToHome", p.arm_server, "arm", p.home_pose, "reached", "MoveToPickPose",
                     p.retry_wait);
  add_retrying_state(m, "MoveToPickPose", p.arm_server, "arm", p.pick_pose, "reached", "Pick",
                     p.retry_wait);
  add_retrying_state(m, "Pick", p.arm_server, "gripper", p.grip_closed, "grasped",
                     "MoveToDeployPose", p.retry_wait);
  add_retrying_state(m, "MoveToDeployPose", p.arm_server, "arm", p.deploy_pose, "reached",
                     "finished", p.retry_wait);
  return m;
}

hfsm::MachineDef build_stinger_machine(const StingerParams& p) {
  MachineDef legs;
  legs.name = "CenteringLegs";
  legs.initial = "LeftLeg";
  legs.terminal_outcomes = {"done", "failed"};
  add_retrying_state(legs, "LeftLeg", p.server, "left_leg", p.left_leg_target, "reached", "RightLeg",
                     p.retry_wait);
  if (p.third_leg_target) {
    add_retrying_state(legs, "RightLeg", p.server, "right_leg", p.right_leg_target, "reached",
                       "ThirdLeg", p.retry_wait);
    add_retrying_state(legs, "ThirdLeg", p.server, "third_leg", *p.third_leg_target, "reached",
                       "done", p.retry_wait);
  } else {
    add_retrying_state(legs, "RightLeg", p.server, "right_leg", p.right_leg_target, "reached",
                       "done", p.retry_wait);
  }

  StateDef centering;
  centering.name = "Centering";
  centering.kind = StateKind::Composite;
  centering.child = std::make_shared<const MachineDef>(std::move(legs));
  centering.outcome_map = {{"done", "centered"}, {"failed", "failed"}};
  centering.outcomes = {"centered", "failed"};

  MachineDef m;
  m.name = "Stinger";
  m.initial = "Centering";
  m.terminal_outcomes = {"finished", "failed"};
  m.states["Centering"] = centering;
  m.transitions[{"Centering", "centered"}] = "finished";
  m.transitions[{"Centering", "failed"}] = "failed";
  return m;
}

}  // namespace seqauto::agents
