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

#include <gtest/gtest.h>

#include "seqauto/agents.hpp"
#include "seqauto/hfsm.hpp"

using namespace seqauto;
using namespace seqauto::hfsm;

namespace {

MachineDef noop_machine() {
  MachineDef m;
  m.name = "Noop";
  StateDef s;
  s.name = "Noop";
  s.outcomes = {"done"};
  s.action = ActionRef{"timer", "wait", 0.0};
  s.on_success = "done";
  m.states["Noop"] = s;
  m.initial = "Noop";
  m.transitions[{"Noop", "done"}] = "finished";
  m.terminal_outcomes = {"finished"};
  return m;
}

ActionResult success(GoalId id, double position = 0.0) {
  return ActionResult{id, ActionStatus::Succeeded, position, 0, ""};
}

bool has_diagnostic(const ValidationReport& r, const std::string& message) {
  for (const auto& d : r.diagnostics)
    if (d.message.find(message) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST(ValidateMachine, NoopIsValid) { EXPECT_TRUE(validate_machine(noop_machine()).ok()); }

TEST(ValidateMachine, UnknownTransitionTarget) {
  auto m = noop_machine();
  m.transitions[{"Noop", "done"}] = "Ghost";
  auto report = validate_machine(m);
  ASSERT_FALSE(report.ok());
  EXPECT_EQ(report.diagnostics[0].message, "unknown transition target");
  EXPECT_EQ(report.diagnostics[0].state, "Noop");
  EXPECT_EQ(report.diagnostics[0].outcome, "done");
}

TEST(ValidateMachine, MissingTransitionForDeclaredOutcome) {
  auto m = noop_machine();
  m.states["Noop"].outcomes.insert("extra");
  EXPECT_TRUE(has_diagnostic(validate_machine(m), "missing transition"));
}

TEST(ValidateMachine, UnreachableState) {
  auto m = noop_machine();
  StateDef orphan = m.states["Noop"];
  orphan.name = "Orphan";
  m.states["Orphan"] = orphan;
  m.transitions[{"Orphan", "done"}] = "finished";
  EXPECT_TRUE(has_diagnostic(validate_machine(m), "unreachable state"));
}

TEST(ValidateMachine, BadInitialAndEmptyTerminals) {
  auto m = noop_machine();
  m.initial = "Nope";
  m.terminal_outcomes.clear();
  auto report = validate_machine(m);
  EXPECT_GE(report.diagnostics.size(), 2u);
}

TEST(ValidateMachine, FixturesAreValid) {
  EXPECT_TRUE(validate_machine(agents::build_deployer_machine()).ok());
  EXPECT_TRUE(validate_machine(agents::build_stinger_machine()).ok());
  agents::StingerParams three;
  three.third_leg_target = ContextRef{"third_leg_target"};
  EXPECT_TRUE(validate_machine(agents::build_stinger_machine(three)).ok());
}

TEST(ValidateMachine, CompositeOutcomeMapMustCoverChildTerminals) {
  auto stinger = agents::build_stinger_machine();
  auto& centering = stinger.states["Centering"];
  centering.outcome_map.erase("failed");
  EXPECT_FALSE(validate_machine(stinger).ok());
}

TEST(ResolveTransition, Table) {
  EXPECT_EQ(resolve_transition(noop_machine(), "Noop", "done"), "finished");
  const auto deployer = agents::build_deployer_machine();
  EXPECT_EQ(resolve_transition(deployer, "MoveToDeployPose", "reached"), "finished");
  EXPECT_THROW(resolve_transition(deployer, "MoveToDeployPose", "bogus"), HfsmError);
}

TEST(ResolveTransition, EveryDeclaredPairLandsOnStateOrTerminal) {
  const auto deployer = agents::build_deployer_machine();
  int pairs = 0;
  for (const auto& [name, state] : deployer.states) {
    for (const auto& outcome : state.outcomes) {
      const auto& next = resolve_transition(deployer, name, outcome);
      EXPECT_TRUE(deployer.states.count(next) || deployer.is_terminal(next)) << name << "/" << outcome;
      ++pairs;
    }
  }
  EXPECT_EQ(pairs, static_cast<int>(deployer.transitions.size()));
}

TEST(Execution, NoopStartAndComplete) {
  EventLog log;
  Execution ex(noop_machine(), {}, "r", log);
  const auto& st = ex.start(0);
  EXPECT_EQ(st.phase, ExecutionStatus::Phase::Running);
  EXPECT_EQ(st.active_path, std::vector<std::string>{"Noop"});
  ASSERT_EQ(log.size(), 1u);
  EXPECT_EQ(log.records()[0].kind, EventKind::StateEntered);
  EXPECT_EQ(log.records()[0].get("state"), "Noop");

  auto req = ex.take_pending_action();
  ASSERT_TRUE(req.has_value());
  EXPECT_FALSE(ex.take_pending_action().has_value());
  ex.on_action_result(success(req->goal_id), 5);
  EXPECT_EQ(ex.status().phase, ExecutionStatus::Phase::Completed);
  EXPECT_EQ(ex.status().terminal_outcome, "finished");
  EXPECT_EQ(log.records().back().kind, EventKind::StateExited);
  EXPECT_EQ(log.records().back().get("outcome"), "done");
}

TEST(Execution, DeployerStartsAtFirstMotionState) {
  EventLog log;
  ExecutionContext ctx{{"home_pose", 0.0}, {"pick_pose", 1.0}, {"grip_closed", 1.0}, {"deploy_pose", 2.0}};
  Execution ex(agents::build_deployer_machine(), ctx, "Deployer", log);
  ex.start(0);
  EXPECT_EQ(ex.status().active_path, std::vector<std::string>{"MoveToHome"});
  auto req = ex.take_pending_action();
  ASSERT_TRUE(req);
  EXPECT_EQ(req->server, "ur10");
  EXPECT_EQ(req->actuator, "arm");
}

TEST(Execution, CompositeInitialEntersParentThenChild) {
  EventLog log;
  Execution ex(agents::build_stinger_machine(), {{"left_leg_target", 4.0}, {"right_leg_target", 5.0}}, "S", log);
  ex.start(7);
  ASSERT_EQ(log.size(), 2u);
  EXPECT_EQ(log.records()[0].get("state"), "Centering");
  EXPECT_EQ(log.records()[1].get("state"), "LeftLeg");
  EXPECT_EQ(log.records()[1].get("path"), "Centering/LeftLeg");
  EXPECT_EQ(log.records()[0].t, 7);
  EXPECT_EQ(log.records()[1].t, 7);
}

TEST(Execution, StingerLegsRunOneByOne) {
  EventLog log;
  Execution ex(agents::build_stinger_machine(), {{"left_leg_target", 4.0}, {"right_leg_target", 5.0}}, "S", log);
  ex.start(0);
  auto left = ex.take_pending_action();
  ASSERT_TRUE(left);
  EXPECT_EQ(left->actuator, "left_leg");
  EXPECT_DOUBLE_EQ(left->target, 4.0);
  ex.on_action_result(success(left->goal_id, 4.0), 100);
  EXPECT_EQ(ex.status().active_path, (std::vector<std::string>{"Centering", "RightLeg"}));
  auto right = ex.take_pending_action();
  ASSERT_TRUE(right);
  EXPECT_EQ(right->actuator, "right_leg");
  EXPECT_EQ(std::get<double>(ex.context().at("LeftLeg.position")), 4.0);
  ex.on_action_result(success(right->goal_id, 5.0), 200);
  EXPECT_EQ(ex.status().phase, ExecutionStatus::Phase::Completed);
  EXPECT_EQ(ex.status().terminal_outcome, "finished");
}

TEST(Execution, ChildTerminalMapsThroughOutcomeMap) {
  MachineDef child;
  child.name = "Child";
  StateDef leaf;
  leaf.name = "Leaf";
  leaf.outcomes = {"ok", "bad"};
  leaf.action = ActionRef{"srv", "x", 1.0};
  leaf.on_success = "ok";
  leaf.on_abort = "bad";
  child.states["Leaf"] = leaf;
  child.initial = "Leaf";
  child.transitions[{"Leaf", "ok"}] = "done";
  child.transitions[{"Leaf", "bad"}] = "failed";
  child.terminal_outcomes = {"done", "failed"};

  MachineDef root;
  root.name = "Root";
  StateDef comp;
  comp.name = "Comp";
  comp.kind = StateKind::Composite;
  comp.outcomes = {"fine", "error"};
  comp.child = std::make_shared<const MachineDef>(child);
  comp.outcome_map = {{"done", "fine"}, {"failed", "error"}};
  root.states["Comp"] = comp;
  StateDef recover = leaf;
  recover.name = "Recover";
  recover.outcomes = {"ok"};
  recover.on_abort.clear();
  root.states["Recover"] = recover;
  root.initial = "Comp";
  root.transitions[{"Comp", "fine"}] = "finished";
  root.transitions[{"Comp", "error"}] = "Recover";
  root.transitions[{"Recover", "ok"}] = "finished";
  root.terminal_outcomes = {"finished"};
  ASSERT_TRUE(validate_machine(root).ok());

  EventLog log;
  Execution ex(root, {}, "r", log);
  ex.start(0);
  auto req = ex.take_pending_action();
  ex.on_action_result(ActionResult{req->goal_id, ActionStatus::Aborted, 0.5, 10, "stop"}, 10);
  EXPECT_EQ(ex.status().active_path, std::vector<std::string>{"Recover"});
  const auto& exit = log.records()[log.size() - 2];
  EXPECT_EQ(exit.kind, EventKind::StateExited);
  EXPECT_EQ(exit.get("state"), "Comp");
  EXPECT_EQ(exit.get("outcome"), "error");
  EXPECT_EQ(exit.get("child_outcome"), "failed");
}

TEST(Execution, RejectedGoesToRetryState) {
  EventLog log;
  ExecutionContext ctx{{"home_pose", 0.0}, {"pick_pose", 1.0}, {"grip_closed", 1.0}, {"deploy_pose", 2.0}};
  Execution ex(agents::build_deployer_machine(), ctx, "D", log);
  ex.start(0);
  auto req = ex.take_pending_action();
  ex.on_action_result(ActionResult{req->goal_id, ActionStatus::Rejected, 0, 0, "busy"}, 0);
  EXPECT_EQ(ex.status().active_path, std::vector<std::string>{"RetryMoveToHome"});
  auto wait = ex.take_pending_action();
  ASSERT_TRUE(wait);
  EXPECT_EQ(wait->server, "timer");
  ex.on_action_result(success(wait->goal_id), 200);
  EXPECT_EQ(ex.status().active_path, std::vector<std::string>{"MoveToHome"});
}

TEST(Execution, RejectedWithoutDeclaredOutcomeFaults) {
  EventLog log;
  Execution ex(noop_machine(), {}, "r", log);
  ex.start(0);
  auto req = ex.take_pending_action();
  ex.on_action_result(ActionResult{req->goal_id, ActionStatus::Rejected, 0, 0, "busy"}, 0);
  EXPECT_EQ(ex.status().phase, ExecutionStatus::Phase::Faulted);
}

TEST(Execution, AbortWithoutOnAbortFaults) {
  EventLog log;
  Execution ex(noop_machine(), {}, "r", log);
  ex.start(0);
  auto req = ex.take_pending_action();
  ex.on_action_result(ActionResult{req->goal_id, ActionStatus::Aborted, 0, 0, ""}, 0);
  EXPECT_EQ(ex.status().phase, ExecutionStatus::Phase::Faulted);
}

TEST(Execution, StaleResultFaults) {
  EventLog log;
  Execution ex(noop_machine(), {}, "r", log);
  ex.start(0);
  auto req = ex.take_pending_action();
  ex.on_action_result(success(req->goal_id + 1), 0);
  EXPECT_EQ(ex.status().phase, ExecutionStatus::Phase::Faulted);
  EXPECT_EQ(ex.status().fault_reason, "stale action result");
}

TEST(Execution, MissingContextKeyFaultsOnEntry) {
  EventLog log;
  Execution ex(agents::build_stinger_machine(), {}, "S", log);
  ex.start(0);
  EXPECT_EQ(ex.status().phase, ExecutionStatus::Phase::Faulted);
  EXPECT_EQ(ex.status().fault_reason, "missing context key: left_leg_target");
  EXPECT_FALSE(ex.take_pending_action().has_value());
}

TEST(Execution, InvalidMachineThrows) {
  auto m = noop_machine();
  m.initial = "Nope";
  EventLog log;
  EXPECT_THROW(Execution(m, {}, "r", log), HfsmError);
}

TEST(Execution, GoalIdsContinueFromFirstGoal) {
  EventLog log;
  Execution ex(noop_machine(), {}, "r", log, 41);
  ex.start(0);
  EXPECT_EQ(ex.take_pending_action()->goal_id, 41u);
  EXPECT_EQ(ex.next_goal_id(), 42u);
}

TEST(IsToken, Grammar) {
  EXPECT_TRUE(is_token("MoveToHome"));
  EXPECT_TRUE(is_token("_a.b-c9"));
  EXPECT_FALSE(is_token(""));
  EXPECT_FALSE(is_token("9lives"));
  EXPECT_FALSE(is_token("a b"));
  EXPECT_FALSE(is_token("a/b"));
}
