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
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "seqauto/event_log.hpp"
#include "seqauto/types.hpp"

namespace seqauto::hfsm {

/// Outcome emitted by an atomic state whose goal the action server refused.
inline constexpr std::string_view kRejectedOutcome = "rejected";

class HfsmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Goal parameter read from the execution context at dispatch time.
struct ContextRef {
  std::string key;
  friend bool operator==(const ContextRef&, const ContextRef&) = default;
};

using GoalValue = std::variant<double, ContextRef>;

/// Names an action server and the goal sent to it when the state is entered.
struct ActionRef {
  std::string server;
  std::string actuator;
  GoalValue target = 0.0;

  friend bool operator==(const ActionRef&, const ActionRef&) = default;
};

enum class StateKind { Atomic, Composite };

struct MachineDef;

struct StateDef {
  std::string name;
  StateKind kind = StateKind::Atomic;
  std::set<std::string> outcomes;

  // Atomic states.
  std::optional<ActionRef> action;
  std::string on_success;
  std::string on_abort;  // empty: an aborted goal faults the execution

  // Composite states.
  std::shared_ptr<const MachineDef> child;
  std::map<std::string, std::string> outcome_map;  // child terminal -> own outcome

  friend bool operator==(const StateDef& a, const StateDef& b);
};

struct MachineDef {
  std::string name;
  std::map<std::string, StateDef> states;
  std::string initial;
  /// (state, outcome) -> state name or terminal outcome.
  std::map<std::pair<std::string, std::string>, std::string> transitions;
  std::set<std::string> terminal_outcomes;

  bool is_terminal(const std::string& label) const { return terminal_outcomes.count(label) > 0; }
  const StateDef* find_state(const std::string& state) const;

  friend bool operator==(const MachineDef&, const MachineDef&) = default;
};

/// A single validation problem. `machine` is the slash-joined path of machine
/// names from the root; `state` and `outcome` are empty when not applicable.
struct Diagnostic {
  std::string machine;
  std::string state;
  std::string outcome;
  std::string message;
};

struct ValidationReport {
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return diagnostics.empty(); }
};

/// Checks every structural invariant recursively and reports all violations.
ValidationReport validate_machine(const MachineDef& def);

/// Transition table lookup. Throws HfsmError("unmapped outcome ...") when the
/// pair is not declared.
const std::string& resolve_transition(const MachineDef& def, const std::string& state,
                                      const std::string& outcome);

bool is_token(std::string_view s);

// --- execution -----------------------------------------------------------

using ContextValue = std::variant<double, std::string>;
using ExecutionContext = std::map<std::string, ContextValue>;

using GoalId = std::uint64_t;

struct ActionRequest {
  GoalId goal_id = 0;
  std::string server;
  std::string actuator;
  double target = 0.0;
  std::string state_path;
};

enum class ActionStatus { Succeeded, Aborted, Rejected };

std::string_view to_string(ActionStatus status);

struct ActionResult {
  GoalId goal_id = 0;
  ActionStatus status = ActionStatus::Succeeded;
  double final_position = 0.0;
  TimeMs duration = 0;
  std::string reason;
};

struct ExecutionStatus {
  enum class Phase { Idle, Running, Completed, Faulted };

  Phase phase = Phase::Idle;
  std::vector<std::string> active_path;  // Running only
  std::string terminal_outcome;          // Completed only
  std::string fault_reason;              // Faulted only
};

/// One run of a machine. Atomic states dispatch a goal on entry and the run
/// advances only when results are fed back through on_action_result().
class Execution {
 public:
  /// Throws HfsmError when def fails validation. Goal ids are handed out
  /// sequentially from \`first_goal\`.
  Execution(MachineDef def, ExecutionContext ctx, AgentId agent, EventLog& log,
            GoalId first_goal = 1);

  const ExecutionStatus& start(TimeMs now);

  /// Goal requested by the active leaf and not yet handed out.
  std::optional<ActionRequest> take_pending_action();

  const ExecutionStatus& on_action_result(const ActionResult& result, TimeMs now);

  const ExecutionStatus& status() const { return status_; }
  const ExecutionContext& context() const { return ctx_; }
  const MachineDef& machine() const { return *def_; }
  GoalId next_goal_id() const { return next_goal_; }

 private:
  struct Frame {
    const MachineDef* machine;
    std::string state;
  };

  void enter(const MachineDef& machine, const std::string& state, TimeMs now);
  void emit_outcome(std::string outcome, TimeMs now);
  void fault(std::string reason);
  std::string path_string() const;
  void refresh_path();

  std::shared_ptr<const MachineDef> def_;
  ExecutionContext ctx_;
  AgentId agent_;
  EventLog* log_;
  std::vector<Frame> frames_;
  ExecutionStatus status_;
  std::optional<ActionRequest> pending_;
  std::optional<GoalId> in_flight_;
  GoalId next_goal_ = 1;
};

}  // namespace seqauto::hfsm
