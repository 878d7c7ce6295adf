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

#include "seqauto/hfsm.hpp"

#include <cctype>
#include <deque>

namespace seqauto::hfsm {

namespace {

void report(std::vector<Diagnostic>& out, const std::string& machine, std::string state,
            std::string outcome, std::string message) {
  out.push_back(Diagnostic{machine, std::move(state), std::move(outcome), std::move(message)});
}

void validate_atomic(const StateDef& s, const std::string& path, std::vector<Diagnostic>& out) {
  if (!s.action) {
    report(out, path, s.name, "", "atomic state without action binding");
  } else {
    if (!is_token(s.action->server)) report(out, path, s.name, "", "invalid action server name");
    if (!is_token(s.action->actuator)) report(out, path, s.name, "", "invalid actuator name");
    if (auto* ref = std::get_if<ContextRef>(&s.action->target); ref && !is_token(ref->key))
      report(out, path, s.name, "", "invalid context key in goal target");
  }
  if (s.child) report(out, path, s.name, "", "atomic state with child machine");
  if (!s.outcome_map.empty()) report(out, path, s.name, "", "outcome map on atomic state");
  if (s.on_success.empty())
    report(out, path, s.name, "", "atomic state without on_success outcome");
  else if (!s.outcomes.count(s.on_success))
    report(out, path, s.name, s.on_success, "on_success outcome not declared");
  if (!s.on_abort.empty() && !s.outcomes.count(s.on_abort))
    report(out, path, s.name, s.on_abort, "on_abort outcome not declared");
}

void validate_into(const MachineDef& def, const std::string& parent, std::vector<Diagnostic>& out);

void validate_composite(const StateDef& s, const std::string& path, std::vector<Diagnostic>& out) {
  if (s.action) report(out, path, s.name, "", "composite state with action binding");
  if (!s.on_success.empty() || !s.on_abort.empty())
    report(out, path, s.name, "", "result outcomes on composite state");
  if (!s.child) {
    report(out, path, s.name, "", "composite state without child machine");
    return;
  }
  validate_into(*s.child, path, out);
  for (const auto& terminal : s.child->terminal_outcomes)
    if (!s.outcome_map.count(terminal))
      report(out, path, s.name, terminal, "outcome map missing child terminal");
  std::set<std::string> image;
  for (const auto& [from, to] : s.outcome_map) {
    if (!s.child->terminal_outcomes.count(from))
      report(out, path, s.name, from, "outcome map key is not a child terminal");
    if (!s.outcomes.count(to))
      report(out, path, s.name, to, "outcome map target not declared");
    image.insert(to);
  }
  for (const auto& outcome : s.outcomes)
    if (!image.count(outcome))
      report(out, path, s.name, outcome, "outcome never produced by outcome map");
}

void validate_into(const MachineDef& def, const std::string& parent, std::vector<Diagnostic>& out) {
  const std::string path = parent.empty() ? def.name : parent + "/" + def.name;
  if (!is_token(def.name)) report(out, path, "", "", "invalid machine name");
  if (def.states.empty()) report(out, path, "", "", "machine has no states");
  if (def.initial.empty())
    report(out, path, "", "", "missing initial state");
  else if (!def.states.count(def.initial))
    report(out, path, def.initial, "", "unknown initial state");
  if (def.terminal_outcomes.empty()) report(out, path, "", "", "machine declares no terminal outcomes");
  for (const auto& terminal : def.terminal_outcomes) {
    if (!is_token(terminal)) report(out, path, "", terminal, "invalid terminal outcome label");
    if (def.states.count(terminal))
      report(out, path, terminal, terminal, "terminal outcome shadows a state name");
  }

  for (const auto& [key, s] : def.states) {
    if (key != s.name) report(out, path, key, "", "state name does not match its key");
    if (!is_token(s.name)) report(out, path, key, "", "invalid state name");
    if (s.outcomes.empty()) report(out, path, key, "", "state declares no outcomes");
    for (const auto& outcome : s.outcomes) {
      if (!is_token(outcome)) report(out, path, key, outcome, "invalid outcome label");
      if (!def.transitions.count({key, outcome}))
        report(out, path, key, outcome, "missing transition");
    }
    if (s.kind == StateKind::Atomic)
      validate_atomic(s, path, out);
    else
      validate_composite(s, path, out);
  }

  for (const auto& [from, target] : def.transitions) {
    const auto& [state, outcome] = from;
    auto it = def.states.find(state);
    if (it == def.states.end()) {
      report(out, path, state, outcome, "transition from unknown state");
      continue;
    }
    if (!it->second.outcomes.count(outcome))
      report(out, path, state, outcome, "transition on undeclared outcome");
    if (!def.states.count(target) && !def.is_terminal(target))
      report(out, path, state, outcome, "unknown transition target");
  }

  if (!def.states.count(def.initial)) return;
  std::set<std::string> seen{def.initial};
  std::deque<std::string> frontier{def.initial};
  while (!frontier.empty()) {
    std::string current = frontier.front();
    frontier.pop_front();
    for (auto it = def.transitions.lower_bound({current, ""});
         it != def.transitions.end() && it->first.first == current; ++it) {
      if (def.states.count(it->second) && seen.insert(it->second).second)
        frontier.push_back(it->second);
    }
  }
  for (const auto& [key, s] : def.states)
    if (!seen.count(key)) report(out, path, key, "", "unreachable state");
}

}  // namespace

bool operator==(const StateDef& a, const StateDef& b) {
  if (a.name != b.name || a.kind != b.kind || a.outcomes != b.outcomes || a.action != b.action ||
      a.on_success != b.on_success || a.on_abort != b.on_abort || a.outcome_map != b.outcome_map)
    return false;
  if (!a.child || !b.child) return !a.child && !b.child;
  return *a.child == *b.child;
}

const StateDef* MachineDef::find_state(const std::string& state) const {
  auto it = states.find(state);
  return it == states.end() ? nullptr : &it->second;
}

bool is_token(std::string_view s) {
  if (s.empty()) return false;
  auto c0 = static_cast<unsigned char>(s.front());
  if (!std::isalpha(c0) && c0 != '_') return false;
  for (unsigned char c : s)
    if (!std::isalnum(c) && c != '_' && c != '-' && c != '.') return false;
  return true;
}

namespace {

void collect_machine_names(const MachineDef& def, std::map<std::string, int>& counts) {
  ++counts[def.name];
  for (const auto& [name, s] : def.states)
    if (s.child) collect_machine_names(*s.child, counts);
}

}  // namespace

ValidationReport validate_machine(const MachineDef& def) {
  ValidationReport report;
  validate_into(def, "", report.diagnostics);
  std::map<std::string, int> counts;
  collect_machine_names(def, counts);
  for (const auto& [name, count] : counts)
    if (count > 1)
      report.diagnostics.push_back({def.name, "", "", "machine name used more than once: " + name});
  return report;
}

const std::string& resolve_transition(const MachineDef& def, const std::string& state,
                                      const std::string& outcome) {
  auto it = def.transitions.find({state, outcome});
  if (it == def.transitions.end())
    throw HfsmError("unmapped outcome '" + outcome + "' in state '" + state + "'");
  return it->second;
}

std::string_view to_string(ActionStatus status) {
  switch (status) {
    case ActionStatus::Succeeded: return "succeeded";
    case ActionStatus::Aborted: return "aborted";
    case ActionStatus::Rejected: return "rejected";
  }
  return "unknown";
}

// --- Execution -------------------------------------------------------------

Execution::Execution(MachineDef def, ExecutionContext ctx, AgentId agent, EventLog& log,
                     GoalId first_goal)
    : def_(std::make_shared<const MachineDef>(std::move(def))),
      ctx_(std::move(ctx)),
      agent_(std::move(agent)),
      log_(&log),
      next_goal_(first_goal) {
  auto report = validate_machine(*def_);
  if (!report.ok())
    throw HfsmError("invalid machine '" + def_->name + "': " + report.diagnostics.front().message);
}

const ExecutionStatus& Execution::start(TimeMs now) {
  if (status_.phase != ExecutionStatus::Phase::Idle) throw HfsmError("execution already started");
  status_.phase = ExecutionStatus::Phase::Running;
  enter(*def_, def_->initial, now);
  return status_;
}

std::optional<ActionRequest> Execution::take_pending_action() {
  auto out = std::move(pending_);
  pending_.reset();
  return out;
}

void Execution::enter(const MachineDef& machine, const std::string& state, TimeMs now) {
  frames_.push_back(Frame{&machine, state});
  refresh_path();
  log_->emit(now, agent_, EventKind::StateEntered,
             {{"state", state},
              {"path", path_string()},
              {"depth", std::to_string(frames_.size() - 1)}});
  const StateDef& s = *machine.find_state(state);
  if (s.kind == StateKind::Composite) {
    enter(*s.child, s.child->initial, now);
    return;
  }
  ActionRequest request;
  request.goal_id = next_goal_++;
  request.server = s.action->server;
  request.actuator = s.action->actuator;
  request.state_path = path_string();
  if (const auto* ref = std::get_if<ContextRef>(&s.action->target)) {
    auto it = ctx_.find(ref->key);
    if (it == ctx_.end()) {
      fault("missing context key: " + ref->key);
      return;
    }
    const auto* value = std::get_if<double>(&it->second);
    if (!value) {
      fault("context key is not numeric: " + ref->key);
      return;
    }
    request.target = *value;
  } else {
    request.target = std::get<double>(s.action->target);
  }
  in_flight_ = request.goal_id;
  pending_ = std::move(request);
}

const ExecutionStatus& Execution::on_action_result(const ActionResult& result, TimeMs now) {
  if (status_.phase != ExecutionStatus::Phase::Running || !in_flight_ ||
      *in_flight_ != result.goal_id) {
    fault("stale action result");
    return status_;
  }
  in_flight_.reset();
  pending_.reset();
  const Frame& leaf = frames_.back();
  const StateDef& s = *leaf.machine->find_state(leaf.state);
  std::string outcome;
  switch (result.status) {
    case ActionStatus::Succeeded:
      outcome = s.on_success;
      ctx_[s.name + ".position"] = result.final_position;
      break;
    case ActionStatus::Aborted:
      if (s.on_abort.empty()) {
        fault("unmapped outcome: aborted in state " + s.name);
        return status_;
      }
      outcome = s.on_abort;
      break;
    case ActionStatus::Rejected:
      outcome = std::string(kRejectedOutcome);
      break;
  }
  emit_outcome(std::move(outcome), now);
  return status_;
}

void Execution::emit_outcome(std::string outcome, TimeMs now) {
  std::string child_outcome;
  while (true) {
    const Frame frame = frames_.back();
    const StateDef& s = *frame.machine->find_state(frame.state);
    if (!s.outcomes.count(outcome)) {
      fault("undeclared outcome '" + outcome + "' emitted by state " + s.name);
      return;
    }
    const auto it = frame.machine->transitions.find({s.name, outcome});
    if (it == frame.machine->transitions.end()) {
      fault("unmapped outcome '" + outcome + "' in state " + s.name);
      return;
    }
    const std::string& target = it->second;
    Detail detail{{"state", s.name},
                  {"path", path_string()},
                  {"depth", std::to_string(frames_.size() - 1)},
                  {"outcome", outcome},
                  {"next", target}};
    if (!child_outcome.empty()) detail["child_outcome"] = child_outcome;
    log_->emit(now, agent_, EventKind::StateExited, std::move(detail));
    frames_.pop_back();

    if (!frame.machine->is_terminal(target)) {
      enter(*frame.machine, target, now);
      return;
    }
    if (frames_.empty()) {
      status_.phase = ExecutionStatus::Phase::Completed;
      status_.active_path.clear();
      status_.terminal_outcome = target;
      return;
    }
    const StateDef& parent = *frames_.back().machine->find_state(frames_.back().state);
    child_outcome = target;
    outcome = parent.outcome_map.at(target);
  }
}

void Execution::fault(std::string reason) {
  status_.phase = ExecutionStatus::Phase::Faulted;
  status_.fault_reason = std::move(reason);
  pending_.reset();
  in_flight_.reset();
}

std::string Execution::path_string() const {
  std::string out;
  for (const auto& f : frames_) {
    if (!out.empty()) out.push_back('/');
    out += f.state;
  }
  return out;
}

void Execution::refresh_path() {
  status_.active_path.clear();
  for (const auto& f : frames_) status_.active_path.push_back(f.state);
}

}  // namespace seqauto::hfsm
