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

#include "seqauto/coordinator.hpp"

#include <charconv>
#include <stdexcept>

namespace seqauto::coord {

namespace {

template <class Int>
std::optional<Int> to_int(const std::string& s) {
  Int v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::WaitingForTrigger: return "WaitingForTrigger";
    case Phase::Executing: return "Executing";
    case Phase::AwaitingReachability: return "AwaitingReachability";
    case Phase::TriggerSent: return "TriggerSent";
    case Phase::MissionDone: return "MissionDone";
    case Phase::Faulted: return "Faulted";
  }
  return "Unknown";
}

bool is_legal_transition(Phase from, Phase to) {
  if (to == Phase::Faulted) return from != Phase::MissionDone && from != Phase::Faulted;
  switch (from) {
    case Phase::WaitingForTrigger:
      // The head finishes on the trigger that closes the last cycle.
      return to == Phase::Executing || to == Phase::MissionDone;
    case Phase::Executing:
      return to == Phase::AwaitingReachability || to == Phase::MissionDone;
    case Phase::AwaitingReachability:
      return to == Phase::TriggerSent;
    case Phase::TriggerSent:
      return to == Phase::WaitingForTrigger || to == Phase::MissionDone;
    case Phase::MissionDone:
    case Phase::Faulted:
      return false;
  }
  return false;
}

bus::Payload TriggerMessage::to_payload() const {
  return {{"mission", mission_id},
          {"epoch", std::to_string(epoch)},
          {"sender", sender},
          {"sent_at", std::to_string(sent_at)}};
}

std::optional<TriggerMessage> TriggerMessage::from_payload(const bus::Payload& payload) {
  auto field = [&](const char* key) -> const std::string* {
    auto it = payload.find(key);
    return it == payload.end() ? nullptr : &it->second;
  };
  const auto* mission = field("mission");
  const auto* epoch = field("epoch");
  const auto* sender = field("sender");
  const auto* sent_at = field("sent_at");
  if (!mission || !epoch || !sender || !sent_at) return std::nullopt;
  auto e = to_int<int>(*epoch);
  auto s = to_int<TimeMs>(*sent_at);
  if (!e || !s || *e < 0) return std::nullopt;
  return TriggerMessage{*mission, *e, *sender, *s};
}

AgentConfig make_agent_config(const Scenario& sc, const RobotSpec& robot) {
  return make_agent_config(sc, robot, is_cyclic(sc));
}

AgentConfig make_agent_config(const Scenario& sc, const RobotSpec& robot, bool cyclic) {
  AgentConfig c;
  c.robot = robot;
  c.mission_id = sc.mission_id;
  if (robot.successor)
    if (const RobotSpec* next = sc.find_robot(*robot.successor)) c.successor_topic = next->trigger_topic;
  c.head = sc.head;
  if (robot.successor || !robot.probe_peer.empty())
    if (const RobotSpec* peer = sc.find_robot(robot.peer())) c.peer_address = peer->address;
  c.is_head = robot.id == sc.head;
  c.cyclic = cyclic;
  c.epochs = sc.epochs;
  c.ping_interval = sc.ping_interval_of(robot);
  c.horizon = sc.horizon;
  return c;
}

std::optional<TimeMs> await_reachability(const bus::LinkSchedule& link, TimeMs from,
                                         TimeMs interval, TimeMs horizon) {
  if (interval <= 0) throw std::invalid_argument("probe interval must be positive");
  TimeMs t = from;
  for (const auto& outage : link.outages()) {
    if (t > horizon) return std::nullopt;
    if (outage.end <= t) continue;
    if (!outage.contains(t)) break;
    const TimeMs steps = (outage.end - from + interval - 1) / interval;
    t = from + steps * interval;
  }
  if (t > horizon) return std::nullopt;
  return t;
}

Coordinator::Coordinator(AgentConfig config, Scheduler& scheduler, bus::MessageBus& bus,
                         EventLog& log, std::map<std::string, agents::ActionServer*> servers)
    : config_(std::move(config)),
      scheduler_(&scheduler),
      bus_(&bus),
      log_(&log),
      servers_(std::move(servers)) {}

void Coordinator::attach() {
  bus_->subscribe(config_.robot.domain, config_.robot.trigger_topic, id(),
                  [this](const bus::Envelope& env) {
                    auto msg = TriggerMessage::from_payload(env.payload);
                    if (!msg) {
                      log_->emit(env.delivery_time, id(), EventKind::TriggerIgnored,
                                 {{"msg", std::to_string(env.id)}, {"reason", "malformed"}});
                      return;
                    }
                    on_trigger(*msg, env.delivery_time, DeliveryInfo{env.id, env.hops});
                  });
}

void Coordinator::set_phase(Phase next) {
  if (!is_legal_transition(phase_, next))
    throw std::logic_error("illegal coordinator transition " + std::string(to_string(phase_)) +
                           " -> " + std::string(to_string(next)));
  phase_ = next;
}

TriggerDisposition Coordinator::on_trigger(const TriggerMessage& msg, TimeMs t,
                                           const std::optional<DeliveryInfo>& delivery) {
  Detail detail{{"from", msg.sender},
                {"epoch", std::to_string(msg.epoch)},
                {"mission", msg.mission_id},
                {"published", std::to_string(msg.sent_at)}};
  if (delivery) detail["msg"] = std::to_string(delivery->msg_id);

  const auto key = std::make_tuple(msg.mission_id, msg.epoch, msg.sender);
  if (seen_.count(key)) {
    detail["reason"] = "duplicate";
    log_->emit(t, id(), EventKind::TriggerIgnored, std::move(detail));
    return TriggerDisposition::Duplicate;
  }
  if (phase_ != Phase::WaitingForTrigger || msg.mission_id != config_.mission_id) {
    detail["reason"] = msg.mission_id != config_.mission_id ? "foreign_mission" : "wrong_phase";
    detail["phase"] = std::string(to_string(phase_));
    log_->emit(t, id(), EventKind::TriggerIgnored, std::move(detail));
    return TriggerDisposition::WrongPhase;
  }
  seen_.insert(key);

  if (delivery) {
    detail["latency"] = std::to_string(t - msg.sent_at);
    detail["link_ms"] = std::to_string(delivery->hops.back());
    if (delivery->hops.size() > 1) detail["bridge_ms"] = std::to_string(delivery->hops.front());
  }
  log_->emit(t, id(), EventKind::TriggerReceived, std::move(detail));
  if (accept_hook_) accept_hook_(msg, delivery, t);

  epoch_ = msg.epoch;
  if (config_.is_head && config_.cyclic && msg.epoch >= config_.epochs) {
    // The trigger closing the final cycle doubles as the completion report.
    finish(t);
    return TriggerDisposition::Accepted;
  }
  start_behavior(t);
  return TriggerDisposition::Accepted;
}

void Coordinator::start_behavior(TimeMs t) {
  set_phase(Phase::Executing);
  log_->emit(t, id(), EventKind::BehaviorStarted,
             {{"epoch", std::to_string(epoch_)}, {"behavior", config_.robot.behavior.name}});
  execution_ = std::make_unique<hfsm::Execution>(config_.robot.behavior, config_.robot.params, id(),
                                                 *log_, next_goal_);
  ++execution_serial_;
  execution_->start(t);
  drive(t);
}

void Coordinator::drive(TimeMs t) {
  using Phase_ = hfsm::ExecutionStatus::Phase;
  while (true) {
    next_goal_ = execution_->next_goal_id();
    const auto& status = execution_->status();
    if (status.phase == Phase_::Completed) {
      on_behavior_completed(t);
      return;
    }
    if (status.phase == Phase_::Faulted) {
      log_->emit(t, id(), EventKind::BehaviorCompleted,
                 {{"epoch", std::to_string(epoch_)}, {"outcome", "faulted"}});
      fail(t, "FaultedEpoch: " + status.fault_reason);
      return;
    }
    auto request = execution_->take_pending_action();
    if (!request) return;  // waiting on an in-flight goal

    auto it = servers_.find(request->server);
    agents::SubmitOutcome outcome = agents::Rejected{"unknown server"};
    if (it != servers_.end()) {
      const auto serial = execution_serial_;
      outcome = it->second->submit(
          request->goal_id, agents::MoveMotorGoal{request->actuator, request->target}, t,
          [this, serial](const hfsm::ActionResult& result, TimeMs now) {
            if (serial != execution_serial_ || finished()) return;
            execution_->on_action_result(result, now);
            drive(now);
          });
    } else {
      log_->emit(t, id(), EventKind::ActionRejected,
                 {{"server", request->server},
                  {"actuator", request->actuator},
                  {"goal", std::to_string(request->goal_id)},
                  {"reason", "unknown server"}});
    }
    if (const auto* rejected = std::get_if<agents::Rejected>(&outcome)) {
      hfsm::ActionResult result;
      result.goal_id = request->goal_id;
      result.status = hfsm::ActionStatus::Rejected;
      result.reason = rejected->reason;
      execution_->on_action_result(result, t);
      continue;
    }
    return;
  }
}

void Coordinator::on_behavior_completed(TimeMs t) {
  const std::string outcome = execution_->status().terminal_outcome;
  log_->emit(t, id(), EventKind::BehaviorCompleted,
             {{"epoch", std::to_string(epoch_)}, {"outcome", outcome}});
  if (outcome != config_.robot.success_outcome) {
    fail(t, "FaultedEpoch: behavior ended in " + outcome);
    return;
  }
  if (!config_.robot.successor) {
    finish(t);
    return;
  }
  completed_at_ = t;
  set_phase(Phase::AwaitingReachability);
  probe_tick(t, 1);
}

void Coordinator::probe_tick(TimeMs t, int attempt) {
  if (phase_ != Phase::AwaitingReachability) return;
  if (t > config_.horizon) {
    fail(config_.horizon, "TimedOutEpoch");
    return;
  }
  const AgentId& peer = config_.robot.peer();
  Detail detail{{"peer", peer}, {"attempt", std::to_string(attempt)}, {"epoch", std::to_string(epoch_)}};
  if (!config_.peer_address.empty()) detail["address"] = config_.peer_address;
  log_->emit(t, id(), EventKind::PingAttempt, detail);
  const bool up = bus_->probe(id(), peer, t);
  detail["ok"] = up ? "true" : "false";
  log_->emit(t, id(), EventKind::PingResult, std::move(detail));
  if (up) {
    emit_trigger(t);
    return;
  }
  scheduler_->schedule(t + config_.ping_interval, DispatchClass::Probe, id(),
                       [this, attempt](TimeMs now) { probe_tick(now, attempt + 1); });
}

void Coordinator::emit_trigger(TimeMs t) {
  const AgentId& successor = *config_.robot.successor;
  // Handing back to the chain head closes a cycle and opens the next epoch.
  const int next_epoch = successor == config_.head ? epoch_ + 1 : epoch_;
  const TriggerMessage msg{config_.mission_id, next_epoch, id(), t};
  const auto msg_id =
      bus_->publish(config_.robot.domain, config_.successor_topic, msg.to_payload(), id(), t);
  log_->emit(t, id(), EventKind::TriggerPublished,
             {{"to", successor},
              {"topic", config_.successor_topic},
              {"epoch", std::to_string(next_epoch)},
              {"msg", std::to_string(msg_id)},
              {"wait", std::to_string(t - completed_at_)}});
  set_phase(Phase::TriggerSent);
  if (config_.cyclic && (config_.is_head || epoch_ + 1 < config_.epochs))
    set_phase(Phase::WaitingForTrigger);
  else
    finish(t);
}

void Coordinator::finish(TimeMs t) {
  set_phase(Phase::MissionDone);
  log_->emit(t, id(), EventKind::MissionDone, {{"epoch", std::to_string(epoch_)}});
}

void Coordinator::fail(TimeMs t, const std::string& reason) {
  set_phase(Phase::Faulted);
  fault_reason_ = reason;
  log_->emit(t, id(), EventKind::Fault,
             {{"reason", reason}, {"epoch", std::to_string(epoch_)}});
}

}  // namespace seqauto::coord
