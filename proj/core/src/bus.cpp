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

#include "seqauto/bus.hpp"

#include <algorithm>

namespace seqauto::bus {

LinkSchedule LinkSchedule::normalize(std::vector<Interval> intervals, bool* overlapped) {
  if (overlapped) *overlapped = false;
  for (const auto& iv : intervals) {
    if (iv.start < 0 || iv.end < 0) throw BusError("negative outage time");
    if (iv.end <= iv.start) throw BusError("empty outage interval");
  }
  std::sort(intervals.begin(), intervals.end());
  LinkSchedule out;
  for (const auto& iv : intervals) {
    if (!out.outages_.empty() && iv.start <= out.outages_.back().end) {
      if (overlapped && iv.start < out.outages_.back().end) *overlapped = true;
      out.outages_.back().end = std::max(out.outages_.back().end, iv.end);
    } else {
      out.outages_.push_back(iv);
    }
  }
  return out;
}

bool LinkSchedule::is_up(TimeMs t) const {
  // First interval starting after t; the one before it is the only candidate.
  auto it = std::upper_bound(outages_.begin(), outages_.end(), t,
                             [](TimeMs v, const Interval& iv) { return v < iv.start; });
  if (it == outages_.begin()) return true;
  return !std::prev(it)->contains(t);
}

LinkKey make_link_key(const AgentId& a, const AgentId& b) {
  return a < b ? LinkKey{a, b} : LinkKey{b, a};
}

std::string link_name(const LinkKey& key) { return key.first + "<->" + key.second; }

void LinkTable::set(const AgentId& a, const AgentId& b, LinkSchedule schedule) {
  links_[make_link_key(a, b)] = std::move(schedule);
}

bool LinkTable::is_up(const AgentId& a, const AgentId& b, TimeMs t) const {
  if (a == b) return true;
  auto it = links_.find(make_link_key(a, b));
  return it == links_.end() || it->second.is_up(t);
}

LatencySampler::LatencySampler(LatencyModel model, std::uint64_t seed)
    : model_(model), rng_(seed) {
  if (model_.lo < 0 || model_.hi < model_.lo) throw BusError("invalid latency model bounds");
}

TimeMs LatencySampler::draw() {
  if (model_.kind == LatencyModel::Kind::Fixed) return model_.lo;
  const auto span = static_cast<std::uint64_t>(model_.hi - model_.lo) + 1;
  return model_.lo + static_cast<TimeMs>(rng_() % span);
}

MessageBus::MessageBus(Scheduler& scheduler, EventLog& log, LinkTable links, LatencyModel latency,
                       std::uint64_t seed)
    : scheduler_(&scheduler), log_(&log), links_(std::move(links)), sampler_(latency, seed) {}

void MessageBus::add_domain(DomainId domain) { domains_.insert(domain); }

void MessageBus::register_agent(const AgentId& agent, DomainId domain) {
  if (!has_domain(domain)) throw BusError("unknown domain " + to_string(domain));
  if (agents_.count(agent)) throw BusError("agent already registered: " + agent);
  agents_.emplace(agent, domain);
}

void MessageBus::subscribe(DomainId domain, const std::string& topic, const AgentId& agent,
                           Handler handler) {
  if (!has_domain(domain)) throw BusError("unknown domain " + to_string(domain));
  auto it = agents_.find(agent);
  if (it == agents_.end() || it->second != domain)
    throw BusError("agent " + agent + " is not registered on domain " + to_string(domain));
  auto& subs = channels_[{domain, topic}];
  subs.push_back(Subscriber{agent, std::move(handler)});
  std::stable_sort(subs.begin(), subs.end(),
                   [](const Subscriber& a, const Subscriber& b) { return a.agent < b.agent; });
}

std::uint64_t MessageBus::publish(DomainId domain, const std::string& topic, Payload payload,
                                  const AgentId& sender, TimeMs t) {
  auto it = agents_.find(sender);
  if (it == agents_.end() || it->second != domain)
    throw BusError("publisher " + sender + " is not registered on domain " + to_string(domain));

  Envelope proto;
  proto.id = next_id_++;
  proto.origin_domain = domain;
  proto.topic = topic;
  proto.payload = std::move(payload);
  proto.sender = sender;
  proto.publish_time = t;
  fan_out(proto, domain, t);

  for (const auto& rule : rules_) {
    if (rule.from != domain || rule.topic != topic) continue;
    Envelope relayed = proto;
    const TimeMs hop = sampler_.draw();
    relayed.hops.push_back(hop);
    const DomainId to = rule.to;
    scheduler_->schedule(t + hop, DispatchClass::Delivery, "~bridge",
                         [this, relayed, to](TimeMs now) { fan_out(relayed, to, now); });
  }
  return proto.id;
}

void MessageBus::fan_out(const Envelope& proto, DomainId domain, TimeMs at) {
  auto channel = channels_.find({domain, proto.topic});
  if (channel == channels_.end()) return;
  for (const auto& sub : channel->second) {
    Envelope env = proto;
    env.domain = domain;
    env.receiver = sub.agent;
    const TimeMs hop = sampler_.draw();
    env.hops.push_back(hop);
    env.delivery_time = at + hop;
    Handler handler = sub.handler;
    scheduler_->schedule(env.delivery_time, DispatchClass::Delivery, sub.agent,
                         [this, env, handler](TimeMs) { deliver(env, handler); });
  }
}

void MessageBus::deliver(const Envelope& envelope, const Handler& handler) {
  if (!links_.is_up(envelope.sender, envelope.receiver, envelope.delivery_time)) {
    log_->emit(envelope.delivery_time, envelope.receiver, EventKind::MessageDropped,
               {{"msg", std::to_string(envelope.id)},
                {"topic", envelope.topic},
                {"from", envelope.sender},
                {"domain", to_string(envelope.domain)},
                {"published", std::to_string(envelope.publish_time)},
                {"reason", "link_down"}});
    return;
  }
  handler(envelope);
}

bool MessageBus::probe(const AgentId& a, const AgentId& b, TimeMs t) const {
  if (!agents_.count(a)) throw BusError("unknown agent: " + a);
  if (!agents_.count(b)) throw BusError("unknown agent: " + b);
  return links_.is_up(a, b, t);
}

void MessageBus::add_bridge_rule(const BridgeRule& rule) {
  if (!has_domain(rule.from)) throw BusError("unknown domain " + to_string(rule.from));
  if (!has_domain(rule.to)) throw BusError("unknown domain " + to_string(rule.to));
  if (rule.from == rule.to) throw BusError("bridge rule within a single domain");
  rules_.insert(rule);
}

}  // namespace seqauto::bus
