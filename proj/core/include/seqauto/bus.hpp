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

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "seqauto/event_log.hpp"
#include "seqauto/scheduler.hpp"
#include "seqauto/types.hpp"

namespace seqauto::bus {

class BusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Half-open outage interval [start, end).
struct Interval {
  TimeMs start = 0;
  TimeMs end = 0;

  bool contains(TimeMs t) const { return start <= t && t < end; }
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

/// Outage intervals of one link, kept sorted and disjoint.
class LinkSchedule {
 public:
  LinkSchedule() = default;

  /// Sorts and merges overlapping or touching intervals. Throws BusError on a
  /// negative time or an interval with end <= start. `overlapped` is set when
  /// two input intervals actually overlapped.
  static LinkSchedule normalize(std::vector<Interval> intervals, bool* overlapped = nullptr);

  bool is_up(TimeMs t) const;
  const std::vector<Interval>& outages() const { return outages_; }

  friend bool operator==(const LinkSchedule&, const LinkSchedule&) = default;

 private:
  std::vector<Interval> outages_;
};

/// Unordered agent pair, stored with the smaller id first.
using LinkKey = std::pair<AgentId, AgentId>;
LinkKey make_link_key(const AgentId& a, const AgentId& b);
/// Display name used for link lanes: "a<->b".
std::string link_name(const LinkKey& key);

class LinkTable {
 public:
  void set(const AgentId& a, const AgentId& b, LinkSchedule schedule);
  /// An agent is always linked to itself; undeclared links never go down.
  bool is_up(const AgentId& a, const AgentId& b, TimeMs t) const;
  const std::map<LinkKey, LinkSchedule>& links() const { return links_; }

 private:
  std::map<LinkKey, LinkSchedule> links_;
};

struct LatencyModel {
  enum class Kind { Fixed, Uniform };

  Kind kind = Kind::Uniform;
  TimeMs lo = 20;
  TimeMs hi = 500;

  static LatencyModel fixed(TimeMs d) { return {Kind::Fixed, d, d}; }
  static LatencyModel uniform(TimeMs lo, TimeMs hi) { return {Kind::Uniform, lo, hi}; }
  /// uniform(20, 500): the upper bound is the measured worst case on the
  /// reference hardware; the lower bound is a local choice.
  static LatencyModel default_model() { return uniform(20, 500); }

  friend bool operator==(const LatencyModel&, const LatencyModel&) = default;
};

/// Seeded draws from a LatencyModel. Uses mt19937_64 with modulo reduction so
/// the sequence is identical across standard library implementations.
class LatencySampler {
 public:
  LatencySampler(LatencyModel model, std::uint64_t seed);
  TimeMs draw();
  const LatencyModel& model() const { return model_; }

 private:
  LatencyModel model_;
  std::mt19937_64 rng_;
};

struct BridgeRule {
  DomainId from;
  DomainId to;
  std::string topic;

  friend auto operator<=>(const BridgeRule&, const BridgeRule&) = default;
};

using Payload = std::map<std::string, std::string>;

struct Envelope {
  std::uint64_t id = 0;     // one id per publish, shared by all its deliveries
  DomainId origin_domain;   // where it was published
  DomainId domain;          // where it was delivered
  std::string topic;
  Payload payload;
  AgentId sender;
  AgentId receiver;
  TimeMs publish_time = 0;
  TimeMs delivery_time = 0;
  /// Latency of each hop; two entries when relayed through a bridge.
  std::vector<TimeMs> hops;

  bool bridged() const { return hops.size() > 1; }
};

/// Domain-scoped volatile pub/sub over a simulated network.
///
/// A delivery is dropped (and logged as MessageDropped) when the link between
/// publisher and subscriber is down at the delivery instant; nothing is
/// retried. Bridged copies cost one extra latency draw and are not re-bridged.
class MessageBus {
 public:
  using Handler = std::function<void(const Envelope&)>;

  MessageBus(Scheduler& scheduler, EventLog& log, LinkTable links, LatencyModel latency,
             std::uint64_t seed);

  void add_domain(DomainId domain);
  bool has_domain(DomainId domain) const { return domains_.count(domain) > 0; }
  void register_agent(const AgentId& agent, DomainId domain);

  void subscribe(DomainId domain, const std::string& topic, const AgentId& agent, Handler handler);
  /// Returns the message id.
  std::uint64_t publish(DomainId domain, const std::string& topic, Payload payload,
                        const AgentId& sender, TimeMs t);
  /// Instantaneous reachability check; ignores domains.
  bool probe(const AgentId& a, const AgentId& b, TimeMs t) const;
  /// Duplicate rules are ignored.
  void add_bridge_rule(const BridgeRule& rule);

  const LinkTable& links() const { return links_; }
  const std::set<BridgeRule>& bridge_rules() const { return rules_; }

 private:
  struct Subscriber {
    AgentId agent;
    Handler handler;
  };
  using Channel = std::pair<DomainId, std::string>;

  void fan_out(const Envelope& proto, DomainId domain, TimeMs at);
  void deliver(const Envelope& envelope, const Handler& handler);

  Scheduler* scheduler_;
  EventLog* log_;
  LinkTable links_;
  LatencySampler sampler_;
  std::set<DomainId> domains_;
  std::map<AgentId, DomainId> agents_;
  std::map<Channel, std::vector<Subscriber>> channels_;
  std::set<BridgeRule> rules_;
  std::uint64_t next_id_ = 1;
};

}  // namespace seqauto::bus
