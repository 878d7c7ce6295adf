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

#include <optional>
#include <string>
#include <vector>

#include "seqauto/event_log.hpp"

namespace seqauto::analysis {

struct Summary {
  std::size_t count = 0;
  TimeMs min = 0;
  TimeMs max = 0;
  double mean = 0.0;

  void add(TimeMs value);

 private:
  double sum_ = 0.0;
};

struct LatencyStats {
  Summary hop;              // every individual network hop (bridge relay or last hop)
  Summary trigger;          // TriggerPublished -> TriggerReceived, per matched trigger
  Summary direct_trigger;   // subset delivered within one domain
  Summary bridged_trigger;  // subset relayed through a bridge
  Summary deferral;         // TriggerPublished - BehaviorCompleted (probe wait)
  /// Chain-head initial trigger to the last BehaviorStarted.
  std::optional<TimeMs> end_to_end;
  /// Published triggers with no matching receipt, and similar anomalies.
  std::vector<std::string> integrity_violations;
};

LatencyStats compute_latency(const std::vector<EventRecord>& log);

std::string format_latency_summary(const LatencyStats& stats);

/// Structural log checks: non-decreasing time, trigger publish/receive
/// pairing, action start/finish pairing, state bracketing per agent.
/// Returns one message per violation.
std::vector<std::string> check_log_integrity(const std::vector<EventRecord>& log);

}  // namespace seqauto::analysis
