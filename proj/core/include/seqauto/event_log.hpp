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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seqauto/types.hpp"

namespace seqauto {

enum class EventKind {
  ScenarioStart,
  LinkDown,
  LinkUp,
  StateEntered,
  StateExited,
  ActionStarted,
  ActionFeedback,
  ActionCompleted,
  ActionRejected,
  PingAttempt,
  PingResult,
  TriggerPublished,
  TriggerReceived,
  TriggerIgnored,
  MessageDropped,
  BehaviorStarted,
  BehaviorCompleted,
  MissionDone,
  Fault,
  ScenarioEnd,
};

std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view name);

/// Flat key/value payload of a record. Ordered so encoding is canonical.
using Detail = std::map<std::string, std::string>;

struct EventRecord {
  TimeMs t = 0;
  AgentId agent;
  EventKind kind = EventKind::ScenarioStart;
  Detail detail;

  /// Empty string when the key is absent.
  std::string get(const std::string& key) const;
  /// Integer detail value; nullopt when absent or malformed.
  std::optional<std::int64_t> get_int(const std::string& key) const;

  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

/// Append-only record sink shared by every component of one simulation.
class EventLog {
 public:
  void emit(TimeMs t, const AgentId& agent, EventKind kind, Detail detail = {});
  void append(EventRecord record) { records_.push_back(std::move(record)); }

  const std::vector<EventRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  std::vector<EventRecord> select(EventKind kind) const;
  std::vector<EventRecord> select(EventKind kind, const AgentId& agent) const;

 private:
  std::vector<EventRecord> records_;
};

/// Shortest round-trip decimal form; integral values print without a fraction.
std::string format_number(double value);

inline constexpr std::string_view kLogHeader = "# seqauto event log v1";

/// One line, no trailing newline: `t=.. agent=.. kind=.. k=v ...`.
std::string encode_record(const EventRecord& record);
/// Header line followed by one LF-terminated line per record.
std::string encode_log(const std::vector<EventRecord>& records);

std::optional<EventRecord> decode_record(std::string_view line, std::string* error = nullptr);

struct LogParseResult {
  std::vector<EventRecord> records;
  /// "line N: message" entries; empty when the whole document decoded.
  std::vector<std::string> errors;

  bool ok() const { return errors.empty(); }
};

/// Lines starting with '#' and blank lines are skipped.
LogParseResult parse_log(std::string_view text);

}  // namespace seqauto
