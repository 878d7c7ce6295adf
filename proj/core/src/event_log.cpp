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

#include "seqauto/event_log.hpp"

#include <array>
#include <charconv>
#include <utility>

namespace seqauto {

namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 20> kKindNames{{
    {EventKind::ScenarioStart, "ScenarioStart"},
    {EventKind::LinkDown, "LinkDown"},
    {EventKind::LinkUp, "LinkUp"},
    {EventKind::StateEntered, "StateEntered"},
    {EventKind::StateExited, "StateExited"},
    {EventKind::ActionStarted, "ActionStarted"},
    {EventKind::ActionFeedback, "ActionFeedback"},
    {EventKind::ActionCompleted, "ActionCompleted"},
    {EventKind::ActionRejected, "ActionRejected"},
    {EventKind::PingAttempt, "PingAttempt"},
    {EventKind::PingResult, "PingResult"},
    {EventKind::TriggerPublished, "TriggerPublished"},
    {EventKind::TriggerReceived, "TriggerReceived"},
    {EventKind::TriggerIgnored, "TriggerIgnored"},
    {EventKind::MessageDropped, "MessageDropped"},
    {EventKind::BehaviorStarted, "BehaviorStarted"},
    {EventKind::BehaviorCompleted, "BehaviorCompleted"},
    {EventKind::MissionDone, "MissionDone"},
    {EventKind::Fault, "Fault"},
    {EventKind::ScenarioEnd, "ScenarioEnd"},
}};

bool needs_escape(unsigned char c) { return c <= 0x20 || c >= 0x7f || c == '%' || c == '='; }

void append_escaped(std::string& out, std::string_view value) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  for (unsigned char c : value) {
    if (needs_escape(c)) {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xf]);
    } else {
      out.push_back(static_cast<char>(c));
    }
  }
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

std::optional<std::string> unescape(std::string_view value) {
  std::string out;
  out.reserve(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (value[i] != '%') {
      out.push_back(value[i]);
      continue;
    }
    if (i + 2 >= value.size()) return std::nullopt;
    int hi = hex_value(value[i + 1]);
    int lo = hex_value(value[i + 2]);
    if (hi < 0 || lo < 0) return std::nullopt;
    out.push_back(static_cast<char>(hi * 16 + lo));
    i += 2;
  }
  return out;
}

bool set_error(std::string* error, std::string message) {
  if (error) *error = std::move(message);
  return false;
}

}  // namespace

std::string_view to_string(EventKind kind) {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return name;
  return "Unknown";
}

std::optional<EventKind> parse_event_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames)
    if (n == name) return k;
  return std::nullopt;
}

std::string EventRecord::get(const std::string& key) const {
  auto it = detail.find(key);
  return it == detail.end() ? std::string{} : it->second;
}

std::optional<std::int64_t> EventRecord::get_int(const std::string& key) const {
  auto it = detail.find(key);
  if (it == detail.end()) return std::nullopt;
  std::int64_t v = 0;
  const auto& s = it->second;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

void EventLog::emit(TimeMs t, const AgentId& agent, EventKind kind, Detail detail) {
  records_.push_back(EventRecord{t, agent, kind, std::move(detail)});
}

std::vector<EventRecord> EventLog::select(EventKind kind) const {
  std::vector<EventRecord> out;
  for (const auto& r : records_)
    if (r.kind == kind) out.push_back(r);
  return out;
}

std::vector<EventRecord> EventLog::select(EventKind kind, const AgentId& agent) const {
  std::vector<EventRecord> out;
  for (const auto& r : records_)
    if (r.kind == kind && r.agent == agent) out.push_back(r);
  return out;
}

std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

std::string encode_record(const EventRecord& record) {
  std::string out = "t=" + std::to_string(record.t) + " agent=";
  append_escaped(out, record.agent);
  out += " kind=";
  out += to_string(record.kind);
  for (const auto& [key, value] : record.detail) {
    out.push_back(' ');
    append_escaped(out, key);
    out.push_back('=');
    append_escaped(out, value);
  }
  return out;
}

std::string encode_log(const std::vector<EventRecord>& records) {
  std::string out{kLogHeader};
  out.push_back('\n');
  for (const auto& r : records) {
    out += encode_record(r);
    out.push_back('\n');
  }
  return out;
}

std::optional<EventRecord> decode_record(std::string_view line, std::string* error) {
  std::vector<std::pair<std::string, std::string>> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    std::size_t end = line.find(' ', pos);
    if (end == std::string_view::npos) end = line.size();
    std::string_view field = line.substr(pos, end - pos);
    pos = end + 1;
    if (field.empty()) {
      set_error(error, "empty field");
      return std::nullopt;
    }
    std::size_t eq = field.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      set_error(error, "field without key=value form");
      return std::nullopt;
    }
    auto key = unescape(field.substr(0, eq));
    auto value = unescape(field.substr(eq + 1));
    if (!key || !value) {
      set_error(error, "bad percent escape");
      return std::nullopt;
    }
    fields.emplace_back(std::move(*key), std::move(*value));
  }
  if (fields.size() < 3 || fields[0].first != "t" || fields[1].first != "agent" ||
      fields[2].first != "kind") {
    set_error(error, "record must start with t, agent, kind");
    return std::nullopt;
  }
  EventRecord record;
  const auto& ts = fields[0].second;
  auto [p, ec] = std::from_chars(ts.data(), ts.data() + ts.size(), record.t);
  if (ec != std::errc{} || p != ts.data() + ts.size()) {
    set_error(error, "bad time value");
    return std::nullopt;
  }
  record.agent = fields[1].second;
  auto kind = parse_event_kind(fields[2].second);
  if (!kind) {
    set_error(error, "unknown kind: " + fields[2].second);
    return std::nullopt;
  }
  record.kind = *kind;
  for (std::size_t i = 3; i < fields.size(); ++i) {
    if (!record.detail.emplace(fields[i].first, fields[i].second).second) {
      set_error(error, "duplicate detail key: " + fields[i].first);
      return std::nullopt;
    }
  }
  return record;
}

LogParseResult parse_log(std::string_view text) {
  LogParseResult result;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::string error;
    if (auto record = decode_record(line, &error))
      result.records.push_back(std::move(*record));
    else
      result.errors.push_back("line " + std::to_string(line_no) + ": " + error);
  }
  return result;
}

}  // namespace seqauto
