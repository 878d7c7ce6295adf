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

namespace seqauto::timeline {

enum class Format { Text, Structured };

struct Options {
  /// Column width in ms; chosen from the log span when unset.
  std::optional<TimeMs> bucket_ms;
  int width = 100;
};

/// A link outage as observed in the log. An open band (no LinkUp) ends at
/// the last record time.
struct Band {
  std::string link;
  TimeMs start = 0;
  TimeMs end = 0;
  bool closed = true;
};

/// Trigger handoff from one lane to another.
struct Edge {
  AgentId from;
  AgentId to;
  TimeMs published = 0;
  TimeMs received = 0;
  std::string msg;
  std::int64_t epoch = 0;
};

struct Lane {
  AgentId agent;
  std::vector<std::size_t> records;  // indices into the source log
};

struct Report {
  std::vector<EventRecord> records;
  std::vector<Lane> lanes;
  std::vector<Band> bands;
  std::vector<Edge> edges;
  TimeMs start = 0;
  TimeMs end = 0;
};

Report build_timeline(const std::vector<EventRecord>& log);

std::string render_timeline(const std::vector<EventRecord>& log, Format format,
                            const Options& options = {});

inline constexpr std::string_view kTimelineHeader = "# seqauto timeline v1";

}  // namespace seqauto::timeline
