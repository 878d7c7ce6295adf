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

#include "seqauto/timeline.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace seqauto::timeline {
namespace {

bool is_link_record(const EventRecord& r) {
  return r.kind == EventKind::LinkDown || r.kind == EventKind::LinkUp;
}

bool is_marker(const EventRecord& r) {
  return r.kind == EventKind::ScenarioStart || r.kind == EventKind::ScenarioEnd;
}

char glyph(EventKind kind) {
  switch (kind) {
    case EventKind::StateEntered: return '>';
    case EventKind::StateExited: return '<';
    case EventKind::ActionStarted: return 'a';
    case EventKind::ActionFeedback: return '.';
    case EventKind::ActionCompleted: return 'A';
    case EventKind::ActionRejected: return 'r';
    case EventKind::PingAttempt: return 'p';
    case EventKind::PingResult: return 'P';
    case EventKind::TriggerPublished: return 'T';
    case EventKind::TriggerReceived: return 'R';
    case EventKind::TriggerIgnored: return 'i';
    case EventKind::MessageDropped: return 'x';
    case EventKind::BehaviorStarted: return 'B';
    case EventKind::BehaviorCompleted: return 'b';
    case EventKind::MissionDone: return 'D';
    case EventKind::Fault: return 'F';
    default: return '?';
  }
}

// Higher wins when several records share one column.
int glyph_rank(EventKind kind) {
  switch (kind) {
    case EventKind::Fault: return 10;
    case EventKind::MissionDone: return 9;
    case EventKind::TriggerPublished:
    case EventKind::TriggerReceived: return 8;
    case EventKind::BehaviorStarted:
    case EventKind::BehaviorCompleted: return 7;
    case EventKind::TriggerIgnored:
    case EventKind::MessageDropped: return 6;
    case EventKind::ActionRejected: return 5;
    case EventKind::ActionStarted:
    case EventKind::ActionCompleted: return 4;
    case EventKind::PingResult: return 3;
    case EventKind::StateEntered:
    case EventKind::StateExited: return 2;
    default: return 1;
  }
}

TimeMs pick_bucket(TimeMs span, int width) {
  static constexpr TimeMs kSteps[] = {1, 2, 5, 10, 20, 25, 50, 100, 200, 250, 500, 1000, 2000, 5000, 10000, 60000};
  for (TimeMs step : kSteps)
    if (span / step < width) return step;
  return span / width + 1;
}

std::string band_line(const Band& b) {
  std::ostringstream out;
  out << "# band link=" << b.link << " start=" << b.start << " end=" << b.end
      << " closed=" << (b.closed ? "true" : "false");
  return out.str();
}

std::string edge_line(const Edge& e) {
  std::ostringstream out;
  out << "# edge from=" << e.from << " to=" << e.to << " msg=" << e.msg << " epoch=" << e.epoch
      << " published=" << e.published << " received=" << e.received
      << " latency=" << (e.received - e.published);
  return out.str();
}

}  // namespace

Report build_timeline(const std::vector<EventRecord>& log) {
  Report report;
  report.records = log;
  if (log.empty()) return report;
  report.start = log.front().t;
  report.end = log.front().t;
  for (const auto& r : log) {
    report.start = std::min(report.start, r.t);
    report.end = std::max(report.end, r.t);
  }

  std::map<AgentId, std::size_t> lane_index;
  std::map<std::string, std::size_t> open_band;
  std::map<std::string, std::size_t> published;
  for (std::size_t i = 0; i < log.size(); ++i) {
    const auto& r = log[i];
    if (!lane_index.count(r.agent)) {
      lane_index[r.agent] = report.lanes.size();
      report.lanes.push_back(Lane{r.agent, {}});
    }
    report.lanes[lane_index[r.agent]].records.push_back(i);

    if (r.kind == EventKind::LinkDown) {
      if (!open_band.count(r.agent)) {
        open_band[r.agent] = report.bands.size();
        report.bands.push_back(Band{r.agent, r.t, r.t, false});
      }
    } else if (r.kind == EventKind::LinkUp) {
      auto it = open_band.find(r.agent);
      if (it != open_band.end()) {
        report.bands[it->second].end = r.t;
        report.bands[it->second].closed = true;
        open_band.erase(it);
      }
    } else if (r.kind == EventKind::TriggerPublished) {
      published[r.get("msg")] = i;
    } else if (r.kind == EventKind::TriggerReceived && r.detail.count("msg")) {
      auto it = published.find(r.get("msg"));
      if (it == published.end()) continue;
      const auto& p = log[it->second];
      report.edges.push_back(Edge{p.agent, r.agent, p.t, r.t, r.get("msg"), r.get_int("epoch").value_or(0)});
    }
  }
  for (const auto& [link, idx] : open_band) report.bands[idx].end = report.end;
  return report;
}

std::string render_timeline(const std::vector<EventRecord>& log, Format format,
                            const Options& options) {
  const Report report = build_timeline(log);
  std::ostringstream out;
  out << kTimelineHeader << "\n";
  if (format == Format::Structured) {
    for (const auto& b : report.bands) out << band_line(b) << "\n";
    for (const auto& e : report.edges) out << edge_line(e) << "\n";
    for (const auto& r : report.records) out << encode_record(r) << "\n";
    return out.str();
  }
  if (report.records.empty()) return out.str();

  const int width = std::max(options.width, 10);
  const TimeMs span = report.end - report.start;
  const TimeMs bucket = options.bucket_ms && *options.bucket_ms > 0 ? *options.bucket_ms
                                                                     : pick_bucket(span, width);
  const int columns = static_cast<int>(span / bucket) + 1;
  auto column_of = [&](TimeMs t) { return static_cast<int>((t - report.start) / bucket); };

  std::size_t label_width = 8;
  for (const auto& lane : report.lanes) label_width = std::max(label_width, lane.agent.size());

  out << "span " << report.start << ".." << report.end << " ms, 1 column = " << bucket << " ms\n";
  out << "legend: > enter  < exit  a/A action start/done  . feedback  r rejected  p/P ping\n"
         "        T/R trigger published/received  i ignored  x dropped  B/b behavior start/done\n"
         "        D mission done  F fault  # link down\n\n";

  for (const auto& lane : report.lanes) {
    const bool link_lane = std::any_of(lane.records.begin(), lane.records.end(),
                                       [&](std::size_t i) { return is_link_record(log[i]); });
    const bool marker_lane = std::all_of(lane.records.begin(), lane.records.end(),
                                         [&](std::size_t i) { return is_marker(log[i]); });
    if (marker_lane) continue;
    std::string row(static_cast<std::size_t>(columns), link_lane ? '-' : ' ');
    if (link_lane) {
      for (const auto& b : report.bands) {
        if (b.link != lane.agent) continue;
        const int last = b.end > b.start ? column_of(b.end - 1) : column_of(b.start);
        for (int c = column_of(b.start); c <= last; ++c) row[static_cast<std::size_t>(c)] = '#';
      }
    } else {
      std::vector<int> rank(static_cast<std::size_t>(columns), 0);
      for (std::size_t i : lane.records) {
        const auto c = static_cast<std::size_t>(column_of(log[i].t));
        const int rk = glyph_rank(log[i].kind);
        if (rk > rank[c]) {
          rank[c] = rk;
          row[c] = glyph(log[i].kind);
        }
      }
    }
    out << lane.agent << std::string(label_width - lane.agent.size(), ' ') << " |" << row << "|\n";
  }

  if (!report.bands.empty()) {
    out << "\noutages:\n";
    for (const auto& b : report.bands)
      out << "  " << b.link << " down [" << b.start << ", " << b.end << ")"
          << (b.closed ? "" : " still down at end of log") << "\n";
  }
  if (!report.edges.empty()) {
    out << "\ntriggers:\n";
    for (const auto& e : report.edges)
      out << "  " << e.from << " --(epoch " << e.epoch << ", " << (e.received - e.published) << " ms)--> "
          << e.to << "  t=" << e.published << " -> " << e.received << "\n";
  }

  out << "\nevents:\n";
  for (const auto& lane : report.lanes) {
    out << "  [" << lane.agent << "]\n";
    for (std::size_t i : lane.records) out << "    " << encode_record(log[i]) << "\n";
  }
  return out.str();
}

}  // namespace seqauto::timeline
