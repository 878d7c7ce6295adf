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

#include <gtest/gtest.h>

#include "seqauto/analysis.hpp"
#include "seqauto/harness.hpp"
#include "seqauto/timeline.hpp"
#include "support.hpp"

using namespace seqauto;
using testsupport::of_kind;

TEST(ComputeLatency, FixedModelSingleHop) {
  auto text = testsupport::chain_scenario({{"R1", 10, 10, {}}, {"R2", 10, 10, {}}}, 1, 60000, false, 1, 500,
                                          "latency: fixed 100\n");
  auto sc = testsupport::parse_with(text, {{"work.machine", testsupport::kWorkMachine}});
  auto log = sim::run_scenario(sc).log;
  auto stats = analysis::compute_latency(log);
  ASSERT_EQ(stats.trigger.count, 1u);
  EXPECT_EQ(stats.trigger.max, 200);  // bridge relay plus last hop
  ASSERT_EQ(stats.hop.count, 2u);
  EXPECT_EQ(stats.hop.max, 100);
  EXPECT_DOUBLE_EQ(stats.hop.mean, 100.0);
  EXPECT_TRUE(stats.integrity_violations.empty());
}

TEST(ComputeLatency, HandBuiltLog) {
  std::vector<EventRecord> log{
      {0, "A", EventKind::TriggerReceived, {{"from", "operator"}, {"epoch", "0"}}},
      {0, "A", EventKind::BehaviorStarted, {}},
      {900, "A", EventKind::BehaviorCompleted, {}},
      {1000, "A", EventKind::TriggerPublished, {{"msg", "1"}, {"wait", "100"}}},
      {1100, "B", EventKind::TriggerReceived, {{"msg", "1"}, {"link_ms", "100"}}},
      {1100, "B", EventKind::BehaviorStarted, {}},
  };
  auto s = analysis::compute_latency(log);
  EXPECT_EQ(s.trigger.count, 1u);
  EXPECT_EQ(s.trigger.max, 100);
  EXPECT_EQ(s.direct_trigger.count, 1u);
  EXPECT_EQ(s.deferral.max, 100);
  EXPECT_EQ(s.end_to_end, 1100);
  EXPECT_TRUE(s.integrity_violations.empty());

  log.pop_back();
  log.pop_back();
  auto broken = analysis::compute_latency(log);
  ASSERT_EQ(broken.integrity_violations.size(), 1u);
  EXPECT_NE(broken.integrity_violations[0].find("received 0 times"), std::string::npos);
}

TEST(ComputeLatency, DefaultModelBoundsOverManyEpochs) {
  std::vector<testsupport::ChainRobot> robots{{"R1", 1, 10, {}}, {"R2", 1, 10, {}}};
  auto sc = testsupport::parse_with(testsupport::chain_scenario(robots, 99, 10000000, true, 100),
                                    {{"work.machine", testsupport::kWorkMachine}});
  auto result = sim::run_scenario(sc);
  ASSERT_TRUE(result.all_done());
  auto s = analysis::compute_latency(result.log);
  EXPECT_EQ(s.trigger.count, 200u);
  EXPECT_LE(s.hop.max, 500);
  EXPECT_GE(s.hop.min, 20);
  EXPECT_LE(s.bridged_trigger.max, 1000);
}

TEST(CheckLogIntegrity, DetectsProblems) {
  std::vector<EventRecord> log{
      {10, "A", EventKind::StateEntered, {{"path", "S"}}},
      {5, "A", EventKind::ActionStarted, {{"server", "m"}, {"goal", "1"}}},
  };
  auto v = analysis::check_log_integrity(log);
  EXPECT_GE(v.size(), 3u);  // time order, unfinished goal, unclosed state
}

TEST(CheckLogIntegrity, BundledRunsAreClean) {
  for (const std::string name : {"caseA.scenario", "caseB.scenario", "cyclic.scenario", "fault.scenario"}) {
    auto result = sim::run_scenario(testsupport::load_bundled(name));
    auto v = analysis::check_log_integrity(result.log);
    EXPECT_TRUE(v.empty()) << name << ": " << (v.empty() ? "" : v.front());
  }
}

TEST(FormatLatencySummary, ReportsWaitSeparately) {
  auto result = sim::run_scenario(testsupport::load_bundled("caseB.scenario"));
  const auto text = analysis::format_latency_summary(analysis::compute_latency(result.log));
  EXPECT_NE(text.find("deferral wait"), std::string::npos);
  EXPECT_NE(text.find("max=2000ms"), std::string::npos);
  EXPECT_NE(text.find("per-hop"), std::string::npos);
}

TEST(Timeline, EmptyLogIsHeaderOnly) {
  EXPECT_EQ(timeline::render_timeline({}, timeline::Format::Text), "# seqauto timeline v1\n");
  EXPECT_EQ(timeline::render_timeline({}, timeline::Format::Structured), "# seqauto timeline v1\n");
}

TEST(Timeline, CaseBOutageBandMatchesSchedule) {
  auto sc = testsupport::load_bundled("caseB.scenario");
  auto result = sim::run_scenario(sc);
  auto report = timeline::build_timeline(result.log);
  ASSERT_EQ(report.bands.size(), 1u);
  const auto& scheduled = sc.links.links().begin()->second.outages().front();
  EXPECT_EQ(report.bands[0].link, "Deployer<->Stinger");
  EXPECT_EQ(report.bands[0].start, scheduled.start);
  EXPECT_EQ(report.bands[0].end, scheduled.end);
  EXPECT_TRUE(report.bands[0].closed);
  ASSERT_EQ(report.edges.size(), 2u);
  EXPECT_EQ(report.edges[1].from, "Stinger");
  EXPECT_EQ(report.edges[1].to, "Deployer");

  const auto text = timeline::render_timeline(result.log, timeline::Format::Text);
  EXPECT_NE(text.find("Deployer<->Stinger down [6458, 12100)"), std::string::npos);
  EXPECT_NE(text.find('#'), std::string::npos);
}

TEST(Timeline, TextRendersEveryRecordExactlyOnce) {
  auto result = sim::run_scenario(testsupport::load_bundled("caseB.scenario"));
  const auto text = timeline::render_timeline(result.log, timeline::Format::Text);
  const auto events = text.substr(text.find("\nevents:\n"));
  for (const auto& r : result.log) {
    const std::string line = "    " + encode_record(r) + "\n";
    std::size_t count = 0;
    for (auto pos = events.find(line); pos != std::string::npos; pos = events.find(line, pos + 1)) ++count;
    std::size_t expected = 0;
    for (const auto& other : result.log) expected += other == r;
    EXPECT_EQ(count, expected) << line;
  }
}

TEST(Timeline, StructuredRoundTripIsLossless) {
  for (const std::string name : {"caseA.scenario", "caseB.scenario", "cyclic.scenario"}) {
    auto result = sim::run_scenario(testsupport::load_bundled(name));
    auto parsed = parse_log(timeline::render_timeline(result.log, timeline::Format::Structured));
    ASSERT_TRUE(parsed.ok());
    EXPECT_EQ(parsed.records, result.log) << name;
  }
}

TEST(Timeline, OpenBandEndsAtLastRecord) {
  std::vector<EventRecord> log{{100, "a<->b", EventKind::LinkDown, {}}, {400, "a", EventKind::Fault, {}}};
  auto report = timeline::build_timeline(log);
  ASSERT_EQ(report.bands.size(), 1u);
  EXPECT_FALSE(report.bands[0].closed);
  EXPECT_EQ(report.bands[0].end, 400);
}
