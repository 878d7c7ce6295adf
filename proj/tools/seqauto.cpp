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

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "seqauto/analysis.hpp"
#include "seqauto/dsl.hpp"
#include "seqauto/harness.hpp"
#include "seqauto/timeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

enum class OutputFormat { Text, Structured };

const std::map<std::string, OutputFormat> kFormats{{"text", OutputFormat::Text},
                                                  {"structured", OutputFormat::Structured}};

bool print_diagnostics(const std::string& path,
                       const std::vector<seqauto::dsl::ParseDiagnostic>& diagnostics) {
  bool errors = false;
  for (const auto& d : diagnostics) {
    std::cerr << seqauto::dsl::format_diagnostic(path, d) << "\n";
    errors = errors || d.severity == seqauto::dsl::Severity::Error;
  }
  return errors;
}

int cmd_validate(const std::string& path) {
  auto result = seqauto::dsl::load_scenario_file(path);
  const bool errors = print_diagnostics(path, result.diagnostics);
  if (!result.ok() || errors) return kExitFailure;
  std::cerr << path << ": ok (" << result.value->robots.size() << " robots)\n";
  return kExitOk;
}

int cmd_run(const std::string& path, std::optional<std::uint64_t> seed, const std::string& out_path,
            OutputFormat format, double realtime) {
  auto parsed = seqauto::dsl::load_scenario_file(path);
  if (print_diagnostics(path, parsed.diagnostics) || !parsed.ok()) return kExitFailure;

  seqauto::sim::RunOptions options;
  options.seed = seed;
  if (realtime > 0) options.pacer = seqauto::sim::realtime_pacer(realtime);
  const auto result = seqauto::sim::run_scenario(*parsed.value, options);

  const std::string document = format == OutputFormat::Structured
                                   ? seqauto::encode_log(result.log)
                                   : seqauto::timeline::render_timeline(result.log, seqauto::timeline::Format::Text);
  std::ostringstream summary;
  for (const auto& agent : result.agents) {
    summary << "agent " << agent.id << ": ";
    if (agent.mission_done)
      summary << "MissionDone\n";
    else
      summary << "Fault(" << agent.fault << ")\n";
  }
  summary << seqauto::analysis::format_latency_summary(seqauto::analysis::compute_latency(result.log));

  if (out_path.empty()) {
    std::cout << document;
    std::cerr << summary.str();
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return kExitUsage;
    }
    out << document;
    std::cout << summary.str();
  }
  return result.all_done() ? kExitOk : kExitFailure;
}

int cmd_timeline(const std::string& path, OutputFormat format) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  auto parsed = seqauto::parse_log(text.str());
  for (const auto& e : parsed.errors) std::cerr << path << ": " << e << "\n";
  if (!parsed.ok()) return kExitFailure;
  std::cout << seqauto::timeline::render_timeline(parsed.records,
                                                  format == OutputFormat::Structured
                                                      ? seqauto::timeline::Format::Structured
                                                      : seqauto::timeline::Format::Text);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seqauto: sequential multi-robot mission simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  auto* validate = app.add_subcommand("validate", "Check a scenario and every behavior it references");
  validate->add_option("scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);

  std::string run_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  OutputFormat run_format = OutputFormat::Structured;
  double realtime = 0.0;
  auto* run = app.add_subcommand("run", "Simulate a scenario and write its event log");
  run->add_option("scenario", run_path, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--out", out_path, "Write the log here instead of standard output");
  run->add_option("--format", run_format, "Log format")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
  run->add_option("--realtime", realtime, "Pace virtual time against the wall clock (scale factor)")
      ->check(CLI::PositiveNumber);

  std::string log_path;
  OutputFormat timeline_format = OutputFormat::Text;
  auto* timeline = app.add_subcommand("timeline", "Render a previously written structured log");
  timeline->add_option("log", log_path, "Structured log file")->required()->check(CLI::ExistingFile);
  timeline->add_option("--format", timeline_format, "Output format")
      ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*validate) return cmd_validate(scenario_path);
    if (*run) return cmd_run(run_path, seed, out_path, run_format, realtime);
    if (*timeline) return cmd_timeline(log_path, timeline_format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
