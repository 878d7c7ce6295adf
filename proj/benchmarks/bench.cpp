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

#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>
#include <string>

#include "seqauto/dsl.hpp"
#include "seqauto/harness.hpp"

using namespace seqauto;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

const std::string kDir = SEQAUTO_SCENARIO_DIR;

void BM_ParseMachine(benchmark::State& state) {
  const auto text = read_file(kDir + "/stinger.machine");
  for (auto _ : state) benchmark::DoNotOptimize(dsl::parse_machine(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseMachine);

void BM_LoadScenario(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(dsl::load_scenario_file(kDir + "/caseB.scenario"));
}
BENCHMARK(BM_LoadScenario);

void BM_RunScenario(benchmark::State& state, const char* name) {
  const auto sc = *dsl::load_scenario_file(kDir + "/" + name).value;
  for (auto _ : state) benchmark::DoNotOptimize(sim::run_scenario(sc));
}
BENCHMARK_CAPTURE(BM_RunScenario, caseA, "caseA.scenario");
BENCHMARK_CAPTURE(BM_RunScenario, caseB, "caseB.scenario");
BENCHMARK_CAPTURE(BM_RunScenario, cyclic, "cyclic.scenario");

const char* kWork = R"(version: 1
root: Work

[machine Work]
initial: Move
terminals: finished

[state Work/Move]
kind: atomic
outcomes: reached
action: move_motor m 50
on_success: reached
transition: reached -> finished
)";

void BM_Chain(benchmark::State& state) {
  const auto n = state.range(0);
  std::ostringstream s;
  s << "version: 1\nscenario: chain\nmission: chain\nhead: R1\nhorizon: 10000000\nseed: 1\n";
  for (std::int64_t i = 1; i <= n; ++i)
    s << "\n[robot R" << i << "]\ndomain: " << i << "\nbehavior: work.machine\nsuccessor: "
      << (i < n ? "R" + std::to_string(i + 1) : std::string("none")) << "\n\n[server R" << i
      << "/move_motor]\nactuator: m 0 100 10 0\n";
  s << "\n[bridge]\n";
  for (std::int64_t i = 1; i < n; ++i) s << "rule: " << i << " -> " << i + 1 << " trigger_R" << i + 1 << "\n";
  const auto sc = dsl::parse_scenario(s.str(), [](const std::string&) { return std::optional<std::string>(kWork); });
  for (auto _ : state) benchmark::DoNotOptimize(sim::run_scenario(*sc.value));
  state.SetComplexityN(n);
}
BENCHMARK(BM_Chain)->RangeMultiplier(4)->Range(2, 512)->Complexity();

}  // namespace

BENCHMARK_MAIN();
