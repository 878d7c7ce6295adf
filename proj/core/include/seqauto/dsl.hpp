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

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seqauto/hfsm.hpp"
#include "seqauto/scenario.hpp"

namespace seqauto::dsl {

enum class Severity { Error, Warning };

/// 1-based source position. Column len(line)+1 points just past the end.
struct ParseDiagnostic {
  int line = 1;
  int column = 1;
  Severity severity = Severity::Error;
  std::string message;
};

std::string format_diagnostic(std::string_view source, const ParseDiagnostic& d);

template <class T>
struct ParseResult {
  std::optional<T> value;
  std::vector<ParseDiagnostic> diagnostics;  // warnings may accompany a value

  bool ok() const { return value.has_value(); }
  bool has_errors() const {
    for (const auto& d : diagnostics)
      if (d.severity == Severity::Error) return true;
    return false;
  }
};

/// Parses a `.machine` document. On success the machine passes
/// hfsm::validate_machine; validator findings are reported as diagnostics
/// located at the offending section or transition line.
ParseResult<hfsm::MachineDef> parse_machine(std::string_view text);

/// Canonical form: machines in depth-first order from the root (children in
/// state-name order), states sorted by name, outcomes and transitions sorted.
std::string serialize_machine(const hfsm::MachineDef& def);

/// Resolves a behavior path named in a scenario to the document text.
using FileLoader = std::function<std::optional<std::string>(const std::string& path)>;

/// Loader that reads paths relative to `base_dir` from disk.
FileLoader directory_loader(std::string base_dir);

/// Parses a `.scenario` document, loading every referenced behavior through
/// `loader` and running check_scenario() on the result.
ParseResult<Scenario> parse_scenario(std::string_view text, const FileLoader& loader);

/// Reads `path` and parses it with a loader rooted at its directory.
ParseResult<Scenario> load_scenario_file(const std::string& path);

}  // namespace seqauto::dsl
