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
#include <string>

namespace seqauto {

/// Virtual time in integer milliseconds since scenario start.
using TimeMs = std::int64_t;

using AgentId = std::string;

/// Pub/sub namespace; messages cross domains only through bridge rules.
struct DomainId {
  std::uint32_t value = 0;

  friend auto operator<=>(const DomainId&, const DomainId&) = default;
};

inline std::string to_string(DomainId d) { return std::to_string(d.value); }

}  // namespace seqauto
