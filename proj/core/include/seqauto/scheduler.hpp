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
#include <functional>
#include <queue>
#include <vector>

#include "seqauto/types.hpp"

namespace seqauto {

/// Dispatch rank among events due at the same instant. Lower runs first.
enum class DispatchClass : int {
  LinkChange = 0,
  Delivery = 1,
  Action = 2,
  Probe = 3,
  Control = 4,
};

/// Single-threaded virtual-time event queue.
///
/// Events due at the same instant run in (class, agent id, insertion order).
/// Callbacks may schedule further events at or after the current time.
class Scheduler {
 public:
  using Callback = std::function<void(TimeMs)>;
  /// Invoked with the due time before each dispatch; used for wall-clock pacing.
  using Pacer = std::function<void(TimeMs)>;

  void schedule(TimeMs t, DispatchClass cls, const AgentId& agent, Callback callback);

  TimeMs now() const { return now_; }
  bool empty() const { return queue_.empty(); }
  std::size_t pending() const { return queue_.size(); }
  /// Due time of the next event; only meaningful when !empty().
  TimeMs next_time() const { return queue_.top().t; }

  /// Runs the earliest event. Returns false when the queue is empty.
  bool step();
  /// Runs every event due at or before horizon; later events stay queued.
  void run_until(TimeMs horizon, const Pacer& pacer = {});

 private:
  struct Entry {
    TimeMs t;
    DispatchClass cls;
    AgentId agent;
    std::uint64_t seq;
    Callback callback;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const;
  };

  std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
  TimeMs now_ = 0;
  std::uint64_t next_seq_ = 0;
};

}  // namespace seqauto
