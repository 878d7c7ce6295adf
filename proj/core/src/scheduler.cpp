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

#include "seqauto/scheduler.hpp"

#include <stdexcept>
#include <tuple>

namespace seqauto {

bool Scheduler::Later::operator()(const Entry& a, const Entry& b) const {
  return std::tie(a.t, a.cls, a.agent, a.seq) > std::tie(b.t, b.cls, b.agent, b.seq);
}

void Scheduler::schedule(TimeMs t, DispatchClass cls, const AgentId& agent, Callback callback) {
  if (t < now_) throw std::logic_error("event scheduled in the past");
  queue_.push(Entry{t, cls, agent, next_seq_++, std::move(callback)});
}

bool Scheduler::step() {
  if (queue_.empty()) return false;
  Entry entry = queue_.top();
  queue_.pop();
  now_ = entry.t;
  entry.callback(entry.t);
  return true;
}

void Scheduler::run_until(TimeMs horizon, const Pacer& pacer) {
  while (!queue_.empty() && queue_.top().t <= horizon) {
    if (pacer) pacer(queue_.top().t);
    step();
  }
}

}  // namespace seqauto
