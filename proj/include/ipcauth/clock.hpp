// Copyright 2026 The ipcauth Authors
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

#ifndef IPCAUTH_CLOCK_HPP_
#define IPCAUTH_CLOCK_HPP_

#include <cstdint>
#include <functional>

namespace ipcauth {

using Tick = std::uint64_t;

/// Time source. Simulation ticks in-process, wall-clock milliseconds when the
/// registry is served over the network.
using Clock = std::function<Tick()>;

class SimClock {
 public:
  Tick now() const noexcept { return now_; }
  Tick advance(Tick by = 1) noexcept { return now_ += by; }

  Clock source() const {
    return [this] { return now_; };
  }

 private:
  Tick now_ = 0;
};

Clock wall_clock_millis();

}  // namespace ipcauth

#endif  // IPCAUTH_CLOCK_HPP_
