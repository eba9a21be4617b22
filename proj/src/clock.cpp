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
#include "ipcauth/clock.hpp"

#include <chrono>

namespace ipcauth {

Clock wall_clock_millis() {
  return [] {
    using namespace std::chrono;
    return static_cast<Tick>(
        duration_cast<milliseconds>(system_clock::now().time_since_epoch())
            .count());
  };
}

}  // namespace ipcauth
