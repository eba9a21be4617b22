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

// Independent oracles shared by the unit and acceptance suites.

#ifndef IPCAUTH_TESTS_ORACLES_HPP_
#define IPCAUTH_TESTS_ORACLES_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace ipcauth::testing {

struct KernelFuzzResult {
  std::uint64_t steps = 0;
  std::uint64_t transactions = 0;
  std::uint64_t staleRejections = 0;
  std::uint64_t installs = 0;
  std::uint64_t uninstalls = 0;
  std::uint64_t mismatches = 0;
  std::vector<std::string> firstMismatches;
};

/// Random install / uninstall / bind / transact walk. Every transaction's
/// calling UID is compared against a table kept by the test from install
/// results; stale handles must be refused.
KernelFuzzResult run_kernel_fuzz(std::uint64_t seed, std::uint64_t steps);

struct HandoffResult {
  std::size_t hops = 0;
  std::size_t creatorMismatches = 0;
  std::size_t presenterMismatches = 0;
  bool dispatchAsCreator = false;
};

/// Passes one PendingIntent along `length` apps over Binder. At each hop the
/// receiver checks the creator fields and the kernel-stamped sender.
HandoffResult run_handoff_chain(std::size_t length);

struct SoundnessResult {
  std::uint64_t worlds = 0;
  std::uint64_t calls = 0;
  std::uint64_t accepts = 0;
  std::uint64_t disagreements = 0;
  std::uint64_t attributionViolations = 0;
  std::vector<std::string> firstDisagreements;
};

/// Enumerates every combination of install state and registry state for four
/// candidate partner packages (plus the provider: five apps) and compares the
/// secure service's verdict on every call with a brute-force triple check.
SoundnessResult run_soundness_enumeration();

}  // namespace ipcauth::testing

#endif  // IPCAUTH_TESTS_ORACLES_HPP_
