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

#ifndef IPCAUTH_SCENARIOS_HPP_
#define IPCAUTH_SCENARIOS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ipcauth/device.hpp"
#include "ipcauth/pending_intent.hpp"
#include "ipcauth/property_matrix.hpp"

namespace ipcauth {

/// Package names used by every scenario.
namespace pkg {
inline constexpr char kPartner[] = "com.poc.partner";
inline constexpr char kAttacker[] = "com.poc.attacker";
inline constexpr char kVulnerableSdk[] = "com.poc.vulnerable.sdk";
inline constexpr char kSecureSdk[] = "com.poc.secure.sdk";
}  // namespace pkg

inline constexpr char kPartnerClientId[] = "client-partner";

struct ScenarioSpec {
  std::string name;
  std::uint64_t trials = 50;
  std::uint64_t seed = 1;
  /// Defaults per scenario when absent.
  std::optional<PlatformPolicy> platform;
  /// Mutability of the partner's PendingIntents; Immutable when absent.
  std::optional<Mutability> mutability;
};

/// Names in catalog order.
const std::vector<std::string>& scenario_catalog();
/// Catalog defaults for `name`. Throws Errc::UnknownScenario.
ScenarioSpec default_spec(std::string_view name);
/// Applies {"trials", "seed", "platform", "mutability"} overrides. Unknown
/// keys and bad values throw Errc::InvalidSpec. A "name" key, if present,
/// must match.
ScenarioSpec apply_overrides(ScenarioSpec spec, const nlohmann::json& overrides);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;

  friend bool operator==(const CheckResult&, const CheckResult&) = default;
};

/// Digest of one trial.
struct TrialRecord {
  std::uint64_t trial = 0;
  std::string actor;
  std::string mode;
  bool accepted = false;
  std::optional<std::string> attributedTo;
  std::optional<std::string> layerRejected;
  std::optional<std::string> resolvedCaller;
  std::string note;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

/// Per-call verification durations. Wall-clock, so never part of a
/// determinism comparison.
struct TimingStats {
  std::uint64_t calls = 0;
  std::uint64_t meanNanos = 0;
  std::uint64_t minNanos = 0;
  std::uint64_t maxNanos = 0;
  std::uint64_t budgetNanos = 0;

  bool within_budget() const noexcept { return meanNanos < budgetNanos; }
  friend bool operator==(const TimingStats&, const TimingStats&) = default;
};

struct ScenarioReport {
  std::string name;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::string platform;
  /// Accepted attacker trials for attack scenarios, accepted partner trials
  /// for legitimacy scenarios.
  std::uint64_t successes = 0;
  bool passed = false;
  std::vector<CheckResult> checks;
  std::map<std::string, std::int64_t> metrics;
  std::vector<TrialRecord> perTrial;
  std::optional<PropertyMatrix> matrix;
  std::optional<TimingStats> timing;
};

/// Builds a fresh simulation, runs it and reports. `passed` is the
/// conjunction of all checks. Throws Errc::UnknownScenario, Errc::InvalidSpec.
ScenarioReport run_scenario(const ScenarioSpec& spec);

}  // namespace ipcauth

#endif  // IPCAUTH_SCENARIOS_HPP_
