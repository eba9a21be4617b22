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

#ifndef IPCAUTH_PROPERTY_MATRIX_HPP_
#define IPCAUTH_PROPERTY_MATRIX_HPP_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace ipcauth {

enum class Mechanism {
  StartActivityForResult,
  GetReferrer,
  PendingIntentCreator,
  BroadcastPermission,
  ProviderPermission,
  KnownSigners,
  Pkce,
  BoundServiceUid,
};

enum class Property {
  KernelBacked,
  Unforgeable,
  ReplayResistant,
  ScalableNoManifest,
  Bidirectional,
};

inline constexpr std::array<Mechanism, 8> kAllMechanisms = {
    Mechanism::StartActivityForResult, Mechanism::GetReferrer,
    Mechanism::PendingIntentCreator,   Mechanism::BroadcastPermission,
    Mechanism::ProviderPermission,     Mechanism::KnownSigners,
    Mechanism::Pkce,                   Mechanism::BoundServiceUid,
};

inline constexpr std::array<Property, 5> kAllProperties = {
    Property::KernelBacked, Property::Unforgeable, Property::ReplayResistant,
    Property::ScalableNoManifest, Property::Bidirectional,
};

enum class Mark { Yes, No, Partial };
enum class CellSource { Scenario, Analytic };

/// Stable machine identifiers ("pending_intent_creator", "kernelBacked", ...).
std::string_view id_of(Mechanism m) noexcept;
std::string_view id_of(Property p) noexcept;
/// Row / column headings for rendered tables.
std::string_view label_of(Mechanism m) noexcept;
std::string_view label_of(Property p) noexcept;
std::string_view to_string(Mark m) noexcept;   // YES / NO / PARTIAL
std::string_view glyph_of(Mark m) noexcept;    // ✓ / ✗ / ~
Mark parse_mark(std::string_view text);
Mechanism parse_mechanism(std::string_view id);

/// Whether a cell is decided by running a scenario or carried as a fixed
/// classification.
CellSource cell_source(Mechanism m, Property p) noexcept;
/// The fixed mark of an analytic cell; nullopt for scenario cells.
std::optional<Mark> analytic_mark(Mechanism m, Property p) noexcept;

/// Result of one mechanism scenario for one property.
struct ScenarioOutcome {
  Mechanism mechanism;
  Property property;
  bool satisfied = false;
  std::string scenario;
  std::string evidence;
};

struct MatrixCell {
  Mark mark = Mark::No;
  CellSource source = CellSource::Analytic;
  /// Scenario that decided the cell; empty for analytic cells.
  std::string scenario;
};

class PropertyMatrix {
 public:
  void set(Mechanism m, Property p, MatrixCell cell);
  /// Throws Errc::NotFound for unset cells.
  const MatrixCell& cell(Mechanism m, Property p) const;
  Mark mark(Mechanism m, Property p) const { return cell(m, p).mark; }
  bool complete() const noexcept { return cells_.size() == 40; }

  /// Cells whose marks differ, one line each ("pkce.unforgeable: NO != YES").
  std::vector<std::string> diff_marks(const PropertyMatrix& other) const;
  bool marks_equal(const PropertyMatrix& other) const {
    return diff_marks(other).empty();
  }

  /// Rows in Table order; cells carry mark and provenance.
  nlohmann::ordered_json to_json() const;
  /// Reads either to_json() output or the fixture encoding (marks only;
  /// provenance defaults to the cell_source classification). Throws
  /// Errc::CorruptFile.
  static PropertyMatrix from_json(const nlohmann::json& j);
  /// Throws Errc::IoError / Errc::CorruptFile.
  static PropertyMatrix load_fixture(const std::string& path);

  std::string to_markdown() const;

 private:
  std::map<std::pair<Mechanism, Property>, MatrixCell> cells_;
};

/// Analytic cells from the classification table, scenario cells from
/// `outcomes`. Throws Errc::IncompleteOutcomes if a scenario cell has no
/// outcome.
PropertyMatrix build_property_matrix(const std::vector<ScenarioOutcome>& outcomes);

/// Runs every mechanism scenario (31 of them), each in a freshly built
/// device, and returns their outcomes in mechanism-major order.
std::vector<ScenarioOutcome> run_mechanism_scenarios(std::uint64_t seed);

}  // namespace ipcauth

#endif  // IPCAUTH_PROPERTY_MATRIX_HPP_
