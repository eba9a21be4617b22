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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "ipcauth/error.hpp"
#include "ipcauth/property_matrix.hpp"

namespace ipcauth {
namespace {

const std::string kFixture = std::string(IPCAUTH_TEST_FIXTURE_DIR) + "/table1.json";

template <class F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an ipcauth::Error";
  return Errc::InvalidArgument;
}

TEST(PropertyMatrix, IdsRoundTrip) {
  for (Mechanism m : kAllMechanisms) EXPECT_EQ(parse_mechanism(id_of(m)), m);
  for (Mark m : {Mark::Yes, Mark::No, Mark::Partial}) EXPECT_EQ(parse_mark(to_string(m)), m);
  EXPECT_ANY_THROW(parse_mechanism("carrier_pigeon"));
  EXPECT_ANY_THROW(parse_mark("MAYBE"));
}

TEST(PropertyMatrix, NineAnalyticCells) {
  int analytic = 0;
  for (Mechanism m : kAllMechanisms) {
    for (Property p : kAllProperties) {
      const bool isAnalytic = cell_source(m, p) == CellSource::Analytic;
      EXPECT_EQ(isAnalytic, analytic_mark(m, p).has_value());
      analytic += isAnalytic;
    }
  }
  EXPECT_EQ(analytic, 9);
}

TEST(PropertyMatrix, LiveRunMatchesFixture) {
  const PropertyMatrix fixture = PropertyMatrix::load_fixture(kFixture);
  const PropertyMatrix live = build_property_matrix(run_mechanism_scenarios(1));
  EXPECT_TRUE(live.complete());
  const auto diffs = live.diff_marks(fixture);
  EXPECT_TRUE(diffs.empty()) << diffs.front();
}

TEST(PropertyMatrix, SeedDoesNotChangeMarks) {
  const auto a = build_property_matrix(run_mechanism_scenarios(1));
  const auto b = build_property_matrix(run_mechanism_scenarios(99));
  EXPECT_TRUE(a.marks_equal(b));
}

TEST(PropertyMatrix, ScenarioCellsNameTheirScenario) {
  const auto outcomes = run_mechanism_scenarios(1);
  EXPECT_EQ(outcomes.size(), 31u);
  const auto m = build_property_matrix(outcomes);
  for (const auto& o : outcomes) {
    const auto& cell = m.cell(o.mechanism, o.property);
    EXPECT_EQ(cell.source, CellSource::Scenario);
    EXPECT_EQ(cell.scenario, std::string(id_of(o.mechanism)) + "/" +
                                 std::string(id_of(o.property)));
    EXPECT_EQ(cell.mark, o.satisfied ? Mark::Yes : Mark::No);
  }
}

TEST(PropertyMatrix, JsonRoundTripKeepsProvenance) {
  const auto m = build_property_matrix(run_mechanism_scenarios(1));
  const auto again = PropertyMatrix::from_json(nlohmann::json::parse(m.to_json().dump()));
  EXPECT_EQ(again.to_json().dump(), m.to_json().dump());
}

TEST(PropertyMatrix, DiffReportsChangedCell) {
  auto live = build_property_matrix(run_mechanism_scenarios(1));
  auto changed = live;
  changed.set(Mechanism::Pkce, Property::Unforgeable, {Mark::Yes, CellSource::Scenario, "x"});
  const auto diffs = live.diff_marks(changed);
  ASSERT_EQ(diffs.size(), 1u);
  EXPECT_NE(diffs[0].find("pkce.unforgeable"), std::string::npos);
}

TEST(PropertyMatrix, IncompleteOutcomesRejected) {
  auto outcomes = run_mechanism_scenarios(1);
  outcomes.pop_back();
  EXPECT_EQ(code_of([&] { build_property_matrix(outcomes); }), Errc::IncompleteOutcomes);
  PropertyMatrix empty;
  EXPECT_EQ(code_of([&] { empty.cell(Mechanism::Pkce, Property::Bidirectional); }),
            Errc::NotFound);
}

TEST(PropertyMatrix, FixtureErrors) {
  const auto dir = std::filesystem::temp_directory_path() / "ipcauth_matrix_test";
  std::filesystem::create_directories(dir);
  EXPECT_EQ(code_of([&] { PropertyMatrix::load_fixture((dir / "missing.json").string()); }),
            Errc::IoError);
  {
    std::ofstream(dir / "bad.json") << "{ not json";
  }
  EXPECT_EQ(code_of([&] { PropertyMatrix::load_fixture((dir / "bad.json").string()); }),
            Errc::CorruptFile);
  {
    std::ofstream(dir / "short.json")
        << R"({"mechanisms": [{"mechanism": "pkce", "kernelBacked": "NO", "unforgeable": "NO",
              "replayResistant": "YES", "scalableNoManifest": "YES", "bidirectional": "NO"}]})";
  }
  EXPECT_EQ(code_of([&] { PropertyMatrix::load_fixture((dir / "short.json").string()); }),
            Errc::CorruptFile);
  std::filesystem::remove_all(dir);
}

TEST(PropertyMatrix, MarkdownHasEightRows) {
  const auto md = PropertyMatrix::load_fixture(kFixture).to_markdown();
  EXPECT_EQ(std::count(md.begin(), md.end(), '\n'), 10);
  EXPECT_NE(md.find("| Bound Service + Binder UID | ✓ | ✓ | ✓ | ✓ | ✓ |"), std::string::npos);
}

}  // namespace
}  // namespace ipcauth
