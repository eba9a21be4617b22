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

#ifndef IPCAUTH_REPORT_HPP_
#define IPCAUTH_REPORT_HPP_

#include <string>
#include <vector>

#include <json.hpp>

#include "ipcauth/scenarios.hpp"

namespace ipcauth {

inline constexpr int kReportSchemaVersion = 1;

enum class ReportFormat { Json, Markdown };

/// Throws Errc::InvalidArgument for anything but "json" / "md".
ReportFormat parse_report_format(std::string_view text);

nlohmann::ordered_json to_json(const ScenarioReport& report);
/// Throws Errc::CorruptFile.
ScenarioReport report_from_json(const nlohmann::json& j);

/// Canonical text: two-space indent, trailing newline.
std::string render_json(const ScenarioReport& report);
std::string render_markdown(const ScenarioReport& report);
std::string render(const ScenarioReport& report, ReportFormat format);

/// Attack-success table, one row per report.
std::string table3_markdown(const std::vector<ScenarioReport>& reports);

/// The report minus its wall-clock section; equal specs give equal views.
nlohmann::ordered_json deterministic_view(const ScenarioReport& report);

/// Writes `text` to `path`. Throws Errc::IoError.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace ipcauth

#endif  // IPCAUTH_REPORT_HPP_
