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

#include "ipcauth/report.hpp"

#include <fstream>
#include <sstream>

#include "ipcauth/error.hpp"

namespace ipcauth {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json optional_string(const std::optional<std::string>& s) {
  return s ? ordered_json(*s) : ordered_json(nullptr);
}

std::optional<std::string> read_optional(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_null()) return std::nullopt;
  return v.get<std::string>();
}

std::string percent(std::uint64_t n, std::uint64_t d) {
  if (d == 0) return "n/a";
  std::ostringstream os;
  if ((n * 100) % d == 0) {
    os << n * 100 / d;
  } else {
    os.setf(std::ios::fixed);
    os.precision(1);
    os << static_cast<double>(n) * 100.0 / static_cast<double>(d);
  }
  os << '%';
  return os.str();
}

std::string implementation_label(const ScenarioReport& r) {
  if (r.name == "table3_vulnerable") return "VulnerableSDK (PI-based)";
  if (r.name == "table3_secure") return "SecureSDK (Binder-based)";
  return r.name;
}

// Pipes inside free text would break the table.
std::string escape(std::string s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

std::string cell(const std::optional<std::string>& s) { return s ? escape(*s) : "-"; }

bool is_table3(const ScenarioReport& r) {
  return r.name == "table3_vulnerable" || r.name == "table3_secure";
}

}  // namespace

ReportFormat parse_report_format(std::string_view text) {
  if (text == "json") return ReportFormat::Json;
  if (text == "md" || text == "markdown") return ReportFormat::Markdown;
  throw Error(Errc::InvalidArgument, "unknown format " + std::string(text));
}

ordered_json to_json(const ScenarioReport& r) {
  ordered_json j;
  j["schemaVersion"] = kReportSchemaVersion;
  j["name"] = r.name;
  j["trials"] = r.trials;
  j["seed"] = r.seed;
  j["platform"] = r.platform;
  j["successes"] = r.successes;
  j["passed"] = r.passed;
  j["checks"] = ordered_json::array();
  for (const auto& c : r.checks) {
    ordered_json o;
    o["name"] = c.name;
    o["passed"] = c.passed;
    o["detail"] = c.detail;
    j["checks"].push_back(std::move(o));
  }
  j["metrics"] = ordered_json::object();
  for (const auto& [k, v] : r.metrics) j["metrics"][k] = v;
  j["perTrial"] = ordered_json::array();
  for (const auto& t : r.perTrial) {
    ordered_json o;
    o["trial"] = t.trial;
    o["actor"] = t.actor;
    o["mode"] = t.mode;
    o["accepted"] = t.accepted;
    o["attributedTo"] = optional_string(t.attributedTo);
    o["layerRejected"] = optional_string(t.layerRejected);
    o["resolvedCaller"] = optional_string(t.resolvedCaller);
    o["note"] = t.note;
    j["perTrial"].push_back(std::move(o));
  }
  j["matrix"] = r.matrix ? r.matrix->to_json() : ordered_json(nullptr);
  if (r.timing) {
    ordered_json t;
    t["calls"] = r.timing->calls;
    t["meanNanos"] = r.timing->meanNanos;
    t["minNanos"] = r.timing->minNanos;
    t["maxNanos"] = r.timing->maxNanos;
    t["budgetNanos"] = r.timing->budgetNanos;
    t["withinBudget"] = r.timing->within_budget();
    j["timing"] = std::move(t);
  } else {
    j["timing"] = nullptr;
  }
  return j;
}

ScenarioReport report_from_json(const json& j) {
  try {
    if (j.at("schemaVersion").get<int>() != kReportSchemaVersion) {
      throw Error(Errc::CorruptFile, "unsupported report schemaVersion");
    }
    ScenarioReport r;
    r.name = j.at("name").get<std::string>();
    r.trials = j.at("trials").get<std::uint64_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.platform = j.at("platform").get<std::string>();
    r.successes = j.at("successes").get<std::uint64_t>();
    r.passed = j.at("passed").get<bool>();
    for (const auto& c : j.at("checks")) {
      r.checks.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(),
                          c.at("detail").get<std::string>()});
    }
    for (const auto& [k, v] : j.at("metrics").items()) r.metrics[k] = v.get<std::int64_t>();
    for (const auto& t : j.at("perTrial")) {
      TrialRecord rec;
      rec.trial = t.at("trial").get<std::uint64_t>();
      rec.actor = t.at("actor").get<std::string>();
      rec.mode = t.at("mode").get<std::string>();
      rec.accepted = t.at("accepted").get<bool>();
      rec.attributedTo = read_optional(t, "attributedTo");
      rec.layerRejected = read_optional(t, "layerRejected");
      rec.resolvedCaller = read_optional(t, "resolvedCaller");
      rec.note = t.at("note").get<std::string>();
      r.perTrial.push_back(std::move(rec));
    }
    if (!j.at("matrix").is_null()) r.matrix = PropertyMatrix::from_json(j.at("matrix"));
    if (const json& t = j.at("timing"); !t.is_null()) {
      r.timing = TimingStats{t.at("calls").get<std::uint64_t>(),
                             t.at("meanNanos").get<std::uint64_t>(),
                             t.at("minNanos").get<std::uint64_t>(),
                             t.at("maxNanos").get<std::uint64_t>(),
                             t.at("budgetNanos").get<std::uint64_t>()};
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(Errc::CorruptFile, e.what());
  }
}

std::string render_json(const ScenarioReport& report) {
  return to_json(report).dump(2) + "\n";
}

std::string table3_markdown(const std::vector<ScenarioReport>& reports) {
  std::ostringstream os;
  os << "| SDK Implementation | Attack Success | Defense Effective |\n"
     << "|---|---|:---:|\n";
  for (const auto& r : reports) {
    os << "| " << implementation_label(r) << " | " << r.successes << '/' << r.trials << " ("
       << percent(r.successes, r.trials) << ") | " << (r.successes == 0 ? "✓" : "✗")
       << " |\n";
  }
  return os.str();
}

std::string render_markdown(const ScenarioReport& r) {
  std::ostringstream os;
  os << "# " << r.name << "\n\n"
     << "- trials: " << r.trials << "\n"
     << "- seed: " << r.seed << "\n"
     << "- platform: " << r.platform << "\n"
     << "- successes: " << r.successes << '/' << r.trials << " ("
     << percent(r.successes, r.trials) << ")\n"
     << "- result: " << (r.passed ? "PASS" : "FAIL") << "\n\n";

  if (is_table3(r)) os << table3_markdown({r}) << '\n';
  if (r.matrix) os << r.matrix->to_markdown() << '\n';

  os << "## Checks\n\n| Check | Result | Detail |\n|---|---|---|\n";
  for (const auto& c : r.checks) {
    os << "| " << escape(c.name) << " | " << (c.passed ? "PASS" : "FAIL") << " | "
       << escape(c.detail) << " |\n";
  }
  if (!r.metrics.empty()) {
    os << "\n## Metrics\n\n| Metric | Value |\n|---|---:|\n";
    for (const auto& [k, v] : r.metrics) os << "| " << escape(k) << " | " << v << " |\n";
  }
  if (r.timing) {
    os << "\n## Verification time\n\n| Calls | Mean (ns) | Min (ns) | Max (ns) | Budget (ns) |\n"
       << "|---:|---:|---:|---:|---:|\n"
       << "| " << r.timing->calls << " | " << r.timing->meanNanos << " | "
       << r.timing->minNanos << " | " << r.timing->maxNanos << " | "
       << r.timing->budgetNanos << " |\n";
  }
  os << "\n## Trials\n\n"
     << "| Trial | Actor | Mode | Accepted | Attributed To | Layer Rejected | Resolved Caller |"
        " Note |\n"
     << "|---:|---|---|---|---|---|---|---|\n";
  for (const auto& t : r.perTrial) {
    os << "| " << t.trial << " | " << escape(t.actor) << " | " << escape(t.mode) << " | "
       << (t.accepted ? "yes" : "no") << " | " << cell(t.attributedTo) << " | "
       << cell(t.layerRejected) << " | " << cell(t.resolvedCaller) << " | "
       << escape(t.note) << " |\n";
  }
  return os.str();
}

std::string render(const ScenarioReport& report, ReportFormat format) {
  return format == ReportFormat::Json ? render_json(report) : render_markdown(report);
}

ordered_json deterministic_view(const ScenarioReport& report) {
  ordered_json j = to_json(report);
  j.erase("timing");
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error(Errc::IoError, "write failed: " + path);
}

}  // namespace ipcauth
