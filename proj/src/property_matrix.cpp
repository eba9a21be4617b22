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
#include "ipcauth/property_matrix.hpp"

#include <fstream>
#include <sstream>

#include "ipcauth/error.hpp"

namespace ipcauth {

std::string_view id_of(Mechanism m) noexcept {
  switch (m) {
    case Mechanism::StartActivityForResult: return "start_activity_for_result";
    case Mechanism::GetReferrer: return "get_referrer";
    case Mechanism::PendingIntentCreator: return "pending_intent_creator";
    case Mechanism::BroadcastPermission: return "broadcast_permission";
    case Mechanism::ProviderPermission: return "provider_permission";
    case Mechanism::KnownSigners: return "known_signers";
    case Mechanism::Pkce: return "pkce";
    case Mechanism::BoundServiceUid: return "bound_service_uid";
  }
  return "";
}

std::string_view id_of(Property p) noexcept {
  switch (p) {
    case Property::KernelBacked: return "kernelBacked";
    case Property::Unforgeable: return "unforgeable";
    case Property::ReplayResistant: return "replayResistant";
    case Property::ScalableNoManifest: return "scalableNoManifest";
    case Property::Bidirectional: return "bidirectional";
  }
  return "";
}

std::string_view label_of(Mechanism m) noexcept {
  switch (m) {
    case Mechanism::StartActivityForResult: return "startActivityForResult";
    case Mechanism::GetReferrer: return "getReferrer()";
    case Mechanism::PendingIntentCreator: return "PI.getCreatorPackage()";
    case Mechanism::BroadcastPermission: return "BroadcastReceiver (perm.)";
    case Mechanism::ProviderPermission: return "ContentProvider (perm.)";
    case Mechanism::KnownSigners: return "Signature/knownSigners";
    case Mechanism::Pkce: return "PKCE";
    case Mechanism::BoundServiceUid: return "Bound Service + Binder UID";
  }
  return "";
}

std::string_view label_of(Property p) noexcept {
  switch (p) {
    case Property::KernelBacked: return "Kernel-backed identity";
    case Property::Unforgeable: return "Unforgeable from app context";
    case Property::ReplayResistant: return "Replay-resistant";
    case Property::ScalableNoManifest: return "Scalable (no manifest edit)";
    case Property::Bidirectional: return "Bidirectional";
  }
  return "";
}

std::string_view to_string(Mark m) noexcept {
  switch (m) {
    case Mark::Yes: return "YES";
    case Mark::No: return "NO";
    case Mark::Partial: return "PARTIAL";
  }
  return "";
}

std::string_view glyph_of(Mark m) noexcept {
  switch (m) {
    case Mark::Yes: return "✓";
    case Mark::No: return "✗";
    case Mark::Partial: return "~";
  }
  return "";
}

Mark parse_mark(std::string_view text) {
  if (text == "YES") return Mark::Yes;
  if (text == "NO") return Mark::No;
  if (text == "PARTIAL") return Mark::Partial;
  throw Error(Errc::CorruptFile, "unknown mark " + std::string(text));
}

Mechanism parse_mechanism(std::string_view id) {
  for (Mechanism m : kAllMechanisms) {
    if (id_of(m) == id) return m;
  }
  throw Error(Errc::CorruptFile, "unknown mechanism " + std::string(id));
}

std::optional<Mark> analytic_mark(Mechanism m, Property p) noexcept {
  const bool permissionRow = m == Mechanism::BroadcastPermission ||
                             m == Mechanism::ProviderPermission ||
                             m == Mechanism::KnownSigners;
  // System-enforced, but the service never learns who the caller is.
  if (p == Property::KernelBacked && permissionRow) return Mark::Partial;
  // Only the token and the bound connection have a return path to exercise.
  if (p == Property::Bidirectional && m != Mechanism::PendingIntentCreator &&
      m != Mechanism::BoundServiceUid) {
    return Mark::No;
  }
  return std::nullopt;
}

CellSource cell_source(Mechanism m, Property p) noexcept {
  return analytic_mark(m, p) ? CellSource::Analytic : CellSource::Scenario;
}

void PropertyMatrix::set(Mechanism m, Property p, MatrixCell cell) {
  cells_[{m, p}] = std::move(cell);
}

const MatrixCell& PropertyMatrix::cell(Mechanism m, Property p) const {
  auto it = cells_.find({m, p});
  if (it == cells_.end()) {
    throw Error(Errc::NotFound, std::string(id_of(m)) + "." + std::string(id_of(p)));
  }
  return it->second;
}

std::vector<std::string> PropertyMatrix::diff_marks(const PropertyMatrix& other) const {
  std::vector<std::string> out;
  for (Mechanism m : kAllMechanisms) {
    for (Property p : kAllProperties) {
      auto a = cells_.find({m, p});
      auto b = other.cells_.find({m, p});
      const std::string where = std::string(id_of(m)) + "." + std::string(id_of(p));
      if (a == cells_.end() || b == other.cells_.end()) {
        if (a != cells_.end() || b != other.cells_.end()) out.push_back(where + ": missing");
        continue;
      }
      if (a->second.mark != b->second.mark) {
        out.push_back(where + ": " + std::string(to_string(a->second.mark)) +
                      " != " + std::string(to_string(b->second.mark)));
      }
    }
  }
  return out;
}

nlohmann::ordered_json PropertyMatrix::to_json() const {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (Mechanism m : kAllMechanisms) {
    nlohmann::ordered_json row;
    row["mechanism"] = id_of(m);
    row["label"] = label_of(m);
    for (Property p : kAllProperties) {
      auto it = cells_.find({m, p});
      if (it == cells_.end()) continue;
      nlohmann::ordered_json c;
      c["mark"] = to_string(it->second.mark);
      c["source"] = it->second.source == CellSource::Scenario ? "SCENARIO" : "ANALYTIC";
      if (!it->second.scenario.empty()) c["scenario"] = it->second.scenario;
      row[std::string(id_of(p))] = std::move(c);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

PropertyMatrix PropertyMatrix::from_json(const nlohmann::json& j) {
  try {
    const nlohmann::json& rows = j.is_object() ? j.at("mechanisms") : j;
    PropertyMatrix out;
    for (const auto& row : rows) {
      const Mechanism m = parse_mechanism(row.at("mechanism").get<std::string>());
      for (Property p : kAllProperties) {
        const auto& v = row.at(std::string(id_of(p)));
        MatrixCell cell;
        cell.source = cell_source(m, p);
        if (v.is_string()) {
          cell.mark = parse_mark(v.get<std::string>());
        } else {
          cell.mark = parse_mark(v.at("mark").get<std::string>());
          const auto src = v.value("source", "ANALYTIC");
          cell.source = src == "SCENARIO" ? CellSource::Scenario : CellSource::Analytic;
          cell.scenario = v.value("scenario", "");
        }
        out.set(m, p, std::move(cell));
      }
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::CorruptFile, e.what());
  }
}

PropertyMatrix PropertyMatrix::load_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::CorruptFile, path + ": " + e.what());
  }
  PropertyMatrix m = from_json(j);
  if (!m.complete()) throw Error(Errc::CorruptFile, path + ": fewer than 40 cells");
  return m;
}

std::string PropertyMatrix::to_markdown() const {
  std::ostringstream os;
  os << "| Mechanism |";
  for (Property p : kAllProperties) os << ' ' << label_of(p) << " |";
  os << "\n|---|";
  for (std::size_t i = 0; i < kAllProperties.size(); ++i) os << ":---:|";
  os << '\n';
  for (Mechanism m : kAllMechanisms) {
    os << "| " << label_of(m) << " |";
    for (Property p : kAllProperties) {
      auto it = cells_.find({m, p});
      os << ' ' << (it == cells_.end() ? "?" : glyph_of(it->second.mark)) << " |";
    }
    os << '\n';
  }
  return os.str();
}

PropertyMatrix build_property_matrix(const std::vector<ScenarioOutcome>& outcomes) {
  std::map<std::pair<Mechanism, Property>, const ScenarioOutcome*> byCell;
  for (const auto& o : outcomes) byCell[{o.mechanism, o.property}] = &o;

  PropertyMatrix matrix;
  for (Mechanism m : kAllMechanisms) {
    for (Property p : kAllProperties) {
      if (auto fixed = analytic_mark(m, p)) {
        matrix.set(m, p, {*fixed, CellSource::Analytic, {}});
        continue;
      }
      auto it = byCell.find({m, p});
      if (it == byCell.end()) {
        throw Error(Errc::IncompleteOutcomes,
                    "no outcome for " + std::string(id_of(m)) + "." +
                        std::string(id_of(p)));
      }
      matrix.set(m, p,
                 {it->second->satisfied ? Mark::Yes : Mark::No,
                  CellSource::Scenario, it->second->scenario});
    }
  }
  return matrix;
}

}  // namespace ipcauth
