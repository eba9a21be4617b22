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
#include "ipcauth/registry.hpp"

#include <openssl/crypto.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "ipcauth/error.hpp"

namespace ipcauth {

std::string_view to_string(PartnerStatus s) noexcept {
  return s == PartnerStatus::Active ? "ACTIVE" : "REVOKED";
}

std::string_view to_string(Verdict v) noexcept {
  return v == Verdict::Accept ? "ACCEPT" : "REJECT";
}

std::string_view to_string(VerdictReason r) noexcept {
  switch (r) {
    case VerdictReason::Accepted: return "ACCEPTED";
    case VerdictReason::UnknownPartner: return "UNKNOWN_PARTNER";
    case VerdictReason::CertMismatch: return "CERT_MISMATCH";
    case VerdictReason::Revoked: return "REVOKED";
    case VerdictReason::BadProviderCredential: return "BAD_PROVIDER_CREDENTIAL";
  }
  return "";
}

namespace {

template <class E, std::size_t N>
E parse_enum(std::string_view text, const std::array<E, N>& values) {
  for (E v : values) {
    if (to_string(v) == text) return v;
  }
  throw Error(Errc::CorruptFile, "unexpected value " + std::string(text));
}

PartnerStatus parse_status(std::string_view t) {
  return parse_enum(t, std::array{PartnerStatus::Active, PartnerStatus::Revoked});
}
Verdict parse_verdict(std::string_view t) {
  return parse_enum(t, std::array{Verdict::Accept, Verdict::Reject});
}
VerdictReason parse_reason(std::string_view t) {
  return parse_enum(t, std::array{VerdictReason::Accepted, VerdictReason::UnknownPartner,
                                  VerdictReason::CertMismatch, VerdictReason::Revoked,
                                  VerdictReason::BadProviderCredential});
}

}  // namespace

nlohmann::ordered_json to_json(const RegistryState& state) {
  nlohmann::ordered_json j;
  j["schemaVersion"] = kRegistrySchemaVersion;
  j["partners"] = nlohmann::ordered_json::array();
  for (const auto& r : state.partners) {
    nlohmann::ordered_json p;
    p["packageName"] = r.packageName;
    p["certHash"] = r.certHash.hex();
    p["clientId"] = r.clientId;
    p["status"] = to_string(r.status);
    p["registeredAt"] = r.registeredAt;
    j["partners"].push_back(std::move(p));
  }
  j["audit"] = nlohmann::ordered_json::array();
  for (const auto& a : state.audit) {
    nlohmann::ordered_json e;
    e["timestamp"] = a.timestamp;
    e["packageName"] = a.triple.packageName;
    e["certHash"] = a.triple.certHash.hex();
    e["clientId"] = a.triple.clientId;
    e["includeCert"] = a.includeCert;
    e["verdict"] = to_string(a.verdict);
    e["reason"] = to_string(a.reason);
    j["audit"].push_back(std::move(e));
  }
  return j;
}

RegistryState registry_state_from_json(const nlohmann::json& j) {
  try {
    if (j.at("schemaVersion").get<int>() != kRegistrySchemaVersion) {
      throw Error(Errc::CorruptFile, "unsupported schemaVersion");
    }
    RegistryState state;
    for (const auto& p : j.at("partners")) {
      state.partners.push_back({p.at("packageName").get<std::string>(),
                                CertHash::from_hex(p.at("certHash").get<std::string>()),
                                p.at("clientId").get<std::string>(),
                                parse_status(p.at("status").get<std::string>()),
                                p.at("registeredAt").get<Tick>()});
    }
    for (const auto& e : j.at("audit")) {
      state.audit.push_back(
          {e.at("timestamp").get<Tick>(),
           {e.at("packageName").get<std::string>(),
            CertHash::from_hex(e.at("certHash").get<std::string>()),
            e.at("clientId").get<std::string>()},
           e.at("includeCert").get<bool>(),
           parse_verdict(e.at("verdict").get<std::string>()),
           parse_reason(e.at("reason").get<std::string>())});
    }
    return state;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::CorruptFile, e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::InvalidArgument) throw Error(Errc::CorruptFile, e.what());
    throw;
  }
}

std::string serialize(const RegistryState& state) { return to_json(state).dump(2) + "\n"; }

RegistryState load_registry_state(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  nlohmann::json j = nlohmann::json::parse(buf.str(), nullptr, false);
  if (j.is_discarded()) throw Error(Errc::CorruptFile, path + ": not valid JSON");
  return registry_state_from_json(j);
}

PartnerRegistry::PartnerRegistry(std::string providerCredential, Clock clock,
                                 RegistryState state)
    : credential_(std::move(providerCredential)),
      clock_(std::move(clock)),
      state_(std::move(state)) {}

bool PartnerRegistry::credential_matches(std::string_view c) const noexcept {
  return c.size() == credential_.size() &&
         CRYPTO_memcmp(c.data(), credential_.data(), c.size()) == 0;
}

Tick PartnerRegistry::stamp() {
  Tick now = clock_();
  if (!state_.audit.empty()) now = std::max(now, state_.audit.back().timestamp);
  return now;
}

std::optional<std::size_t> PartnerRegistry::active_locked(
    std::string_view packageName, std::string_view clientId) const {
  for (std::size_t i = 0; i < state_.partners.size(); ++i) {
    const PartnerRecord& r = state_.partners[i];
    if (r.status == PartnerStatus::Active && r.packageName == packageName &&
        r.clientId == clientId) {
      return i;
    }
  }
  return std::nullopt;
}

PartnerRecord PartnerRegistry::register_partner(std::string packageName,
                                                CertHash certHash,
                                                std::string clientId) {
  std::lock_guard lock(mutex_);
  if (active_locked(packageName, clientId)) {
    throw Error(Errc::DuplicateActive, packageName + "/" + clientId);
  }
  state_.partners.push_back({std::move(packageName), std::move(certHash),
                             std::move(clientId), PartnerStatus::Active, clock_()});
  return state_.partners.back();
}

PartnerRecord PartnerRegistry::rotate_certificate(std::string_view packageName,
                                                  std::string_view clientId,
                                                  CertHash newCertHash) {
  std::lock_guard lock(mutex_);
  const auto index = active_locked(packageName, clientId);
  if (!index) {
    throw Error(Errc::NotFound, std::string(packageName) + "/" + std::string(clientId));
  }
  PartnerRecord& record = state_.partners[*index];
  record.certHash = std::move(newCertHash);
  return record;
}

void PartnerRegistry::revoke_partner(std::string_view packageName,
                                     std::string_view clientId) {
  std::lock_guard lock(mutex_);
  const auto index = active_locked(packageName, clientId);
  if (!index) {
    throw Error(Errc::NotFound, std::string(packageName) + "/" + std::string(clientId));
  }
  state_.partners[*index].status = PartnerStatus::Revoked;
}

ValidationResult PartnerRegistry::validate(const PartnerTriple& triple,
                                           std::string_view providerCredential,
                                           bool includeCert) {
  std::lock_guard lock(mutex_);
  ValidationResult result;
  if (!credential_matches(providerCredential)) {
    result = {Verdict::Reject, VerdictReason::BadProviderCredential};
  } else if (const auto i = active_locked(triple.packageName, triple.clientId)) {
    result = includeCert && state_.partners[*i].certHash != triple.certHash
                 ? ValidationResult{Verdict::Reject, VerdictReason::CertMismatch}
                 : ValidationResult{Verdict::Accept, VerdictReason::Accepted};
  } else {
    const bool revoked = std::any_of(
        state_.partners.begin(), state_.partners.end(), [&](const PartnerRecord& p) {
          return p.packageName == triple.packageName && p.clientId == triple.clientId;
        });
    result = {Verdict::Reject,
              revoked ? VerdictReason::Revoked : VerdictReason::UnknownPartner};
  }
  state_.audit.push_back({stamp(), triple, includeCert, result.verdict, result.reason});
  if (result.reason == VerdictReason::BadProviderCredential) {
    throw Error(Errc::BadProviderCredential, "provider credential rejected");
  }
  return result;
}

std::optional<CertHash> PartnerRegistry::expected_cert(
    std::string_view packageName, std::string_view clientId,
    std::string_view providerCredential) const {
  std::lock_guard lock(mutex_);
  if (!credential_matches(providerCredential)) {
    throw Error(Errc::BadProviderCredential, "provider credential rejected");
  }
  if (const auto i = active_locked(packageName, clientId)) {
    return state_.partners[*i].certHash;
  }
  for (auto it = state_.partners.rbegin(); it != state_.partners.rend(); ++it) {
    if (it->packageName == packageName && it->clientId == clientId) return it->certHash;
  }
  return std::nullopt;
}

std::vector<AuditEntry> PartnerRegistry::list_audit(const AuditFilter& filter) const {
  std::lock_guard lock(mutex_);
  std::vector<AuditEntry> out;
  for (const auto& e : state_.audit) {
    if (filter.packageName && e.triple.packageName != *filter.packageName) continue;
    if (filter.verdict && e.verdict != *filter.verdict) continue;
    out.push_back(e);
  }
  return out;
}

std::vector<PartnerRecord> PartnerRegistry::partners() const {
  std::lock_guard lock(mutex_);
  return state_.partners;
}

RegistryState PartnerRegistry::snapshot() const {
  std::lock_guard lock(mutex_);
  return state_;
}

void PartnerRegistry::persist(const std::string& path) const {
  const std::string text = serialize(snapshot());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path);
  out << text;
  if (!out.flush()) throw Error(Errc::IoError, "short write to " + path);
}

}  // namespace ipcauth
