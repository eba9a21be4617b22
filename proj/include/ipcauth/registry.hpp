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

#ifndef IPCAUTH_REGISTRY_HPP_
#define IPCAUTH_REGISTRY_HPP_

#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ipcauth/clock.hpp"
#include "ipcauth/device.hpp"

namespace ipcauth {

enum class PartnerStatus { Active, Revoked };
enum class Verdict { Accept, Reject };
enum class VerdictReason {
  Accepted,
  UnknownPartner,
  CertMismatch,
  Revoked,
  BadProviderCredential,
};

std::string_view to_string(PartnerStatus s) noexcept;
std::string_view to_string(Verdict v) noexcept;
std::string_view to_string(VerdictReason r) noexcept;

struct PartnerTriple {
  std::string packageName;
  CertHash certHash;
  std::string clientId;

  friend bool operator==(const PartnerTriple&, const PartnerTriple&) = default;
};

struct PartnerRecord {
  std::string packageName;
  CertHash certHash;
  std::string clientId;
  PartnerStatus status = PartnerStatus::Active;
  Tick registeredAt = 0;

  friend bool operator==(const PartnerRecord&, const PartnerRecord&) = default;
};

struct ValidationResult {
  Verdict verdict = Verdict::Reject;
  VerdictReason reason = VerdictReason::UnknownPartner;

  bool accepted() const noexcept { return verdict == Verdict::Accept; }
  friend bool operator==(const ValidationResult&, const ValidationResult&) = default;
};

struct AuditEntry {
  Tick timestamp = 0;
  PartnerTriple triple;
  bool includeCert = true;
  Verdict verdict = Verdict::Reject;
  VerdictReason reason = VerdictReason::UnknownPartner;

  friend bool operator==(const AuditEntry&, const AuditEntry&) = default;
};

struct AuditFilter {
  std::optional<std::string> packageName;
  std::optional<Verdict> verdict;
};

/// Partners and audit trail; the unit of persistence.
struct RegistryState {
  std::vector<PartnerRecord> partners;
  std::vector<AuditEntry> audit;

  friend bool operator==(const RegistryState&, const RegistryState&) = default;
};

inline constexpr int kRegistrySchemaVersion = 1;

/// Canonical JSON: {"schemaVersion": 1, "partners": [...], "audit": [...]}.
nlohmann::ordered_json to_json(const RegistryState& state);
/// Throws Errc::CorruptFile.
RegistryState registry_state_from_json(const nlohmann::json& j);
/// Pretty-printed, trailing newline.
std::string serialize(const RegistryState& state);
/// Throws Errc::IoError, Errc::CorruptFile.
RegistryState load_registry_state(const std::string& path);

/// The server-side partner registry.
///
/// Every operation runs under one lock, so validation and its audit append
/// form a total order even when served concurrently. REVOKED records never
/// become ACTIVE again; re-onboarding appends a new record.
class PartnerRegistry {
 public:
  PartnerRegistry(std::string providerCredential, Clock clock,
                  RegistryState state = {});

  PartnerRegistry(const PartnerRegistry&) = delete;
  PartnerRegistry& operator=(const PartnerRegistry&) = delete;

  /// Throws Errc::DuplicateActive.
  PartnerRecord register_partner(std::string packageName, CertHash certHash,
                                 std::string clientId);
  /// Throws Errc::NotFound when no ACTIVE record matches.
  PartnerRecord rotate_certificate(std::string_view packageName,
                                   std::string_view clientId, CertHash newCertHash);
  /// Throws Errc::NotFound when no ACTIVE record matches.
  void revoke_partner(std::string_view packageName, std::string_view clientId);

  /// ACCEPT iff an ACTIVE record matches package and client id, and the
  /// certificate hash too when `includeCert`. Every call is audited; a wrong
  /// provider credential is audited and then thrown as
  /// Errc::BadProviderCredential.
  ValidationResult validate(const PartnerTriple& triple,
                            std::string_view providerCredential, bool includeCert);

  /// Certificate hash on file for (package, client id): the ACTIVE record's,
  /// else the most recent REVOKED one's. Not audited. Throws
  /// Errc::BadProviderCredential.
  std::optional<CertHash> expected_cert(std::string_view packageName,
                                        std::string_view clientId,
                                        std::string_view providerCredential) const;

  std::vector<AuditEntry> list_audit(const AuditFilter& filter = {}) const;
  std::vector<PartnerRecord> partners() const;
  RegistryState snapshot() const;

  /// Throws Errc::IoError.
  void persist(const std::string& path) const;

  bool credential_matches(std::string_view providerCredential) const noexcept;

 private:
  Tick stamp();
  std::optional<std::size_t> active_locked(std::string_view packageName,
                                           std::string_view clientId) const;

  std::string credential_;
  Clock clock_;
  RegistryState state_;
  mutable std::mutex mutex_;
};

}  // namespace ipcauth

#endif  // IPCAUTH_REGISTRY_HPP_
