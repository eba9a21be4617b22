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

#ifndef IPCAUTH_AUTH_MECHANISMS_HPP_
#define IPCAUTH_AUTH_MECHANISMS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>

#include "ipcauth/binder.hpp"
#include "ipcauth/pending_intent.hpp"

namespace ipcauth {

enum class DecisionReason {
  Accepted,
  NotAllowlisted,
  UnknownCaller,
  MissingPermission,
  UnknownSigner,
  StaleEvidence,
  CodeMismatch,
  UnknownFlow,
};

std::string_view to_string(DecisionReason reason) noexcept;

struct AuthDecision {
  bool accepted = false;
  /// Present whenever accepted.
  std::optional<std::string> authenticatedAs;
  DecisionReason reason = DecisionReason::NotAllowlisted;
  /// The identity the mechanism surfaced to the service, accepted or not.
  /// Empty for mechanisms that never surface one.
  std::optional<std::string> observedIdentity;

  static AuthDecision accept(std::string as) {
    return {true, as, DecisionReason::Accepted, as};
  }
  static AuthDecision reject(DecisionReason reason,
                             std::optional<std::string> observed = std::nullopt) {
    return {false, std::nullopt, reason, std::move(observed)};
  }
};

using Allowlist = std::set<std::string, std::less<>>;

/// The vulnerable check: trusts whoever created the token.
AuthDecision authenticate_pi_creator(const PendingIntentToken& token,
                                     const Allowlist& allowlist);

/// Resolves the kernel-stamped calling UID to its package. Must run inside the
/// handler for `txn`; otherwise Errc::NotInHandlerScope propagates.
AuthDecision authenticate_bound_uid(const Kernel& kernel, const Transaction& txn,
                                    const Allowlist& allowlist);

// --- referrer / startActivityForResult -------------------------------------

struct ReferrerEvidence {
  std::uint64_t launchId = 0;
  std::string referrer;
  bool activityContext = false;
};

/// Activity launches and the referrer the system reports for them. Evidence
/// is only good while its launch is live.
class ActivityTaskManager {
 public:
  explicit ActivityTaskManager(const Kernel& kernel);

  ReferrerEvidence start_activity(const ProcessHandle& caller);
  ReferrerEvidence start_activity_for_result(const ProcessHandle& caller);
  /// SDK call from a service or content provider: no activity, no referrer.
  ReferrerEvidence call_from_background(const ProcessHandle& caller);
  /// Task hijack collapsed to one call: the resulting launch reports `victim`
  /// as its referrer.
  ReferrerEvidence spoof_via_task_hijack(const ProcessHandle& attacker,
                                         std::string_view victim);

  void finish(const ReferrerEvidence& evidence);
  bool is_live(const ReferrerEvidence& evidence) const;

 private:
  ReferrerEvidence launch(const ProcessHandle& caller, std::string referrer);

  const Kernel& kernel_;
  std::set<std::uint64_t> live_;
  std::uint64_t next_launch_ = 1;
};

/// Shared by startActivityForResult and getReferrer. Throws
/// Errc::NoActivityContext for background evidence.
AuthDecision authenticate_referrer(const ActivityTaskManager& activities,
                                   const ReferrerEvidence& evidence,
                                   const Allowlist& allowlist);

// --- install-time permissions ----------------------------------------------

enum class PermissionKind { Broadcast, Provider };

/// Accepts iff the caller's manifest uses `permission`. The service only
/// learns that the caller holds the permission, never who the caller is.
AuthDecision authenticate_custom_permission(const Kernel& kernel,
                                            const ProcessHandle& caller,
                                            std::string_view permission,
                                            PermissionKind kind);

/// Accepts iff the caller's certificate hash is listed in the host manifest.
AuthDecision authenticate_known_signers(const Kernel& kernel,
                                        const ProcessHandle& caller,
                                        const Manifest& hostManifest);

// --- PKCE ------------------------------------------------------------------

std::string pkce_challenge(std::string_view verifier);

struct PkceTicket {
  std::uint64_t flowId = 0;
  std::string code;
};

struct PkceFlow {
  std::uint64_t flowId = 0;
  std::string codeChallenge;
  std::string claimedClientId;
  std::optional<std::string> issuedCode;
  bool completed = false;
  /// Recorded for the harness; the exchange never consults it.
  Uid initiatorUid = 0;
};

/// Authorization-code exchange with PKCE. Proves the completer started the
/// flow; takes the claimed client id on faith.
class PkceAuthorizationServer {
 public:
  PkceAuthorizationServer(const Kernel& kernel, std::uint64_t seed);

  PkceTicket pkce_initiate(const ProcessHandle& initiator,
                           std::string codeChallenge,
                           std::string claimedClientId);
  /// Throws Errc::UnknownFlow; Errc::CodeMismatch when the code is wrong or
  /// already redeemed, or the verifier does not hash to the challenge.
  AuthDecision pkce_exchange(std::uint64_t flowId, std::string_view code,
                             std::string_view verifier);

  const PkceFlow& flow(std::uint64_t flowId) const;

 private:
  const Kernel& kernel_;
  std::uint64_t seed_;
  std::map<std::uint64_t, PkceFlow> flows_;
  std::uint64_t next_flow_ = 1;
};

// --- replay ------------------------------------------------------------------

struct CapturedToken {
  PendingIntentToken token;
};
struct CapturedTransaction {
  Transaction txn;
};
struct CapturedReferrer {
  ReferrerEvidence evidence;
};
struct CapturedPermissionGrant {
  std::string permission;
  PermissionKind kind = PermissionKind::Broadcast;
};
struct CapturedSignerProof {
  CertHash presentedHash;
};
struct CapturedPkceCode {
  std::uint64_t flowId = 0;
  std::string code;
};

using CapturedEvidence =
    std::variant<CapturedToken, CapturedTransaction, CapturedReferrer,
                 CapturedPermissionGrant, CapturedSignerProof, CapturedPkceCode>;

struct ReplayContext {
  const Kernel& kernel;
  const ActivityTaskManager& activities;
  PkceAuthorizationServer& pkce;
  const Allowlist& allowlist;
  const Manifest& hostManifest;
  /// Who re-presents the evidence.
  ProcessHandle presenter;
};

/// Re-presents previously observed evidence. Errors from the mechanism are
/// folded into a rejection.
AuthDecision capture_and_replay(ReplayContext& context,
                                const CapturedEvidence& evidence);

}  // namespace ipcauth

#endif  // IPCAUTH_AUTH_MECHANISMS_HPP_
