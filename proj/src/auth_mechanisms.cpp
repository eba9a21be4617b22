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
#include "ipcauth/auth_mechanisms.hpp"

#include "ipcauth/digest.hpp"
#include "ipcauth/error.hpp"

namespace ipcauth {

std::string_view to_string(DecisionReason reason) noexcept {
  switch (reason) {
    case DecisionReason::Accepted: return "ACCEPTED";
    case DecisionReason::NotAllowlisted: return "NOT_ALLOWLISTED";
    case DecisionReason::UnknownCaller: return "UNKNOWN_CALLER";
    case DecisionReason::MissingPermission: return "MISSING_PERMISSION";
    case DecisionReason::UnknownSigner: return "UNKNOWN_SIGNER";
    case DecisionReason::StaleEvidence: return "STALE_EVIDENCE";
    case DecisionReason::CodeMismatch: return "CODE_MISMATCH";
    case DecisionReason::UnknownFlow: return "UNKNOWN_FLOW";
  }
  return "UNKNOWN";
}

AuthDecision authenticate_pi_creator(const PendingIntentToken& token,
                                     const Allowlist& allowlist) {
  const std::string& caller = get_creator_package(token);
  if (allowlist.contains(caller)) return AuthDecision::accept(caller);
  return AuthDecision::reject(DecisionReason::NotAllowlisted, caller);
}

AuthDecision authenticate_bound_uid(const Kernel& kernel, const Transaction& txn,
                                    const Allowlist& allowlist) {
  const Uid callerUid = kernel.get_calling_uid(txn);
  const auto packages = kernel.device().get_packages_for_uid(callerUid);
  if (packages.empty()) return AuthDecision::reject(DecisionReason::UnknownCaller);
  const std::string& callerPkg = packages.front();
  if (allowlist.contains(callerPkg)) return AuthDecision::accept(callerPkg);
  return AuthDecision::reject(DecisionReason::NotAllowlisted, callerPkg);
}

// --- referrer ----------------------------------------------------------------

ActivityTaskManager::ActivityTaskManager(const Kernel& kernel) : kernel_(kernel) {}

ReferrerEvidence ActivityTaskManager::launch(const ProcessHandle& caller,
                                             std::string referrer) {
  kernel_.require_valid(caller);
  const std::uint64_t id = next_launch_++;
  live_.insert(id);
  return {id, std::move(referrer), true};
}

ReferrerEvidence ActivityTaskManager::start_activity(const ProcessHandle& caller) {
  return launch(caller, kernel_.package_of(caller));
}

ReferrerEvidence ActivityTaskManager::start_activity_for_result(
    const ProcessHandle& caller) {
  return launch(caller, kernel_.package_of(caller));
}

ReferrerEvidence ActivityTaskManager::call_from_background(
    const ProcessHandle& caller) {
  kernel_.require_valid(caller);
  return {0, {}, false};
}

ReferrerEvidence ActivityTaskManager::spoof_via_task_hijack(
    const ProcessHandle& attacker, std::string_view victim) {
  return launch(attacker, std::string(victim));
}

void ActivityTaskManager::finish(const ReferrerEvidence& evidence) {
  live_.erase(evidence.launchId);
}

bool ActivityTaskManager::is_live(const ReferrerEvidence& evidence) const {
  return live_.contains(evidence.launchId);
}

AuthDecision authenticate_referrer(const ActivityTaskManager& activities,
                                   const ReferrerEvidence& evidence,
                                   const Allowlist& allowlist) {
  if (!evidence.activityContext) {
    throw Error(Errc::NoActivityContext, "referrer requires an activity launch");
  }
  if (!activities.is_live(evidence)) {
    return AuthDecision::reject(DecisionReason::StaleEvidence, evidence.referrer);
  }
  if (allowlist.contains(evidence.referrer)) {
    return AuthDecision::accept(evidence.referrer);
  }
  return AuthDecision::reject(DecisionReason::NotAllowlisted, evidence.referrer);
}

// --- permissions ---------------------------------------------------------------

AuthDecision authenticate_custom_permission(const Kernel& kernel,
                                            const ProcessHandle& caller,
                                            std::string_view permission,
                                            PermissionKind kind) {
  const InstalledApp& app = kernel.device().app(kernel.package_of(caller));
  if (!app.manifest.usedPermissions.contains(std::string(permission))) {
    return AuthDecision::reject(DecisionReason::MissingPermission);
  }
  const char* holder = kind == PermissionKind::Broadcast ? "broadcast-holder:"
                                                         : "provider-holder:";
  return AuthDecision{true, holder + std::string(permission),
                      DecisionReason::Accepted, std::nullopt};
}

AuthDecision authenticate_known_signers(const Kernel& kernel,
                                        const ProcessHandle& caller,
                                        const Manifest& hostManifest) {
  const InstalledApp& app = kernel.device().app(kernel.package_of(caller));
  if (!hostManifest.knownSignerHashes.contains(app.certHash)) {
    return AuthDecision::reject(DecisionReason::UnknownSigner);
  }
  return AuthDecision{true, "known-signer:" + app.certHash.hex(),
                      DecisionReason::Accepted, std::nullopt};
}

// --- PKCE --------------------------------------------------------------------

std::string pkce_challenge(std::string_view verifier) { return sha256_hex(verifier); }

PkceAuthorizationServer::PkceAuthorizationServer(const Kernel& kernel,
                                                 std::uint64_t seed)
    : kernel_(kernel), seed_(seed) {}

PkceTicket PkceAuthorizationServer::pkce_initiate(const ProcessHandle& initiator,
                                                  std::string codeChallenge,
                                                  std::string claimedClientId) {
  kernel_.require_valid(initiator);
  const std::uint64_t id = next_flow_++;
  std::string code = sha256_hex("pkce-code:" + std::to_string(seed_) + ":" +
                                std::to_string(id))
                         .substr(0, 32);
  flows_.emplace(id, PkceFlow{id, std::move(codeChallenge),
                              std::move(claimedClientId), code, false,
                              initiator.uid()});
  return {id, std::move(code)};
}

AuthDecision PkceAuthorizationServer::pkce_exchange(std::uint64_t flowId,
                                                    std::string_view code,
                                                    std::string_view verifier) {
  auto it = flows_.find(flowId);
  if (it == flows_.end()) {
    throw Error(Errc::UnknownFlow, "flow " + std::to_string(flowId));
  }
  PkceFlow& flow = it->second;
  if (flow.completed || !flow.issuedCode || *flow.issuedCode != code) {
    throw Error(Errc::CodeMismatch, "authorization code rejected");
  }
  if (pkce_challenge(verifier) != flow.codeChallenge) {
    throw Error(Errc::CodeMismatch, "verifier does not match challenge");
  }
  flow.completed = true;
  // Whoever completes the flow is whoever they claimed to be.
  return AuthDecision::accept(flow.claimedClientId);
}

const PkceFlow& PkceAuthorizationServer::flow(std::uint64_t flowId) const {
  auto it = flows_.find(flowId);
  if (it == flows_.end()) {
    throw Error(Errc::UnknownFlow, "flow " + std::to_string(flowId));
  }
  return it->second;
}

// --- replay --------------------------------------------------------------------

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

AuthDecision capture_and_replay(ReplayContext& context,
                                const CapturedEvidence& evidence) {
  try {
    return std::visit(
        Overloaded{
            [&](const CapturedToken& e) {
              return authenticate_pi_creator(e.token, context.allowlist);
            },
            [&](const CapturedTransaction& e) {
              return authenticate_bound_uid(context.kernel, e.txn,
                                            context.allowlist);
            },
            [&](const CapturedReferrer& e) {
              return authenticate_referrer(context.activities, e.evidence,
                                           context.allowlist);
            },
            [&](const CapturedPermissionGrant& e) {
              // The system re-checks the grant against the process presenting it.
              return authenticate_custom_permission(
                  context.kernel, context.presenter, e.permission, e.kind);
            },
            [&](const CapturedSignerProof&) {
              return authenticate_known_signers(context.kernel, context.presenter,
                                                context.hostManifest);
            },
            [&](const CapturedPkceCode& e) {
              // The replaying party never saw the verifier.
              return context.pkce.pkce_exchange(e.flowId, e.code, "");
            },
        },
        evidence);
  } catch (const Error& e) {
    switch (e.code()) {
      case Errc::NotInHandlerScope:
      case Errc::NoActivityContext:
        return AuthDecision::reject(DecisionReason::StaleEvidence);
      case Errc::CodeMismatch:
        return AuthDecision::reject(DecisionReason::CodeMismatch);
      case Errc::UnknownFlow:
        return AuthDecision::reject(DecisionReason::UnknownFlow);
      default:
        throw;
    }
  }
}

}  // namespace ipcauth
