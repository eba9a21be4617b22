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
// Per-mechanism scenarios behind the SCENARIO cells of the property matrix.
// Every scenario runs against a freshly built device.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ipcauth/auth_mechanisms.hpp"
#include "ipcauth/error.hpp"
#include "ipcauth/notifications.hpp"
#include "ipcauth/property_matrix.hpp"

namespace ipcauth {

namespace {

constexpr char kProvider[] = "com.poc.sdk.provider";
constexpr char kPartner[] = "com.poc.partner";
constexpr char kAttacker[] = "com.poc.attacker";
constexpr char kNewPartner[] = "com.poc.partner.onboarded";
constexpr char kPermission[] = "com.poc.sdk.permission.PUBLISH";
constexpr char kPartnerClient[] = "client-partner";
constexpr char kNewPartnerClient[] = "client-partner-onboarded";
constexpr char kAuthService[] = "auth";

bool is_referrer(Mechanism m) {
  return m == Mechanism::StartActivityForResult || m == Mechanism::GetReferrer;
}
bool is_permission(Mechanism m) {
  return m == Mechanism::BroadcastPermission || m == Mechanism::ProviderPermission;
}
PermissionKind kind_of(Mechanism m) {
  return m == Mechanism::BroadcastPermission ? PermissionKind::Broadcast
                                             : PermissionKind::Provider;
}

struct Lab {
  explicit Lab(std::uint64_t seed);

  ReferrerEvidence honest_launch(Mechanism m, const ProcessHandle& caller) {
    return m == Mechanism::StartActivityForResult
               ? activities.start_activity_for_result(caller)
               : activities.start_activity(caller);
  }

  PendingIntentToken post_partner_notification(const ProcessHandle& poster) {
    const std::string pkg = kernel.package_of(poster);
    auto token = intents.create_pending_intent(
        poster, {pkg + ".OPEN", {{"nonce", std::to_string(seed + clock.now())}}, pkg},
        Mutability::Immutable);
    clock.advance();
    notifications.post_notification(poster, {"Now playing", "Track " + std::to_string(seed % 97), token, {}});
    return token;
  }

  PendingIntentToken steal_partner_token() {
    post_partner_notification(partner);
    auto stolen = cache.get(kPartner);
    if (!stolen) throw Error(Errc::NotFound, "attacker harvested nothing");
    return *stolen;
  }

  AuthDecision call_bound(const ProcessHandle& caller, Parcel payload) {
    Connection conn = kernel.bind_service(caller, kProvider, kAuthService);
    return std::any_cast<AuthDecision>(kernel.transact(conn, std::move(payload)));
  }

  std::string pkce_package(const AuthDecision& d) const {
    if (!d.authenticatedAs) return {};
    auto it = clientToPackage.find(*d.authenticatedAs);
    return it == clientToPackage.end() ? std::string{} : it->second;
  }

  std::uint64_t seed;
  SimClock clock;
  Device device;
  Kernel kernel{device};
  PendingIntentManager intents{kernel};
  NotificationManager notifications{kernel, clock};
  ActivityTaskManager activities{kernel};
  PkceAuthorizationServer pkce;
  CredentialCache cache;
  Allowlist allowlist{kPartner};
  std::map<std::string, std::string> clientToPackage{{kPartnerClient, kPartner}};
  Manifest hostManifest;
  ProcessHandle provider;
  ProcessHandle partner;
  ProcessHandle attacker;

  std::vector<Uid> observedUids;
  std::optional<Transaction> capturedTxn;
  bool ackViaCallback = false;
  std::vector<std::string> partnerCallbacks;
  std::vector<DispatchRecord> partnerDispatches;

 private:
  static Device make_device();
};

Device Lab::make_device() {
  Device d;
  Manifest providerManifest;
  providerManifest.definedPermissions = {kPermission};
  providerManifest.exportedServices = {kAuthService};
  providerManifest.knownSignerHashes = {SigningKey::derive("partner-key").cert_hash()};
  d.install_app({kProvider, SigningKey::derive("provider-key"), providerManifest,
                 InstallSource::Store});
  Manifest partnerManifest;
  partnerManifest.usedPermissions = {kPermission};
  d.install_app({kPartner, SigningKey::derive("partner-key"), partnerManifest,
                 InstallSource::Store});
  d.install_app({kAttacker, SigningKey::derive("attacker-key"), {}, InstallSource::Store});
  d.grant_capability(kAttacker, Capability::NotificationListener);
  return d;
}

Lab::Lab(std::uint64_t s)
    : seed(s),
      device(make_device()),
      pkce(kernel, s),
      hostManifest(device.app(kProvider).manifest),
      provider(kernel.mint_handle(kProvider)),
      partner(kernel.mint_handle(kPartner)),
      attacker(kernel.mint_handle(kAttacker)) {
  kernel.register_service(provider, kAuthService, true, [this](const Transaction& txn) {
    observedUids.push_back(kernel.get_calling_uid(txn));
    capturedTxn = txn;
    AuthDecision d = authenticate_bound_uid(kernel, txn, allowlist);
    if (ackViaCallback && d.accepted) {
      kernel.invoke_callback(txn.connection(), "ack:" + std::to_string(txn.id()));
    }
    return Parcel(d);
  });
  notifications.set_listener(kAttacker, [this](const StatusBarNotification& sbn) {
    if (sbn.packageName != kPartner) return;
    for (auto& t : on_notification_posted(device, kAttacker, sbn)) {
      cache.store(sbn.packageName, t);
    }
  });
  intents.set_receiver(kPartner, [this](const DispatchRecord& r) {
    partnerDispatches.push_back(r);
  });
}

bool accepted_as_partner(const AuthDecision& d) {
  return d.accepted && d.authenticatedAs == std::string(kPartner);
}

// Does the identity the service sees match the process that actually called?
bool kernel_backed(Lab& lab, Mechanism m, std::string& evidence) {
  const std::string attackerPkg = lab.kernel.package_of(lab.attacker);
  std::string seenForAttacker;
  std::string seenForPartner;
  if (is_referrer(m)) {
    auto forged = lab.activities.spoof_via_task_hijack(lab.attacker, kPartner);
    seenForAttacker = authenticate_referrer(lab.activities, forged, lab.allowlist)
                          .observedIdentity.value_or("");
    auto honest = lab.honest_launch(m, lab.partner);
    seenForPartner = authenticate_referrer(lab.activities, honest, lab.allowlist)
                         .observedIdentity.value_or("");
  } else if (m == Mechanism::PendingIntentCreator) {
    auto stolen = lab.steal_partner_token();
    seenForAttacker = authenticate_pi_creator(stolen, lab.allowlist).observedIdentity.value_or("");
    auto own = lab.post_partner_notification(lab.partner);
    seenForPartner = authenticate_pi_creator(own, lab.allowlist).observedIdentity.value_or("");
  } else if (m == Mechanism::Pkce) {
    auto t = lab.pkce.pkce_initiate(lab.attacker, pkce_challenge("attacker-verifier"),
                                    kPartnerClient);
    seenForAttacker = lab.pkce_package(lab.pkce.pkce_exchange(t.flowId, t.code, "attacker-verifier"));
    auto p = lab.pkce.pkce_initiate(lab.partner, pkce_challenge("partner-verifier"),
                                    kPartnerClient);
    seenForPartner = lab.pkce_package(lab.pkce.pkce_exchange(p.flowId, p.code, "partner-verifier"));
  } else if (m == Mechanism::BoundServiceUid) {
    // A forged referrer and a stolen token ride along; neither may move the UID.
    lab.activities.spoof_via_task_hijack(lab.attacker, kPartner);
    auto stolen = lab.steal_partner_token();
    seenForAttacker = lab.call_bound(lab.attacker, stolen).observedIdentity.value_or("");
    if (lab.observedUids.back() != lab.attacker.uid()) {
      evidence = "kernel stamped uid " + std::to_string(lab.observedUids.back()) +
                 " for attacker uid " + std::to_string(lab.attacker.uid());
      return false;
    }
    seenForPartner = lab.call_bound(lab.partner, Parcel{}).observedIdentity.value_or("");
  } else {
    throw Error(Errc::InvalidArgument, "no kernel-identity scenario for " +
                                           std::string(id_of(m)));
  }
  evidence = "attacker call surfaced '" + seenForAttacker + "'; partner call surfaced '" +
             seenForPartner + "'";
  return seenForAttacker == attackerPkg && seenForPartner == kPartner;
}

// Can an unprivileged attacker get accepted in the partner's place?
bool unforgeable(Lab& lab, Mechanism m, std::string& evidence) {
  AuthDecision d;
  if (is_referrer(m)) {
    auto forged = lab.activities.spoof_via_task_hijack(lab.attacker, kPartner);
    d = authenticate_referrer(lab.activities, forged, lab.allowlist);
  } else if (m == Mechanism::PendingIntentCreator) {
    d = authenticate_pi_creator(lab.steal_partner_token(), lab.allowlist);
  } else if (is_permission(m) || m == Mechanism::KnownSigners) {
    // A same-name clone cannot be installed next to the partner, and the
    // attacker's manifest is fixed at install.
    try {
      lab.device.install_app({kPartner, SigningKey::derive("attacker-key"), {},
                              InstallSource::Sideload});
      evidence = "clone installed beside partner";
      return false;
    } catch (const Error& e) {
      if (e.code() != Errc::DuplicatePackage) throw;
    }
    d = is_permission(m)
            ? authenticate_custom_permission(lab.kernel, lab.attacker, kPermission, kind_of(m))
            : authenticate_known_signers(lab.kernel, lab.attacker, lab.hostManifest);
    evidence = std::string("attacker ") + (d.accepted ? "accepted" : "rejected: ") +
               std::string(to_string(d.reason));
    return !d.accepted;
  } else if (m == Mechanism::Pkce) {
    auto t = lab.pkce.pkce_initiate(lab.attacker, pkce_challenge("attacker-verifier"),
                                    kPartnerClient);
    d = lab.pkce.pkce_exchange(t.flowId, t.code, "attacker-verifier");
    if (d.accepted) d.authenticatedAs = lab.pkce_package(d);
  } else if (m == Mechanism::BoundServiceUid) {
    d = lab.call_bound(lab.attacker, lab.steal_partner_token());
  }
  evidence = std::string("attacker ") +
             (d.accepted ? "accepted as '" + d.authenticatedAs.value_or("") + "'"
                         : "rejected: " + std::string(to_string(d.reason)));
  return !accepted_as_partner(d);
}

// Partner evidence observed once, re-presented by the attacker one tick later.
bool replay_resistant(Lab& lab, Mechanism m, std::string& evidence) {
  std::optional<CapturedEvidence> captured;
  if (is_referrer(m)) {
    auto ev = lab.honest_launch(m, lab.partner);
    authenticate_referrer(lab.activities, ev, lab.allowlist);
    lab.activities.finish(ev);
    captured = CapturedReferrer{ev};
  } else if (m == Mechanism::PendingIntentCreator) {
    captured = CapturedToken{lab.steal_partner_token()};
  } else if (is_permission(m)) {
    authenticate_custom_permission(lab.kernel, lab.partner, kPermission, kind_of(m));
    captured = CapturedPermissionGrant{kPermission, kind_of(m)};
  } else if (m == Mechanism::KnownSigners) {
    authenticate_known_signers(lab.kernel, lab.partner, lab.hostManifest);
    captured = CapturedSignerProof{lab.device.app(kPartner).certHash};
  } else if (m == Mechanism::Pkce) {
    // Code intercepted mid-flow, before the partner redeems it.
    auto t = lab.pkce.pkce_initiate(lab.partner, pkce_challenge("partner-verifier"),
                                    kPartnerClient);
    captured = CapturedPkceCode{t.flowId, t.code};
  } else if (m == Mechanism::BoundServiceUid) {
    lab.call_bound(lab.partner, Parcel{});
    captured = CapturedTransaction{*lab.capturedTxn};
  }
  lab.clock.advance();
  ReplayContext ctx{lab.kernel, lab.activities, lab.pkce, lab.allowlist,
                    lab.hostManifest, lab.attacker};
  const AuthDecision d = capture_and_replay(ctx, *captured);
  evidence = std::string("replay ") +
             (d.accepted ? "accepted as '" + d.authenticatedAs.value_or("") + "'"
                         : "rejected: " + std::string(to_string(d.reason)));
  return !d.accepted;
}

// A new partner with a stock manifest; only server-side state changes.
bool scalable(Lab& lab, Mechanism m, std::string& evidence) {
  lab.device.install_app({kNewPartner, SigningKey::derive("new-partner-key"), {},
                          InstallSource::Store});
  const ProcessHandle fresh = lab.kernel.mint_handle(kNewPartner);
  lab.allowlist.insert(kNewPartner);
  lab.clientToPackage[kNewPartnerClient] = kNewPartner;

  AuthDecision d;
  if (is_referrer(m)) {
    d = authenticate_referrer(lab.activities, lab.honest_launch(m, fresh), lab.allowlist);
  } else if (m == Mechanism::PendingIntentCreator) {
    d = authenticate_pi_creator(lab.post_partner_notification(fresh), lab.allowlist);
  } else if (is_permission(m)) {
    d = authenticate_custom_permission(lab.kernel, fresh, kPermission, kind_of(m));
  } else if (m == Mechanism::KnownSigners) {
    d = authenticate_known_signers(lab.kernel, fresh, lab.hostManifest);
  } else if (m == Mechanism::Pkce) {
    auto t = lab.pkce.pkce_initiate(fresh, pkce_challenge("new-verifier"), kNewPartnerClient);
    d = lab.pkce.pkce_exchange(t.flowId, t.code, "new-verifier");
  } else if (m == Mechanism::BoundServiceUid) {
    d = lab.call_bound(fresh, Parcel{});
  }
  evidence = std::string("onboarded partner ") +
             (d.accepted ? "accepted" : "rejected: " + std::string(to_string(d.reason))) +
             " with host manifest unchanged";
  return d.accepted;
}

// Can the provider push something back to the partner over the same channel?
bool bidirectional(Lab& lab, Mechanism m, std::string& evidence) {
  if (m == Mechanism::BoundServiceUid) {
    lab.ackViaCallback = true;
    Connection conn = lab.kernel.bind_service(lab.partner, kProvider, kAuthService);
    lab.kernel.register_callback(conn, [&lab](const std::string& msg) {
      lab.partnerCallbacks.push_back(msg);
    });
    lab.kernel.transact(conn, Parcel{});
    evidence = "partner received " + std::to_string(lab.partnerCallbacks.size()) +
               " callback(s)";
    return lab.partnerCallbacks.size() == 1;
  }
  if (m == Mechanism::PendingIntentCreator) {
    auto token = lab.post_partner_notification(lab.partner);
    if (!authenticate_pi_creator(token, lab.allowlist).accepted) return false;
    lab.intents.send(token, lab.provider);
    evidence = "partner received " + std::to_string(lab.partnerDispatches.size()) +
               " dispatch(es) from the provider";
    return lab.partnerDispatches.size() == 1 &&
           lab.partnerDispatches.front().executedAsPackage == kPartner;
  }
  throw Error(Errc::InvalidArgument,
              "no bidirectional scenario for " + std::string(id_of(m)));
}

}  // namespace

std::vector<ScenarioOutcome> run_mechanism_scenarios(std::uint64_t seed) {
  std::vector<ScenarioOutcome> out;
  for (Mechanism m : kAllMechanisms) {
    for (Property p : kAllProperties) {
      if (cell_source(m, p) != CellSource::Scenario) continue;
      Lab lab(seed);
      std::string evidence;
      bool satisfied = false;
      switch (p) {
        case Property::KernelBacked: satisfied = kernel_backed(lab, m, evidence); break;
        case Property::Unforgeable: satisfied = unforgeable(lab, m, evidence); break;
        case Property::ReplayResistant: satisfied = replay_resistant(lab, m, evidence); break;
        case Property::ScalableNoManifest: satisfied = scalable(lab, m, evidence); break;
        case Property::Bidirectional: satisfied = bidirectional(lab, m, evidence); break;
      }
      out.push_back({m, p, satisfied,
                     std::string(id_of(m)) + "/" + std::string(id_of(p)), evidence});
    }
  }
  return out;
}

}  // namespace ipcauth
