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

#include "ipcauth/auth_mechanisms.hpp"
#include "ipcauth/error.hpp"

namespace ipcauth {
namespace {

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

constexpr char kPerm[] = "host.permission.PUBLISH";

class MechanismTest : public ::testing::Test {
 protected:
  MechanismTest() {
    Manifest host;
    host.definedPermissions = {kPerm};
    host.knownSignerHashes = {SigningKey::derive("partner").cert_hash()};
    host_ = host;
    Manifest partner;
    partner.usedPermissions = {kPerm};
    device_.install_app({"host", SigningKey::derive("host"), host, InstallSource::Store});
    device_.install_app({"partner", SigningKey::derive("partner"), partner, InstallSource::Store});
    device_.install_app({"attacker", SigningKey::derive("attacker"), {}, InstallSource::Store});
    device_.install_app({"other", SigningKey::derive("other"), {}, InstallSource::Store});
  }

  ProcessHandle h(std::string_view pkg) { return kernel_.mint_handle(pkg); }

  Device device_;
  Kernel kernel_{device_};
  Manifest host_;
  Allowlist allow_{"partner"};
};

TEST_F(MechanismTest, PiCreatorRejectsUnlistedCreator) {
  PendingIntentManager intents(kernel_);
  const auto t = intents.create_pending_intent(h("other"), {"A", {}, "other"},
                                               Mutability::Immutable);
  const auto d = authenticate_pi_creator(t, allow_);
  EXPECT_FALSE(d.accepted);
  EXPECT_EQ(d.reason, DecisionReason::NotAllowlisted);
  EXPECT_EQ(d.observedIdentity, "other");
}

// Whatever token rides in the payload, the bound-service check names the
// process that made the call.
TEST_F(MechanismTest, BoundUidIgnoresCarriedTokens) {
  PendingIntentManager intents(kernel_);
  std::vector<PendingIntentToken> tokens;
  for (const char* creator : {"partner", "attacker", "other"}) {
    tokens.push_back(intents.create_pending_intent(h(creator), {"A", {}, creator},
                                                   Mutability::Immutable));
  }
  kernel_.register_service(h("host"), "auth", true, [&](const Transaction& txn) {
    return Parcel(authenticate_bound_uid(kernel_, txn, allow_));
  });
  for (const char* caller : {"partner", "attacker", "other"}) {
    for (const auto& token : tokens) {
      Connection c = kernel_.bind_service(h(caller), "host", "auth");
      const auto d = std::any_cast<AuthDecision>(kernel_.transact(c, token));
      EXPECT_EQ(d.observedIdentity, caller);
      EXPECT_EQ(d.accepted, std::string(caller) == "partner");
    }
  }
}

TEST_F(MechanismTest, BoundUidOutsideDispatchThrows) {
  std::optional<Transaction> kept;
  kernel_.register_service(h("host"), "keep", true, [&](const Transaction& txn) {
    kept = txn;
    return Parcel{};
  });
  kernel_.transact(kernel_.bind_service(h("partner"), "host", "keep"), {});
  EXPECT_EQ(code_of([&] { authenticate_bound_uid(kernel_, *kept, allow_); }),
            Errc::NotInHandlerScope);
}

TEST_F(MechanismTest, ReferrerIsSpoofableAndNeedsActivity) {
  ActivityTaskManager atm(kernel_);
  const auto honest = atm.start_activity_for_result(h("partner"));
  EXPECT_TRUE(authenticate_referrer(atm, honest, allow_).accepted);

  const auto spoofed = atm.spoof_via_task_hijack(h("attacker"), "partner");
  const auto d = authenticate_referrer(atm, spoofed, allow_);
  EXPECT_TRUE(d.accepted);
  EXPECT_EQ(d.authenticatedAs, "partner");

  atm.finish(honest);
  EXPECT_EQ(authenticate_referrer(atm, honest, allow_).reason, DecisionReason::StaleEvidence);

  const auto bg = atm.call_from_background(h("partner"));
  EXPECT_EQ(code_of([&] { authenticate_referrer(atm, bg, allow_); }), Errc::NoActivityContext);
}

TEST_F(MechanismTest, PermissionsGateWithoutNamingTheCaller) {
  const auto ok = authenticate_custom_permission(kernel_, h("partner"), kPerm,
                                                 PermissionKind::Broadcast);
  EXPECT_TRUE(ok.accepted);
  EXPECT_EQ(ok.authenticatedAs, std::string("broadcast-holder:") + kPerm);
  EXPECT_FALSE(ok.observedIdentity);
  const auto provider = authenticate_custom_permission(kernel_, h("partner"), kPerm,
                                                       PermissionKind::Provider);
  EXPECT_EQ(provider.authenticatedAs, std::string("provider-holder:") + kPerm);
  EXPECT_EQ(authenticate_custom_permission(kernel_, h("attacker"), kPerm,
                                           PermissionKind::Broadcast)
                .reason,
            DecisionReason::MissingPermission);
}

TEST_F(MechanismTest, KnownSignersMatchCertificate) {
  EXPECT_TRUE(authenticate_known_signers(kernel_, h("partner"), host_).accepted);
  EXPECT_EQ(authenticate_known_signers(kernel_, h("attacker"), host_).reason,
            DecisionReason::UnknownSigner);
}

TEST(Pkce, ChallengeIsSha256OfVerifier) {
  // hashlib.sha256(b"my-verifier").hexdigest()
  EXPECT_EQ(pkce_challenge("my-verifier"),
            "ec42a207808a02a36d00cd75b192e9819f700e402d5073331997df533df816d6");
}

// Every (flow, code, verifier) combination across three concurrent flows:
// only a flow's own code with its own verifier completes it, once.
TEST_F(MechanismTest, PkceContinuityExhaustive) {
  const std::vector<std::string> initiators = {"partner", "attacker", "other"};
  const std::vector<std::string> verifiers = {"v-partner", "v-attacker", "v-other"};
  const std::vector<std::string> claims = {"client-partner", "client-partner", "client-other"};

  for (std::size_t f = 0; f < 3; ++f) {
    for (std::size_t c = 0; c < 3; ++c) {
      for (std::size_t v = 0; v < 3; ++v) {
        PkceAuthorizationServer server(kernel_, 11);
        std::vector<PkceTicket> tickets;
        for (std::size_t i = 0; i < 3; ++i) {
          tickets.push_back(
              server.pkce_initiate(h(initiators[i]), pkce_challenge(verifiers[i]), claims[i]));
        }
        const bool expected = f == c && c == v;
        try {
          const auto d = server.pkce_exchange(tickets[f].flowId, tickets[c].code, verifiers[v]);
          EXPECT_TRUE(expected) << f << c << v;
          EXPECT_EQ(d.authenticatedAs, claims[f]);
          EXPECT_TRUE(server.flow(tickets[f].flowId).completed);
          EXPECT_EQ(code_of([&] {
                      server.pkce_exchange(tickets[f].flowId, tickets[c].code, verifiers[v]);
                    }),
                    Errc::CodeMismatch);
        } catch (const Error& e) {
          EXPECT_FALSE(expected) << f << c << v;
          EXPECT_EQ(e.code(), Errc::CodeMismatch);
        }
      }
    }
  }
}

TEST_F(MechanismTest, PkceTakesTheClaimOnFaith) {
  PkceAuthorizationServer server(kernel_, 3);
  const auto t = server.pkce_initiate(h("attacker"), pkce_challenge("mine"), "client-partner");
  const auto d = server.pkce_exchange(t.flowId, t.code, "mine");
  EXPECT_TRUE(d.accepted);
  EXPECT_EQ(d.authenticatedAs, "client-partner");
  EXPECT_EQ(server.flow(t.flowId).initiatorUid, device_.app("attacker").uid);
  EXPECT_EQ(code_of([&] { server.pkce_exchange(999, "x", "y"); }), Errc::UnknownFlow);
  EXPECT_EQ(code_of([&] { server.flow(999); }), Errc::UnknownFlow);
}

TEST_F(MechanismTest, ReplayOutcomesPerEvidenceKind) {
  ActivityTaskManager atm(kernel_);
  PkceAuthorizationServer pkce(kernel_, 5);
  PendingIntentManager intents(kernel_);
  ReplayContext ctx{kernel_, atm, pkce, allow_, host_, h("attacker")};

  const auto token = intents.create_pending_intent(h("partner"), {"A", {}, "partner"},
                                                   Mutability::Immutable);
  EXPECT_TRUE(capture_and_replay(ctx, CapturedToken{token}).accepted);

  std::optional<Transaction> kept;
  kernel_.register_service(h("host"), "keep", true, [&](const Transaction& txn) {
    kept = txn;
    return Parcel{};
  });
  kernel_.transact(kernel_.bind_service(h("partner"), "host", "keep"), {});
  EXPECT_EQ(capture_and_replay(ctx, CapturedTransaction{*kept}).reason,
            DecisionReason::StaleEvidence);

  auto launch = atm.start_activity(h("partner"));
  atm.finish(launch);
  EXPECT_EQ(capture_and_replay(ctx, CapturedReferrer{launch}).reason,
            DecisionReason::StaleEvidence);

  EXPECT_FALSE(capture_and_replay(ctx, CapturedPermissionGrant{kPerm}).accepted);
  EXPECT_FALSE(
      capture_and_replay(ctx, CapturedSignerProof{SigningKey::derive("partner").cert_hash()})
          .accepted);

  const auto t = pkce.pkce_initiate(h("partner"), pkce_challenge("secret"), "client-partner");
  EXPECT_EQ(capture_and_replay(ctx, CapturedPkceCode{t.flowId, t.code}).reason,
            DecisionReason::CodeMismatch);
  EXPECT_EQ(capture_and_replay(ctx, CapturedPkceCode{404, "x"}).reason,
            DecisionReason::UnknownFlow);
}

}  // namespace
}  // namespace ipcauth
