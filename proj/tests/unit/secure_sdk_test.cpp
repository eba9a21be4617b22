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

#include <memory>

#include "ipcauth/error.hpp"
#include "ipcauth/registry_client.hpp"
#include "ipcauth/secure_sdk.hpp"
#include "oracles.hpp"

namespace ipcauth {
namespace {

constexpr char kCred[] = "sdk-secret";
constexpr char kProvider[] = "com.provider";
constexpr char kPartner[] = "com.partner";
constexpr char kAttacker[] = "com.attacker";
constexpr char kClient[] = "client-1";

CertHash hash(std::string_view label) { return SigningKey::derive(label).cert_hash(); }

class SdkTest : public ::testing::Test {
 protected:
  SdkTest() {
    install(kProvider, "provider-key");
    partner_ = std::make_unique<ProcessHandle>(install(kPartner, "partner-key"));
    attacker_ = std::make_unique<ProcessHandle>(install(kAttacker, "attacker-key"));
  }

  ProcessHandle install(const std::string& name, const std::string& key,
                        InstallSource source = InstallSource::Store) {
    device_.install_app({name, SigningKey::derive(key), {}, source});
    return kernel_.mint_handle(name);
  }

  ProviderConfig config(ProviderMode mode) {
    ProviderConfig c;
    c.mode = mode;
    c.piAllowlist = {kPartner};
    c.hardcodedHashes = {hash("partner-key")};
    c.providerCredential = kCred;
    c.registry = client_;
    return c;
  }

  PublishService& serve(ProviderConfig c) {
    if (service_) {
      service_->reconfigure(std::move(c));
    } else {
      service_ = std::make_unique<PublishService>(kernel_, kernel_.mint_handle(kProvider),
                                                  std::move(c));
    }
    return *service_;
  }

  PublishOutcome call(const ProcessHandle& who,
                      std::optional<PendingIntentToken> cred = std::nullopt,
                      std::string client = kClient) {
    return publish(kernel_, who, kProvider, {"hello", std::move(cred), std::move(client)});
  }

  PendingIntentToken partner_token() {
    return intents_.create_pending_intent(*partner_, {"OPEN", {}, kPartner},
                                          Mutability::Immutable);
  }

  SimClock clock_;
  Device device_;
  Kernel kernel_{device_};
  PendingIntentManager intents_{kernel_};
  PartnerRegistry registry_{kCred, clock_.source()};
  std::shared_ptr<InProcessRegistryClient> client_ =
      std::make_shared<InProcessRegistryClient>(registry_);
  std::unique_ptr<ProcessHandle> partner_;
  std::unique_ptr<ProcessHandle> attacker_;
  std::unique_ptr<PublishService> service_;
};

TEST_F(SdkTest, VulnerableCreditsTheTokenCreator) {
  auto& svc = serve(config(ProviderMode::VulnerablePi));
  const auto stolen = partner_token();
  const auto out = call(*attacker_, stolen);
  EXPECT_TRUE(out.accepted);
  EXPECT_EQ(out.attributedPartner, (Attribution{kPartner, kClient}));
  EXPECT_FALSE(out.resolvedCaller);
  EXPECT_FALSE(out.layerRejected);
  ASSERT_EQ(svc.published().size(), 1u);
  EXPECT_EQ(svc.published()[0].first.packageName, kPartner);

  const auto own = intents_.create_pending_intent(*attacker_, {"X", {}, kAttacker},
                                                  Mutability::Immutable);
  EXPECT_FALSE(call(*attacker_, own).accepted);
  EXPECT_FALSE(call(*attacker_).accepted);
}

TEST_F(SdkTest, SecureIgnoresPresentedTokens) {
  registry_.register_partner(kPartner, hash("partner-key"), kClient);
  auto& svc = serve(config(ProviderMode::Secure3Layer));
  const auto attack = call(*attacker_, partner_token());
  EXPECT_FALSE(attack.accepted);
  EXPECT_EQ(attack.resolvedCaller, kAttacker);
  EXPECT_EQ(attack.layerRejected, Layer::L3);
  EXPECT_FALSE(attack.attributedPartner);

  const auto genuine = call(*partner_);
  EXPECT_TRUE(genuine.accepted);
  EXPECT_EQ(genuine.attributedPartner, (Attribution{kPartner, kClient}));
  EXPECT_EQ(genuine.resolvedCaller, kPartner);
  EXPECT_EQ(svc.published().size(), 1u);
  EXPECT_EQ(svc.verification_times().size(), 2u);
}

TEST_F(SdkTest, SideloadedCloneStopsAtCertificateLayer) {
  registry_.register_partner(kPartner, hash("partner-key"), kClient);
  device_.uninstall_app(kPartner);
  const auto clone = install(kPartner, "clone-key", InstallSource::Sideload);
  serve(config(ProviderMode::Secure3Layer));
  const auto out = call(clone);
  EXPECT_FALSE(out.accepted);
  EXPECT_EQ(out.layerRejected, Layer::L2);

  auto c = config(ProviderMode::Secure3Layer);
  c.layers.certificate = false;
  serve(c);
  // L3 is handed the registered hash, so nothing else catches the clone.
  EXPECT_TRUE(call(clone).accepted);
}

TEST_F(SdkTest, AltBAcceptsCloneAltARejects) {
  registry_.register_partner(kPartner, hash("partner-key"), kClient);
  device_.uninstall_app(kPartner);
  const auto clone = install(kPartner, "clone-key", InstallSource::Sideload);
  serve(config(ProviderMode::AltBNoCert));
  EXPECT_TRUE(call(clone).accepted);
  serve(config(ProviderMode::AltAHardcoded));
  EXPECT_EQ(call(clone).layerRejected, Layer::L2);
}

TEST_F(SdkTest, AltAIgnoresTheRegistry) {
  serve(config(ProviderMode::AltAHardcoded));
  EXPECT_TRUE(call(*partner_).accepted);
  EXPECT_TRUE(registry_.list_audit().empty());
}

TEST_F(SdkTest, ServerLayerToggleLetsRevokedPartnerThrough) {
  registry_.register_partner(kPartner, hash("partner-key"), kClient);
  registry_.revoke_partner(kPartner, kClient);
  auto c = config(ProviderMode::Secure3Layer);
  serve(c);
  EXPECT_EQ(call(*partner_).layerRejected, Layer::L3);
  c.layers.server = false;
  serve(c);
  EXPECT_TRUE(call(*partner_).accepted);
}

TEST_F(SdkTest, RegistryOutageFailsClosed) {
  registry_.register_partner(kPartner, hash("partner-key"), kClient);
  serve(config(ProviderMode::Secure3Layer));
  client_->set_reachable(false);
  const auto out = call(*partner_);
  EXPECT_FALSE(out.accepted);
  EXPECT_EQ(out.layerRejected, Layer::L3);
  client_->set_reachable(true);
  EXPECT_TRUE(call(*partner_).accepted);
}

TEST_F(SdkTest, WrongProviderCredentialFailsClosed) {
  registry_.register_partner(kPartner, hash("partner-key"), kClient);
  auto c = config(ProviderMode::Secure3Layer);
  c.providerCredential = "stale";
  serve(c);
  EXPECT_EQ(call(*partner_).layerRejected, Layer::L3);

  const PartnerTriple t{kPartner, hash("partner-key"), kClient};
  try {
    provider_call_registry(config(ProviderMode::Secure3Layer), t, "wrong");
    ADD_FAILURE() << "expected BadProviderCredential";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BadProviderCredential);
  }
  EXPECT_TRUE(provider_call_registry(config(ProviderMode::Secure3Layer), t, kCred).accepted());
  auto none = config(ProviderMode::Secure3Layer);
  none.registry = nullptr;
  EXPECT_THROW(provider_call_registry(none, t, kCred), Error);
}

TEST_F(SdkTest, ReconfigureCountsRedeploys) {
  auto& svc = serve(config(ProviderMode::AltAHardcoded));
  EXPECT_EQ(svc.redeploys(), 0u);
  svc.reconfigure(config(ProviderMode::Secure3Layer));
  EXPECT_EQ(svc.redeploys(), 1u);
  EXPECT_EQ(svc.config().mode, ProviderMode::Secure3Layer);
}

TEST(SdkNames, ModeAndLayerStrings) {
  EXPECT_EQ(to_string(ProviderMode::VulnerablePi), "VULNERABLE_PI");
  EXPECT_EQ(to_string(ProviderMode::Secure3Layer), "SECURE_3LAYER");
  EXPECT_EQ(to_string(Layer::L2), "L2");
}

// Every reachable world of four packages, three install states and four
// registration histories, checked against an independent verdict oracle.
TEST(SdkSoundness, EnumerationAgreesWithOracle) {
  const auto r = testing::run_soundness_enumeration();
  EXPECT_EQ(r.worlds, 20736u);
  EXPECT_GT(r.calls, r.worlds);
  EXPECT_GT(r.accepts, 0u);
  EXPECT_EQ(r.disagreements, 0u) << (r.firstDisagreements.empty() ? "" : r.firstDisagreements[0]);
  EXPECT_EQ(r.attributionViolations, 0u);
}

}  // namespace
}  // namespace ipcauth
