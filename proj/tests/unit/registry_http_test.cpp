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

#include <filesystem>

#include "ipcauth/error.hpp"
#include "ipcauth/registry_http.hpp"

namespace ipcauth {
namespace {

constexpr char kCred[] = "http-secret";

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

CertHash hash(std::string_view label) { return SigningKey::derive(label).cert_hash(); }

class RegistryHttpTest : public ::testing::Test {
 protected:
  void SetUp() override {
    db_ = std::filesystem::temp_directory_path() /
          ("ipcauth_http_" + std::string(
                                 ::testing::UnitTest::GetInstance()->current_test_info()->name()) +
           ".json");
    std::filesystem::remove(db_);
    server_ = std::make_unique<RegistryHttpServer>(registry_, db_.string());
    port_ = server_->start("127.0.0.1", 0);
    client_ = std::make_unique<HttpRegistryClient>("127.0.0.1", port_);
  }
  void TearDown() override {
    server_->stop();
    std::filesystem::remove(db_);
  }

  SimClock clock_;
  PartnerRegistry registry_{kCred, clock_.source()};
  std::filesystem::path db_;
  std::unique_ptr<RegistryHttpServer> server_;
  std::unique_ptr<HttpRegistryClient> client_;
  int port_ = 0;
};

TEST_F(RegistryHttpTest, FullLifecycleOverTheWire) {
  ASSERT_GT(port_, 0);
  const auto rec = client_->register_partner({"com.partner", hash("k1"), "c"}, kCred);
  EXPECT_EQ(rec.packageName, "com.partner");
  EXPECT_EQ(rec.certHash, hash("k1"));
  EXPECT_TRUE(client_->validate({"com.partner", hash("k1"), "c"}, kCred, true).accepted());
  EXPECT_EQ(client_->validate({"com.partner", hash("k9"), "c"}, kCred, true).reason,
            VerdictReason::CertMismatch);
  EXPECT_TRUE(client_->validate({"com.partner", hash("k9"), "c"}, kCred, false).accepted());
  EXPECT_EQ(client_->expected_cert("com.partner", "c", kCred), hash("k1"));
  EXPECT_FALSE(client_->expected_cert("com.nobody", "c", kCred));

  client_->rotate_certificate("com.partner", "c", hash("k2"), kCred);
  EXPECT_TRUE(client_->validate({"com.partner", hash("k2"), "c"}, kCred, true).accepted());
  client_->revoke_partner("com.partner", "c", kCred);
  EXPECT_EQ(client_->validate({"com.partner", hash("k2"), "c"}, kCred, true).reason,
            VerdictReason::Revoked);

  const auto audit = client_->list_audit(kCred);
  EXPECT_EQ(audit, registry_.list_audit());
  EXPECT_EQ(audit.size(), 5u);
  EXPECT_EQ(client_->list_audit(kCred, {std::nullopt, Verdict::Accept}).size(), 3u);
  EXPECT_EQ(client_->list_audit(kCred, {"com.nobody", std::nullopt}).size(), 0u);

  // The database on disk tracks every change.
  EXPECT_EQ(load_registry_state(db_.string()), registry_.snapshot());
}

TEST_F(RegistryHttpTest, StatusCodesMapToErrors) {
  client_->register_partner({"com.partner", hash("k1"), "c"}, kCred);
  EXPECT_EQ(code_of([&] { client_->register_partner({"com.partner", hash("k1"), "c"}, kCred); }),
            Errc::DuplicateActive);
  EXPECT_EQ(code_of([&] { client_->revoke_partner("com.none", "c", kCred); }), Errc::NotFound);
  EXPECT_EQ(code_of([&] { client_->rotate_certificate("com.none", "c", hash("x"), kCred); }),
            Errc::NotFound);
  EXPECT_EQ(code_of([&] { client_->list_audit("wrong"); }), Errc::BadProviderCredential);
  EXPECT_EQ(code_of([&] { client_->register_partner({"com.x", hash("x"), "c"}, "wrong"); }),
            Errc::BadProviderCredential);
  EXPECT_EQ(code_of([&] { client_->expected_cert("com.partner", "c", "wrong"); }),
            Errc::BadProviderCredential);
}

TEST_F(RegistryHttpTest, DirectCallWithoutCredentialIsRefusedAndAudited) {
  client_->register_partner({"com.partner", hash("k1"), "c"}, kCred);
  EXPECT_EQ(code_of([&] { client_->validate({"com.partner", hash("k1"), "c"}, "", true); }),
            Errc::BadProviderCredential);
  const auto audit = registry_.list_audit();
  ASSERT_EQ(audit.size(), 1u);
  EXPECT_EQ(audit[0].reason, VerdictReason::BadProviderCredential);
}

TEST_F(RegistryHttpTest, UnreachableServerIsATransportError) {
  server_->stop();
  EXPECT_EQ(code_of([&] { client_->validate({"com.partner", hash("k1"), "c"}, kCred, true); }),
            Errc::TransportError);
  EXPECT_EQ(code_of([&] { client_->expected_cert("com.partner", "c", kCred); }),
            Errc::TransportError);
}

}  // namespace
}  // namespace ipcauth
