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
#include "ipcauth/pending_intent.hpp"
#include "oracles.hpp"

namespace ipcauth {
namespace {

// Tokens are opaque: no public constructor, no way to read the wrapped intent.
template <class T>
concept ExposesIntent = requires(const T& t) { t.intent(); };
template <class T>
concept ExposesExtras = requires(const T& t) { t.extras(); };
template <class T>
concept ExposesPresenter = requires(const T& t) { t.presenter_uid(); };
static_assert(!ExposesIntent<PendingIntentToken>);
static_assert(!ExposesExtras<PendingIntentToken>);
static_assert(!ExposesPresenter<PendingIntentToken>);
static_assert(!std::is_default_constructible_v<PendingIntentToken>);
static_assert(!std::is_constructible_v<PendingIntentToken, std::uint64_t, Uid, std::string,
                                       Mutability>);

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

class PendingIntentTest : public ::testing::Test {
 protected:
  PendingIntentTest() {
    for (const char* name : {"creator", "p1", "p2", "p3", "p4"}) {
      device_.install_app({name, SigningKey::derive(name), {}, InstallSource::Store});
    }
  }

  PendingIntentToken make(Mutability m) {
    return intents_.create_pending_intent(kernel_.mint_handle("creator"),
                                          {"ACT", {{"a", "1"}}, "creator"}, m);
  }

  Device device_;
  Kernel kernel_{device_};
  PendingIntentManager intents_{kernel_};
};

TEST_F(PendingIntentTest, CreatorFieldsComeFromTheKernel) {
  const auto token = make(Mutability::Immutable);
  EXPECT_EQ(get_creator_package(token), "creator");
  EXPECT_EQ(get_creator_uid(token), device_.app("creator").uid);
  EXPECT_EQ(token.mutability(), Mutability::Immutable);
  EXPECT_EQ(intents_.size(), 1u);
}

TEST_F(PendingIntentTest, EveryPresenterExecutesAsTheCreator) {
  const auto token = make(Mutability::Immutable);
  const Allowlist allow{"creator"};
  for (const char* presenter : {"creator", "p1", "p2", "p3", "p4"}) {
    const DispatchRecord r = intents_.send(token, kernel_.mint_handle(presenter));
    EXPECT_EQ(r.executedAsPackage, "creator") << presenter;
    EXPECT_EQ(r.executedAsUid, device_.app("creator").uid);
    EXPECT_EQ(r.presenterUid, device_.app(presenter).uid);
    // The vulnerable check cannot tell presenters apart.
    const AuthDecision d = authenticate_pi_creator(token, allow);
    EXPECT_TRUE(d.accepted);
    EXPECT_EQ(d.authenticatedAs, "creator");
  }
}

TEST_F(PendingIntentTest, FillInOnlyAppliesToMutableTokens) {
  const Extras fill{{"a", "9"}, {"b", "2"}};
  const auto imm = make(Mutability::Immutable);
  const auto r1 = intents_.send(imm, kernel_.mint_handle("p1"), fill);
  EXPECT_EQ(r1.effectiveExtras, (Extras{{"a", "1"}}));
  EXPECT_EQ(intents_.warnings().size(), 1u);

  const auto mut = make(Mutability::Mutable);
  const auto r2 = intents_.send(mut, kernel_.mint_handle("p1"), fill);
  EXPECT_EQ(r2.effectiveExtras, (Extras{{"a", "9"}, {"b", "2"}}));
  // Either way the identity is the creator's.
  EXPECT_EQ(r1.executedAsPackage, r2.executedAsPackage);
}

TEST_F(PendingIntentTest, ReceiverSeesDispatch) {
  std::vector<DispatchRecord> got;
  intents_.set_receiver("creator", [&](const DispatchRecord& r) { got.push_back(r); });
  intents_.send(make(Mutability::Immutable), kernel_.mint_handle("p2"));
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got[0].effectiveAction, "ACT");
}

TEST_F(PendingIntentTest, ForeignOrStaleUse) {
  Device other;
  other.install_app({"creator", SigningKey::derive("x"), {}, InstallSource::Store});
  Kernel otherKernel(other);
  PendingIntentManager otherIntents(otherKernel);
  const auto foreign = otherIntents.create_pending_intent(otherKernel.mint_handle("creator"),
                                                          {"X", {}, "creator"},
                                                          Mutability::Immutable);
  EXPECT_EQ(code_of([&] { intents_.send(foreign, kernel_.mint_handle("p1")); }),
            Errc::InvalidArgument);

  const auto token = make(Mutability::Immutable);
  const auto p1 = kernel_.mint_handle("p1");
  device_.uninstall_app("p1");
  EXPECT_EQ(code_of([&] { intents_.send(token, p1); }), Errc::HandleInvalid);
}

TEST(PendingIntentHandoff, ChainsPreserveCreator) {
  for (std::size_t length : {5u, 6u, 9u}) {
    const auto r = testing::run_handoff_chain(length);
    EXPECT_EQ(r.hops, length);
    EXPECT_EQ(r.creatorMismatches, 0u);
    EXPECT_EQ(r.presenterMismatches, 0u);
    EXPECT_TRUE(r.dispatchAsCreator);
  }
}

}  // namespace
}  // namespace ipcauth
