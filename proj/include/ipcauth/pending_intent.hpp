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

#ifndef IPCAUTH_PENDING_INTENT_HPP_
#define IPCAUTH_PENDING_INTENT_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ipcauth/binder.hpp"

namespace ipcauth {

using Extras = std::map<std::string, std::string>;

enum class Mutability { Immutable, Mutable };

std::string_view to_string(Mutability m) noexcept;

struct WrappedIntent {
  std::string action;
  Extras extras;
  std::string targetPackage;
};

/// A transferable credential. Carries who created it; says nothing about who
/// holds it. The wrapped intent stays with the PendingIntentManager that
/// minted the token and has no accessor here.
class PendingIntentToken {
 public:
  std::uint64_t token_id() const noexcept { return token_id_; }
  Uid creator_uid() const noexcept { return creator_uid_; }
  const std::string& creator_package() const noexcept { return creator_package_; }
  Mutability mutability() const noexcept { return mutability_; }

  friend bool operator==(const PendingIntentToken&,
                         const PendingIntentToken&) = default;

 private:
  friend class PendingIntentManager;
  PendingIntentToken(std::uint64_t id, Uid creatorUid, std::string creatorPackage,
                     Mutability mutability)
      : token_id_(id),
        creator_uid_(creatorUid),
        creator_package_(std::move(creatorPackage)),
        mutability_(mutability) {}

  std::uint64_t token_id_;
  Uid creator_uid_;
  std::string creator_package_;
  Mutability mutability_;
};

// Any holder may ask; the answer never depends on who is asking.
inline const std::string& get_creator_package(const PendingIntentToken& token) {
  return token.creator_package();
}
inline Uid get_creator_uid(const PendingIntentToken& token) {
  return token.creator_uid();
}

/// What the system did when a token was sent.
struct DispatchRecord {
  Uid executedAsUid = 0;
  std::string executedAsPackage;
  std::string effectiveAction;
  Extras effectiveExtras;
  std::string targetPackage;
  /// Harness-only; never reachable from an authenticator.
  Uid presenterUid = 0;
};

using IntentReceiver = std::function<void(const DispatchRecord&)>;

/// System-side owner of every PendingIntent on the device.
class PendingIntentManager {
 public:
  explicit PendingIntentManager(const Kernel& kernel);

  /// Throws Errc::HandleInvalid.
  PendingIntentToken create_pending_intent(const ProcessHandle& creator,
                                           WrappedIntent intent,
                                           Mutability mutability);

  /// Executes the wrapped intent with the creator's identity. Any valid
  /// process may present. A fill-in on an immutable token is dropped and a
  /// warning is recorded.
  DispatchRecord send(const PendingIntentToken& token,
                      const ProcessHandle& presenter,
                      const std::optional<Extras>& fillIn = std::nullopt);

  /// Delivers dispatches whose target is `packageName`.
  void set_receiver(std::string packageName, IntentReceiver receiver);

  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  std::size_t size() const noexcept { return sealed_.size(); }

 private:
  struct Sealed {
    Uid creatorUid;
    std::string creatorPackage;
    Mutability mutability;
    WrappedIntent intent;
  };

  const Kernel& kernel_;
  std::map<std::uint64_t, Sealed> sealed_;
  std::map<std::string, IntentReceiver, std::less<>> receivers_;
  std::vector<std::string> warnings_;
  std::uint64_t next_id_ = 1;
};

}  // namespace ipcauth

#endif  // IPCAUTH_PENDING_INTENT_HPP_
