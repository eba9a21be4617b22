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
#include "ipcauth/pending_intent.hpp"

#include "ipcauth/error.hpp"

namespace ipcauth {

std::string_view to_string(Mutability m) noexcept {
  return m == Mutability::Immutable ? "FLAG_IMMUTABLE" : "FLAG_MUTABLE";
}

PendingIntentManager::PendingIntentManager(const Kernel& kernel) : kernel_(kernel) {}

PendingIntentToken PendingIntentManager::create_pending_intent(
    const ProcessHandle& creator, WrappedIntent intent, Mutability mutability) {
  std::string creatorPackage = kernel_.package_of(creator);
  const std::uint64_t id = next_id_++;
  sealed_.emplace(id, Sealed{creator.uid(), creatorPackage, mutability,
                             std::move(intent)});
  return PendingIntentToken(id, creator.uid(), std::move(creatorPackage),
                            mutability);
}

DispatchRecord PendingIntentManager::send(const PendingIntentToken& token,
                                          const ProcessHandle& presenter,
                                          const std::optional<Extras>& fillIn) {
  kernel_.require_valid(presenter);
  auto it = sealed_.find(token.token_id());
  if (it == sealed_.end() || it->second.creatorUid != token.creator_uid()) {
    throw Error(Errc::InvalidArgument,
                "token " + std::to_string(token.token_id()) + " was not minted here");
  }
  const Sealed& sealed = it->second;

  DispatchRecord record{sealed.creatorUid,     sealed.creatorPackage,
                        sealed.intent.action,  sealed.intent.extras,
                        sealed.intent.targetPackage, presenter.uid()};
  if (fillIn) {
    if (sealed.mutability == Mutability::Mutable) {
      for (const auto& [k, v] : *fillIn) record.effectiveExtras[k] = v;
    } else {
      warnings_.push_back("fill-in ignored for immutable token " +
                          std::to_string(token.token_id()));
    }
  }
  if (auto r = receivers_.find(record.targetPackage); r != receivers_.end()) {
    r->second(record);
  }
  return record;
}

void PendingIntentManager::set_receiver(std::string packageName,
                                        IntentReceiver receiver) {
  receivers_[std::move(packageName)] = std::move(receiver);
}

}  // namespace ipcauth
