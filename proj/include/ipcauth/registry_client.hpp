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
#ifndef IPCAUTH_REGISTRY_CLIENT_HPP_
#define IPCAUTH_REGISTRY_CLIENT_HPP_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ipcauth/registry.hpp"

namespace ipcauth {

/// What the provider's service needs from the registry. Implementations throw
/// Errc::TransportError when the registry cannot be reached and
/// Errc::BadProviderCredential when it refuses the caller.
class RegistryClient {
 public:
  virtual ~RegistryClient() = default;

  virtual ValidationResult validate(const PartnerTriple& triple,
                                    std::string_view providerCredential,
                                    bool includeCert) = 0;
  virtual std::optional<CertHash> expected_cert(std::string_view packageName,
                                                std::string_view clientId,
                                                std::string_view providerCredential) = 0;
};

class InProcessRegistryClient final : public RegistryClient {
 public:
  explicit InProcessRegistryClient(PartnerRegistry& registry) : registry_(registry) {}

  /// false simulates an outage: every call throws Errc::TransportError.
  void set_reachable(bool reachable) noexcept { reachable_ = reachable; }

  ValidationResult validate(const PartnerTriple& triple,
                            std::string_view providerCredential,
                            bool includeCert) override;
  std::optional<CertHash> expected_cert(std::string_view packageName,
                                        std::string_view clientId,
                                        std::string_view providerCredential) override;

 private:
  void check_reachable() const;

  PartnerRegistry& registry_;
  bool reachable_ = true;
};

}  // namespace ipcauth

#endif  // IPCAUTH_REGISTRY_CLIENT_HPP_
