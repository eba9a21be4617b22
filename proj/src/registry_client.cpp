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
#include "ipcauth/registry_client.hpp"

#include "ipcauth/error.hpp"

namespace ipcauth {

void InProcessRegistryClient::check_reachable() const {
  if (!reachable_) throw Error(Errc::TransportError, "registry unreachable");
}

ValidationResult InProcessRegistryClient::validate(const PartnerTriple& triple,
                                                   std::string_view providerCredential,
                                                   bool includeCert) {
  check_reachable();
  return registry_.validate(triple, providerCredential, includeCert);
}

std::optional<CertHash> InProcessRegistryClient::expected_cert(
    std::string_view packageName, std::string_view clientId,
    std::string_view providerCredential) {
  check_reachable();
  return registry_.expected_cert(packageName, clientId, providerCredential);
}

}  // namespace ipcauth
