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

#ifndef IPCAUTH_REGISTRY_HTTP_HPP_
#define IPCAUTH_REGISTRY_HTTP_HPP_

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ipcauth/registry_client.hpp"

namespace httplib {
class Server;
class Client;
}  // namespace httplib

namespace ipcauth {

/// JSON-over-HTTP front end for a PartnerRegistry.
///
///   POST /v1/validate         {packageName, certHash, clientId, includeCert}
///   POST /v1/partners         {packageName, certHash, clientId}
///   POST /v1/partners/rotate  {packageName, clientId, newCertHash}
///   POST /v1/partners/revoke  {packageName, clientId}
///   POST /v1/partners/lookup  {packageName, clientId}
///   GET  /v1/audit[?packageName=..&verdict=ACCEPT|REJECT]
///
/// Every endpoint requires "Authorization: Bearer <provider credential>".
/// Status codes: 200/201 ok, 400 malformed body, 401 bad credential, 404
/// unknown partner, 409 duplicate active registration. When a database path
/// is given the registry is persisted after every request that changes it.
class RegistryHttpServer {
 public:
  explicit RegistryHttpServer(PartnerRegistry& registry,
                              std::optional<std::string> dbPath = std::nullopt);
  ~RegistryHttpServer();

  RegistryHttpServer(const RegistryHttpServer&) = delete;
  RegistryHttpServer& operator=(const RegistryHttpServer&) = delete;

  /// Port 0 picks a free port. Returns the bound port; throws
  /// Errc::TransportError on failure.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Requires bind().
  void listen();
  /// bind + listen on a background thread.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  void stop();

 private:
  void install_routes();
  void persist_locked();

  PartnerRegistry& registry_;
  std::optional<std::string> db_path_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  std::mutex persist_mutex_;
};

/// RegistryClient over HTTP, plus the administrative calls.
class HttpRegistryClient final : public RegistryClient {
 public:
  HttpRegistryClient(std::string host, int port);
  ~HttpRegistryClient() override;

  ValidationResult validate(const PartnerTriple& triple,
                            std::string_view providerCredential,
                            bool includeCert) override;
  std::optional<CertHash> expected_cert(std::string_view packageName,
                                        std::string_view clientId,
                                        std::string_view providerCredential) override;

  PartnerRecord register_partner(const PartnerTriple& triple,
                                 std::string_view providerCredential);
  PartnerRecord rotate_certificate(std::string_view packageName,
                                   std::string_view clientId,
                                   const CertHash& newCertHash,
                                   std::string_view providerCredential);
  void revoke_partner(std::string_view packageName, std::string_view clientId,
                      std::string_view providerCredential);
  std::vector<AuditEntry> list_audit(std::string_view providerCredential,
                                     const AuditFilter& filter = {});

 private:
  std::unique_ptr<httplib::Client> client_;
  std::mutex mutex_;
};

}  // namespace ipcauth

#endif  // IPCAUTH_REGISTRY_HTTP_HPP_
