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

#include "ipcauth/registry_http.hpp"

#include <httplib.h>
#include <json.hpp>

#include "ipcauth/error.hpp"

namespace ipcauth {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr std::string_view kBearer = "Bearer ";

std::string bearer_of(const httplib::Request& req) {
  const std::string header = req.get_header_value("Authorization");
  if (header.rfind(kBearer, 0) != 0) return {};
  return header.substr(kBearer.size());
}

void send_json(httplib::Response& res, int status, const ordered_json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view message) {
  ordered_json body;
  body["error"] = message;
  send_json(res, status, body);
}

ordered_json record_json(const PartnerRecord& r) {
  return to_json(RegistryState{{r}, {}})["partners"][0];
}

PartnerRecord record_from_json(const json& j) {
  json wrapped = {{"schemaVersion", kRegistrySchemaVersion},
                  {"partners", json::array({j})},
                  {"audit", json::array()}};
  return registry_state_from_json(wrapped).partners.front();
}

int status_of(Errc code) {
  switch (code) {
    case Errc::BadProviderCredential: return 401;
    case Errc::NotFound: return 404;
    case Errc::DuplicateActive: return 409;
    case Errc::InvalidArgument:
    case Errc::CorruptFile: return 400;
    default: return 500;
  }
}

// Wraps a route body: parses JSON, maps library errors onto status codes.
template <class Body>
httplib::Server::Handler guarded(Body body) {
  return [body](const httplib::Request& req, httplib::Response& res) {
    try {
      body(req, res);
    } catch (const Error& e) {
      send_error(res, status_of(e.code()), e.what());
    } catch (const json::exception& e) {
      send_error(res, 400, e.what());
    }
  };
}

json parse_body(const httplib::Request& req) {
  json j = json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(Errc::InvalidArgument, "request body is not a JSON object");
  }
  return j;
}

}  // namespace

RegistryHttpServer::RegistryHttpServer(PartnerRegistry& registry,
                                       std::optional<std::string> dbPath)
    : registry_(registry),
      db_path_(std::move(dbPath)),
      server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

RegistryHttpServer::~RegistryHttpServer() { stop(); }

void RegistryHttpServer::persist_locked() {
  if (!db_path_) return;
  std::lock_guard lock(persist_mutex_);
  registry_.persist(*db_path_);
}

void RegistryHttpServer::install_routes() {
  auto require_bearer = [this](const httplib::Request& req) {
    if (!registry_.credential_matches(bearer_of(req))) {
      throw Error(Errc::BadProviderCredential, "provider credential rejected");
    }
  };

  server_->Post("/v1/validate", guarded([this](const httplib::Request& req,
                                               httplib::Response& res) {
    const json body = parse_body(req);
    PartnerTriple triple{body.at("packageName").get<std::string>(),
                         CertHash::from_hex(body.at("certHash").get<std::string>()),
                         body.at("clientId").get<std::string>()};
    const bool includeCert = body.value("includeCert", true);
    // A bad bearer still reaches the registry so the attempt is audited.
    std::optional<ValidationResult> result;
    try {
      result = registry_.validate(triple, bearer_of(req), includeCert);
    } catch (const Error&) {
      persist_locked();
      throw;
    }
    persist_locked();
    ordered_json out;
    out["verdict"] = to_string(result->verdict);
    out["reason"] = to_string(result->reason);
    send_json(res, 200, out);
  }));

  server_->Post("/v1/partners", guarded([this, require_bearer](
                                            const httplib::Request& req,
                                            httplib::Response& res) {
    require_bearer(req);
    const json body = parse_body(req);
    PartnerRecord rec = registry_.register_partner(
        body.at("packageName").get<std::string>(),
        CertHash::from_hex(body.at("certHash").get<std::string>()),
        body.at("clientId").get<std::string>());
    persist_locked();
    send_json(res, 201, record_json(rec));
  }));

  server_->Post("/v1/partners/rotate", guarded([this, require_bearer](
                                                   const httplib::Request& req,
                                                   httplib::Response& res) {
    require_bearer(req);
    const json body = parse_body(req);
    PartnerRecord rec = registry_.rotate_certificate(
        body.at("packageName").get<std::string>(), body.at("clientId").get<std::string>(),
        CertHash::from_hex(body.at("newCertHash").get<std::string>()));
    persist_locked();
    send_json(res, 200, record_json(rec));
  }));

  server_->Post("/v1/partners/revoke", guarded([this, require_bearer](
                                                   const httplib::Request& req,
                                                   httplib::Response& res) {
    require_bearer(req);
    const json body = parse_body(req);
    registry_.revoke_partner(body.at("packageName").get<std::string>(),
                             body.at("clientId").get<std::string>());
    persist_locked();
    ordered_json out;
    out["status"] = to_string(PartnerStatus::Revoked);
    send_json(res, 200, out);
  }));

  server_->Post("/v1/partners/lookup", guarded([this](const httplib::Request& req,
                                                      httplib::Response& res) {
    const json body = parse_body(req);
    auto hash = registry_.expected_cert(body.at("packageName").get<std::string>(),
                                        body.at("clientId").get<std::string>(),
                                        bearer_of(req));
    ordered_json out;
    out["certHash"] = hash ? ordered_json(hash->hex()) : ordered_json(nullptr);
    send_json(res, 200, out);
  }));

  server_->Get("/v1/audit", guarded([this, require_bearer](const httplib::Request& req,
                                                           httplib::Response& res) {
    require_bearer(req);
    AuditFilter filter;
    if (req.has_param("packageName")) filter.packageName = req.get_param_value("packageName");
    if (req.has_param("verdict")) {
      const std::string v = req.get_param_value("verdict");
      if (v == to_string(Verdict::Accept)) {
        filter.verdict = Verdict::Accept;
      } else if (v == to_string(Verdict::Reject)) {
        filter.verdict = Verdict::Reject;
      } else {
        throw Error(Errc::InvalidArgument, "verdict must be ACCEPT or REJECT");
      }
    }
    ordered_json out;
    out["audit"] = to_json(RegistryState{{}, registry_.list_audit(filter)})["audit"];
    send_json(res, 200, out);
  }));
}

int RegistryHttpServer::bind(const std::string& host, int port) {
  int bound = port == 0 ? server_->bind_to_any_port(host)
                        : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    throw Error(Errc::TransportError,
                "cannot bind " + host + ":" + std::to_string(port));
  }
  return bound;
}

void RegistryHttpServer::listen() { server_->listen_after_bind(); }

int RegistryHttpServer::start(const std::string& host, int port) {
  const int bound = bind(host, port);
  thread_ = std::thread([this] { listen(); });
  server_->wait_until_ready();
  return bound;
}

void RegistryHttpServer::stop() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

// --- client ------------------------------------------------------------------

namespace {

[[noreturn]] void throw_for_status(const httplib::Result& res) {
  if (!res) {
    throw Error(Errc::TransportError,
                "registry request failed: " + httplib::to_string(res.error()));
  }
  std::string message = res->body;
  json body = json::parse(res->body, nullptr, false);
  if (!body.is_discarded() && body.is_object() && body.contains("error")) {
    message = body["error"].get<std::string>();
  }
  switch (res->status) {
    case 401: throw Error(Errc::BadProviderCredential, message);
    case 404: throw Error(Errc::NotFound, message);
    case 409: throw Error(Errc::DuplicateActive, message);
    default:
      throw Error(Errc::TransportError,
                  "registry answered " + std::to_string(res->status) + ": " + message);
  }
}

json expect_json(const httplib::Result& res, int okStatus) {
  if (!res || res->status != okStatus) throw_for_status(res);
  json body = json::parse(res->body, nullptr, false);
  if (body.is_discarded()) throw Error(Errc::TransportError, "malformed registry reply");
  return body;
}

httplib::Headers auth_headers(std::string_view credential) {
  return {{"Authorization", std::string(kBearer) + std::string(credential)}};
}

}  // namespace

HttpRegistryClient::HttpRegistryClient(std::string host, int port)
    : client_(std::make_unique<httplib::Client>(std::move(host), port)) {
  client_->set_connection_timeout(2, 0);
  client_->set_read_timeout(5, 0);
}

HttpRegistryClient::~HttpRegistryClient() = default;

ValidationResult HttpRegistryClient::validate(const PartnerTriple& triple,
                                              std::string_view providerCredential,
                                              bool includeCert) {
  ordered_json req;
  req["packageName"] = triple.packageName;
  req["certHash"] = triple.certHash.hex();
  req["clientId"] = triple.clientId;
  req["includeCert"] = includeCert;
  std::lock_guard lock(mutex_);
  json body = expect_json(client_->Post("/v1/validate", auth_headers(providerCredential),
                                        req.dump(), "application/json"),
                          200);
  try {
    // Reuse the audit-entry parser for the verdict and reason strings.
    json entry = {{"timestamp", 0},
                  {"packageName", triple.packageName},
                  {"certHash", triple.certHash.hex()},
                  {"clientId", triple.clientId},
                  {"includeCert", includeCert},
                  {"verdict", body.at("verdict")},
                  {"reason", body.at("reason")}};
    json wrapped = {{"schemaVersion", kRegistrySchemaVersion},
                    {"partners", json::array()},
                    {"audit", json::array({entry})}};
    const AuditEntry parsed = registry_state_from_json(wrapped).audit.front();
    return {parsed.verdict, parsed.reason};
  } catch (const std::exception& e) {
    throw Error(Errc::TransportError, std::string("malformed registry reply: ") + e.what());
  }
}

std::optional<CertHash> HttpRegistryClient::expected_cert(
    std::string_view packageName, std::string_view clientId,
    std::string_view providerCredential) {
  ordered_json req;
  req["packageName"] = packageName;
  req["clientId"] = clientId;
  std::lock_guard lock(mutex_);
  json body = expect_json(client_->Post("/v1/partners/lookup",
                                        auth_headers(providerCredential), req.dump(),
                                        "application/json"),
                          200);
  const json& hash = body.value("certHash", json(nullptr));
  if (hash.is_null()) return std::nullopt;
  try {
    return CertHash::from_hex(hash.get<std::string>());
  } catch (const std::exception& e) {
    throw Error(Errc::TransportError, std::string("malformed registry reply: ") + e.what());
  }
}

PartnerRecord HttpRegistryClient::register_partner(const PartnerTriple& triple,
                                                   std::string_view providerCredential) {
  ordered_json req;
  req["packageName"] = triple.packageName;
  req["certHash"] = triple.certHash.hex();
  req["clientId"] = triple.clientId;
  std::lock_guard lock(mutex_);
  return record_from_json(expect_json(
      client_->Post("/v1/partners", auth_headers(providerCredential), req.dump(),
                    "application/json"),
      201));
}

PartnerRecord HttpRegistryClient::rotate_certificate(std::string_view packageName,
                                                     std::string_view clientId,
                                                     const CertHash& newCertHash,
                                                     std::string_view providerCredential) {
  ordered_json req;
  req["packageName"] = packageName;
  req["clientId"] = clientId;
  req["newCertHash"] = newCertHash.hex();
  std::lock_guard lock(mutex_);
  return record_from_json(expect_json(
      client_->Post("/v1/partners/rotate", auth_headers(providerCredential), req.dump(),
                    "application/json"),
      200));
}

void HttpRegistryClient::revoke_partner(std::string_view packageName,
                                        std::string_view clientId,
                                        std::string_view providerCredential) {
  ordered_json req;
  req["packageName"] = packageName;
  req["clientId"] = clientId;
  std::lock_guard lock(mutex_);
  expect_json(client_->Post("/v1/partners/revoke", auth_headers(providerCredential),
                            req.dump(), "application/json"),
              200);
}

std::vector<AuditEntry> HttpRegistryClient::list_audit(std::string_view providerCredential,
                                                       const AuditFilter& filter) {
  httplib::Params params;
  if (filter.packageName) params.emplace("packageName", *filter.packageName);
  if (filter.verdict) params.emplace("verdict", std::string(to_string(*filter.verdict)));
  std::lock_guard lock(mutex_);
  json body = expect_json(
      client_->Get("/v1/audit", params, auth_headers(providerCredential)), 200);
  json wrapped = {{"schemaVersion", kRegistrySchemaVersion},
                  {"partners", json::array()},
                  {"audit", body.at("audit")}};
  return registry_state_from_json(wrapped).audit;
}

}  // namespace ipcauth
