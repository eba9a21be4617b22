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

#include "ipcauth/secure_sdk.hpp"

#include <any>

#include "ipcauth/error.hpp"

namespace ipcauth {

std::string_view to_string(ProviderMode mode) noexcept {
  switch (mode) {
    case ProviderMode::VulnerablePi: return "VULNERABLE_PI";
    case ProviderMode::Secure3Layer: return "SECURE_3LAYER";
    case ProviderMode::AltAHardcoded: return "ALT_A_HARDCODED";
    case ProviderMode::AltBNoCert: return "ALT_B_NO_CERT";
  }
  return "";
}

std::string_view to_string(Layer layer) noexcept {
  switch (layer) {
    case Layer::L1: return "L1";
    case Layer::L2: return "L2";
    case Layer::L3: return "L3";
  }
  return "";
}

namespace {

using SteadyClock = std::chrono::steady_clock;

PublishOutcome rejected(Layer layer, std::optional<std::string> caller) {
  return {false, std::nullopt, layer, std::move(caller)};
}

PublishOutcome accepted(std::string pkg, std::string clientId) {
  return {true, Attribution{pkg, std::move(clientId)}, std::nullopt, pkg};
}

bool is_registry_failure(const Error& e) {
  return e.code() == Errc::TransportError || e.code() == Errc::BadProviderCredential;
}

RegistryClient& registry_of(const ProviderConfig& config) {
  if (!config.registry) throw Error(Errc::InvalidArgument, "no registry configured");
  return *config.registry;
}

PublishOutcome vulnerable(const PublishRequest& req, const ProviderConfig& config) {
  if (!req.credential) return {};
  AuthDecision d = authenticate_pi_creator(*req.credential, config.piAllowlist);
  if (!d.accepted) return {};
  return {true, Attribution{*d.authenticatedAs, req.clientId}, std::nullopt, std::nullopt};
}

PublishOutcome secure(const Device& device, const std::string& pkg,
                      const PublishRequest& req, const ProviderConfig& config,
                      SteadyClock::duration& local) {
  std::optional<CertHash> expected;
  try {
    expected = registry_of(config).expected_cert(pkg, req.clientId,
                                                 config.providerCredential);
  } catch (const Error& e) {
    if (!is_registry_failure(e)) throw;
    return rejected(Layer::L3, pkg);
  }

  const auto l2Start = SteadyClock::now();
  CertHash certHash = expected ? *expected : device.app(pkg).certHash;
  const bool certOk =
      !config.layers.certificate || device.has_signing_certificate(pkg, certHash);
  local += SteadyClock::now() - l2Start;
  if (!certOk) return rejected(Layer::L2, pkg);

  if (!config.layers.server) return accepted(pkg, req.clientId);
  try {
    ValidationResult v = registry_of(config).validate(
        {pkg, certHash, req.clientId}, config.providerCredential, true);
    if (!v.accepted()) return rejected(Layer::L3, pkg);
  } catch (const Error& e) {
    if (!is_registry_failure(e)) throw;
    return rejected(Layer::L3, pkg);
  }
  return accepted(pkg, req.clientId);
}

PublishOutcome alt_b(const Device& device, const std::string& pkg,
                     const PublishRequest& req, const ProviderConfig& config) {
  try {
    ValidationResult v = registry_of(config).validate(
        {pkg, device.app(pkg).certHash, req.clientId}, config.providerCredential, false);
    if (!v.accepted()) return rejected(Layer::L3, pkg);
  } catch (const Error& e) {
    if (!is_registry_failure(e)) throw;
    return rejected(Layer::L3, pkg);
  }
  return accepted(pkg, req.clientId);
}

}  // namespace

PublishOutcome handle_publish(const Kernel& kernel, const Transaction& txn,
                              const ProviderConfig& config,
                              std::chrono::nanoseconds* verificationTime) {
  const auto* req = std::any_cast<PublishRequest>(&txn.payload());
  if (req == nullptr) throw Error(Errc::InvalidArgument, "payload is not a PublishRequest");

  if (config.mode == ProviderMode::VulnerablePi) {
    if (verificationTime) *verificationTime = {};
    return vulnerable(*req, config);
  }

  // Layer 1: who is really on the other end of the Binder call.
  const auto l1Start = SteadyClock::now();
  const Uid callerUid = kernel.get_calling_uid(txn);
  const auto packages = kernel.device().get_packages_for_uid(callerUid);
  SteadyClock::duration local = SteadyClock::now() - l1Start;

  auto report = [&](PublishOutcome outcome) {
    if (verificationTime) {
      *verificationTime = std::chrono::duration_cast<std::chrono::nanoseconds>(local);
    }
    return outcome;
  };

  if (packages.empty()) return report(rejected(Layer::L1, std::nullopt));
  const std::string& pkg = packages.front();
  const Device& device = kernel.device();

  switch (config.mode) {
    case ProviderMode::Secure3Layer:
      return report(secure(device, pkg, *req, config, local));
    case ProviderMode::AltAHardcoded: {
      const auto l2Start = SteadyClock::now();
      const bool known = config.hardcodedHashes.contains(device.app(pkg).certHash);
      local += SteadyClock::now() - l2Start;
      return report(known ? accepted(pkg, req->clientId) : rejected(Layer::L2, pkg));
    }
    case ProviderMode::AltBNoCert:
      return report(alt_b(device, pkg, *req, config));
    case ProviderMode::VulnerablePi:
      break;
  }
  throw Error(Errc::InvalidArgument, "unhandled provider mode");
}

ValidationResult provider_call_registry(const ProviderConfig& config,
                                        const PartnerTriple& triple,
                                        std::string_view providerCredential,
                                        bool includeCert) {
  return registry_of(config).validate(triple, providerCredential, includeCert);
}

PublishService::PublishService(Kernel& kernel, const ProcessHandle& provider,
                               ProviderConfig config)
    : kernel_(kernel), config_(std::move(config)) {
  kernel_.register_service(
      provider, std::string(kServiceName), true, [this](const Transaction& txn) {
        std::chrono::nanoseconds spent{};
        PublishOutcome outcome = handle_publish(kernel_, txn, config_, &spent);
        outcomes_.push_back(outcome);
        timings_.push_back(spent);
        if (outcome.accepted) {
          published_.emplace_back(*outcome.attributedPartner,
                                  std::any_cast<const PublishRequest&>(txn.payload()).content);
        }
        return Parcel(outcome);
      });
}

void PublishService::reconfigure(ProviderConfig config) {
  config_ = std::move(config);
  ++redeploys_;
}

PublishOutcome publish(Kernel& kernel, const ProcessHandle& caller,
                       std::string_view providerPackage, PublishRequest request) {
  Connection conn = kernel.bind_service(caller, providerPackage, PublishService::kServiceName);
  return std::any_cast<PublishOutcome>(kernel.transact(conn, std::move(request)));
}

}  // namespace ipcauth
