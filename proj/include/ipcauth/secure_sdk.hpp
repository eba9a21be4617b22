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

#ifndef IPCAUTH_SECURE_SDK_HPP_
#define IPCAUTH_SECURE_SDK_HPP_

#include <chrono>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ipcauth/auth_mechanisms.hpp"
#include "ipcauth/binder.hpp"
#include "ipcauth/pending_intent.hpp"
#include "ipcauth/registry_client.hpp"

namespace ipcauth {

enum class ProviderMode { VulnerablePi, Secure3Layer, AltAHardcoded, AltBNoCert };
enum class Layer { L1, L2, L3 };

std::string_view to_string(ProviderMode mode) noexcept;
std::string_view to_string(Layer layer) noexcept;

/// What a partner sends to the publish service. The credential and the
/// content travel side by side; nothing ties one to the other.
struct PublishRequest {
  std::string content;
  /// The PendingIntent the vulnerable service authenticates. Ignored by the
  /// other modes.
  std::optional<PendingIntentToken> credential;
  std::string clientId;
};

/// Fault injection for the secure mode. Both on in production.
struct LayerToggles {
  bool certificate = true;
  bool server = true;
};

struct ProviderConfig {
  ProviderMode mode = ProviderMode::Secure3Layer;
  /// AltAHardcoded only.
  std::set<CertHash> hardcodedHashes;
  /// VulnerablePi only: creator packages the service trusts.
  Allowlist piAllowlist;
  std::string providerCredential;
  std::shared_ptr<RegistryClient> registry;
  LayerToggles layers;
};

struct Attribution {
  std::string packageName;
  std::string clientId;

  friend bool operator==(const Attribution&, const Attribution&) = default;
};

struct PublishOutcome {
  bool accepted = false;
  std::optional<Attribution> attributedPartner;
  std::optional<Layer> layerRejected;
  /// Package the kernel-stamped UID resolved to; empty in VulnerablePi mode,
  /// which never asks.
  std::optional<std::string> resolvedCaller;

  friend bool operator==(const PublishOutcome&, const PublishOutcome&) = default;
};

/// Runs inside the publish handler for `txn`, whose payload must be a
/// PublishRequest. Registry failures fail closed as an L3 rejection. When
/// `verificationTime` is given it receives the time spent in the local
/// checks (L1 plus the certificate comparison of L2).
PublishOutcome handle_publish(const Kernel& kernel, const Transaction& txn,
                              const ProviderConfig& config,
                              std::chrono::nanoseconds* verificationTime = nullptr);

/// Throws Errc::InvalidArgument when no registry is configured; otherwise
/// whatever the registry client throws.
ValidationResult provider_call_registry(const ProviderConfig& config,
                                        const PartnerTriple& triple,
                                        std::string_view providerCredential,
                                        bool includeCert = true);

/// The provider's exported publish service, registered with the kernel on
/// construction.
class PublishService {
 public:
  static constexpr std::string_view kServiceName = "publish";

  PublishService(Kernel& kernel, const ProcessHandle& provider, ProviderConfig config);

  PublishService(const PublishService&) = delete;
  PublishService& operator=(const PublishService&) = delete;

  /// Swaps the configuration, standing in for shipping a new service build.
  void reconfigure(ProviderConfig config);
  std::size_t redeploys() const noexcept { return redeploys_; }

  const ProviderConfig& config() const noexcept { return config_; }
  const std::vector<PublishOutcome>& outcomes() const noexcept { return outcomes_; }
  const std::vector<std::chrono::nanoseconds>& verification_times() const noexcept {
    return timings_;
  }
  /// Contents accepted, in order, tagged with the partner they were credited to.
  const std::vector<std::pair<Attribution, std::string>>& published() const noexcept {
    return published_;
  }

 private:
  Kernel& kernel_;
  ProviderConfig config_;
  std::size_t redeploys_ = 0;
  std::vector<PublishOutcome> outcomes_;
  std::vector<std::chrono::nanoseconds> timings_;
  std::vector<std::pair<Attribution, std::string>> published_;
};

/// Client-side helper: bind to the publish service and send one request.
PublishOutcome publish(Kernel& kernel, const ProcessHandle& caller,
                       std::string_view providerPackage, PublishRequest request);

}  // namespace ipcauth

#endif  // IPCAUTH_SECURE_SDK_HPP_
