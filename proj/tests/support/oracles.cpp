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

#include "oracles.hpp"

#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "ipcauth/binder.hpp"
#include "ipcauth/error.hpp"
#include "ipcauth/pending_intent.hpp"
#include "ipcauth/registry_client.hpp"
#include "ipcauth/secure_sdk.hpp"

namespace ipcauth::testing {

namespace {

constexpr char kEchoProvider[] = "svc.echo";

AppSpec app(const std::string& name, const std::string& keyLabel) {
  return {name, SigningKey::derive(keyLabel), {}, InstallSource::Store};
}

}  // namespace

KernelFuzzResult run_kernel_fuzz(std::uint64_t seed, std::uint64_t steps) {
  KernelFuzzResult r;
  std::mt19937_64 rng(seed);
  Device device;
  Kernel kernel(device);

  std::map<std::string, Uid> table;  // the oracle: package -> uid at install
  std::vector<std::pair<std::string, Uid>> retired;
  table[kEchoProvider] = device.install_app(app(kEchoProvider, "echo-key"));
  kernel.register_service(kernel.mint_handle(kEchoProvider), "whoami", true,
                          [&kernel](const Transaction& txn) {
                            return Parcel(kernel.get_calling_uid(txn));
                          });

  auto mismatch = [&r](std::string what) {
    ++r.mismatches;
    if (r.firstMismatches.size() < 5) r.firstMismatches.push_back(std::move(what));
  };

  // Handles are kept across steps so that some go stale.
  std::vector<std::pair<std::string, ProcessHandle>> handles;
  std::uint64_t generation = 0;

  for (std::uint64_t step = 0; step < steps; ++step, ++r.steps) {
    const auto action = rng() % 10;
    if (action < 3 || table.size() < 2) {
      const std::string name = "app." + std::to_string(rng() % 12) + ".g" +
                               std::to_string(generation++);
      table[name] = device.install_app(app(name, name));
      handles.emplace_back(name, kernel.mint_handle(name));
      ++r.installs;
    } else if (action < 4) {
      auto it = std::next(table.begin(), static_cast<long>(rng() % table.size()));
      if (it->first == kEchoProvider) continue;
      retired.emplace_back(it->first, it->second);
      device.uninstall_app(it->first);
      table.erase(it);
      ++r.uninstalls;
    } else if (!handles.empty()) {
      const auto& [name, handle] = handles[rng() % handles.size()];
      const auto live = table.find(name);
      try {
        Connection conn = kernel.bind_service(handle, kEchoProvider, "whoami");
        const Uid seen = std::any_cast<Uid>(kernel.transact(conn, {}));
        ++r.transactions;
        if (live == table.end()) {
          mismatch("stale handle for " + name + " was served");
        } else if (seen != live->second) {
          mismatch(name + ": kernel stamped " + std::to_string(seen) + ", installed as " +
                   std::to_string(live->second));
        }
        const auto resolved = device.get_packages_for_uid(seen);
        if (resolved != std::vector<std::string>{name}) {
          mismatch("uid " + std::to_string(seen) + " does not resolve to " + name);
        }
      } catch (const Error& e) {
        if (live == table.end() && e.code() == Errc::HandleInvalid) {
          ++r.staleRejections;
        } else {
          mismatch(name + ": unexpected " + e.what());
        }
      }
    }
  }
  // Retired UIDs stay unassigned.
  for (const auto& [name, uid] : retired) {
    if (device.uid_installed(uid)) mismatch("uid of " + name + " was reused");
  }
  return r;
}

HandoffResult run_handoff_chain(std::size_t length) {
  HandoffResult r;
  Device device;
  Kernel kernel(device);
  PendingIntentManager intents(kernel);

  std::vector<std::string> chain;
  for (std::size_t i = 0; i <= length; ++i) {
    chain.push_back("hop." + std::to_string(i));
    device.install_app(app(chain.back(), chain.back()));
  }
  const ProcessHandle creator = kernel.mint_handle(chain.front());
  const PendingIntentToken token = intents.create_pending_intent(
      creator, {"hop.0.ACTION", {{"k", "v"}}, chain.front()}, Mutability::Immutable);
  const Uid creatorUid = creator.uid();
  const std::string creatorPkg = chain.front();

  std::optional<PendingIntentToken> held;
  for (std::size_t i = 1; i <= length; ++i) {
    const std::string expectedSender = chain[i - 1];
    kernel.register_service(
        kernel.mint_handle(chain[i]), "inbox", true, [&, expectedSender](const Transaction& txn) {
          const auto& received = std::any_cast<const PendingIntentToken&>(txn.payload());
          if (get_creator_package(received) != creatorPkg ||
              get_creator_uid(received) != creatorUid || !(received == token)) {
            ++r.creatorMismatches;
          }
          if (device.get_packages_for_uid(kernel.get_calling_uid(txn)) !=
              std::vector<std::string>{expectedSender}) {
            ++r.presenterMismatches;
          }
          held = received;
          return Parcel{};
        });
  }
  PendingIntentToken current = token;
  for (std::size_t i = 1; i <= length; ++i) {
    Connection conn = kernel.bind_service(kernel.mint_handle(chain[i - 1]), chain[i], "inbox");
    kernel.transact(conn, current);
    current = *held;
    ++r.hops;
  }
  const DispatchRecord rec = intents.send(current, kernel.mint_handle(chain.back()));
  r.dispatchAsCreator = rec.executedAsUid == creatorUid && rec.executedAsPackage == creatorPkg;
  return r;
}

namespace {

constexpr char kProvider[] = "com.poc.secure.sdk";
constexpr char kCredential[] = "soundness-credential";
const std::vector<std::string> kClientIds = {"client-a", "client-b"};

enum class Install { Absent, KeyA, KeyB };
enum class Registration { None, ActiveA, RevokedA, RevokedAActiveB };

struct OracleRecord {
  std::string pkg;
  std::string keyLabel;
  std::string clientId;
  bool active;
};

std::string key_label(const std::string& pkg, Install which) {
  return pkg + (which == Install::KeyA ? "-key-a" : "-key-b");
}

}  // namespace

SoundnessResult run_soundness_enumeration() {
  SoundnessResult r;
  const std::vector<std::string> packages = {"com.partner.one", "com.partner.two",
                                             "com.partner.three", "com.partner.four"};
  const std::size_t n = packages.size();
  // Packages 0 and 2 share a client id, as do 1 and 3.
  auto client_of = [](std::size_t i) { return kClientIds[i % 2]; };

  std::size_t combos = 1;
  for (std::size_t i = 0; i < n; ++i) combos *= 3 * 4;

  for (std::size_t code = 0; code < combos; ++code) {
    std::vector<Install> installs(n);
    std::vector<Registration> regs(n);
    std::size_t rest = code;
    for (std::size_t i = 0; i < n; ++i) {
      installs[i] = static_cast<Install>(rest % 3);
      rest /= 3;
      regs[i] = static_cast<Registration>(rest % 4);
      rest /= 4;
    }

    SimClock clock;
    Device device;
    Kernel kernel(device);
    PartnerRegistry registry(kCredential, clock.source());
    auto client = std::make_shared<InProcessRegistryClient>(registry);
    device.install_app(app(kProvider, "provider-key"));
    ProviderConfig config;
    config.mode = ProviderMode::Secure3Layer;
    config.providerCredential = kCredential;
    config.registry = client;
    PublishService service(kernel, kernel.mint_handle(kProvider), config);

    // The oracle keeps its own copy of what was registered.
    std::vector<OracleRecord> oracle;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& pkg = packages[i];
      if (installs[i] != Install::Absent) {
        device.install_app(app(pkg, key_label(pkg, installs[i])));
      }
      const auto hashA = SigningKey::derive(key_label(pkg, Install::KeyA)).cert_hash();
      const auto hashB = SigningKey::derive(key_label(pkg, Install::KeyB)).cert_hash();
      switch (regs[i]) {
        case Registration::None:
          break;
        case Registration::ActiveA:
          registry.register_partner(pkg, hashA, client_of(i));
          oracle.push_back({pkg, key_label(pkg, Install::KeyA), client_of(i), true});
          break;
        case Registration::RevokedA:
          registry.register_partner(pkg, hashA, client_of(i));
          registry.revoke_partner(pkg, client_of(i));
          oracle.push_back({pkg, key_label(pkg, Install::KeyA), client_of(i), false});
          break;
        case Registration::RevokedAActiveB:
          registry.register_partner(pkg, hashA, client_of(i));
          registry.revoke_partner(pkg, client_of(i));
          registry.register_partner(pkg, hashB, client_of(i));
          oracle.push_back({pkg, key_label(pkg, Install::KeyA), client_of(i), false});
          oracle.push_back({pkg, key_label(pkg, Install::KeyB), client_of(i), true});
          break;
      }
    }
    ++r.worlds;

    for (std::size_t i = 0; i < n; ++i) {
      if (installs[i] == Install::Absent) continue;
      const auto& pkg = packages[i];
      const ProcessHandle caller = kernel.mint_handle(pkg);
      for (const auto& clientId : kClientIds) {
        const PublishOutcome got = publish(kernel, caller, kProvider, {"x", std::nullopt, clientId});
        bool expected = false;
        for (const auto& rec : oracle) {
          expected = expected || (rec.active && rec.pkg == pkg && rec.clientId == clientId &&
                                  rec.keyLabel == key_label(pkg, installs[i]));
        }
        ++r.calls;
        if (got.accepted) ++r.accepts;
        const bool attributed = got.accepted
                                    ? (got.attributedPartner &&
                                       got.attributedPartner->packageName == pkg &&
                                       !got.layerRejected)
                                    : got.layerRejected.has_value();
        if (!attributed) ++r.attributionViolations;
        if (got.accepted != expected) {
          ++r.disagreements;
          if (r.firstDisagreements.size() < 5) {
            std::ostringstream os;
            os << "world " << code << ": " << pkg << " with " << clientId << " got "
               << got.accepted << ", oracle " << expected;
            r.firstDisagreements.push_back(os.str());
          }
        }
      }
    }
  }
  return r;
}

}  // namespace ipcauth::testing
