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

#ifndef IPCAUTH_DEVICE_HPP_
#define IPCAUTH_DEVICE_HPP_

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace ipcauth {

using Uid = std::int64_t;

/// First app UID handed out on a fresh device; matches the Android app range.
inline constexpr Uid kFirstApplicationUid = 10000;

class SigningKey;

/// Hex-encoded SHA-256 of a signing key's bytes.
class CertHash {
 public:
  /// Throws Errc::InvalidArgument unless `hex` is 64 lowercase hex digits.
  static CertHash from_hex(std::string hex);
  static CertHash of(const SigningKey& key);

  const std::string& hex() const noexcept { return hex_; }

  friend auto operator<=>(const CertHash&, const CertHash&) = default;

 private:
  explicit CertHash(std::string hex) : hex_(std::move(hex)) {}
  std::string hex_;
};

/// Opaque key material standing in for an APK signing certificate.
class SigningKey {
 public:
  static constexpr std::size_t kMinBytes = 16;

  SigningKey(std::vector<std::uint8_t> bytes, std::string label);

  /// Deterministic 32-byte key derived from a label; convenient for scenarios.
  static SigningKey derive(std::string_view label);

  const std::vector<std::uint8_t>& bytes() const noexcept { return bytes_; }
  const std::string& label() const noexcept { return label_; }
  CertHash cert_hash() const { return CertHash::of(*this); }

 private:
  std::vector<std::uint8_t> bytes_;
  std::string label_;
};

struct Manifest {
  std::set<std::string> definedPermissions;
  std::set<std::string> usedPermissions;
  std::set<CertHash> knownSignerHashes;
  std::set<std::string> exportedServices;

  friend bool operator==(const Manifest&, const Manifest&) = default;
};

enum class InstallSource { Store, Sideload };
enum class Capability { NotificationListener };
enum class PlatformPolicy { Android14, Android15Masking };

std::string_view to_string(InstallSource source) noexcept;
std::string_view to_string(PlatformPolicy policy) noexcept;
/// Accepts "android14" / "android15" (plus the enum spellings).
PlatformPolicy parse_platform_policy(std::string_view text);

struct InstalledApp {
  std::string packageName;
  Uid uid = 0;
  CertHash certHash;
  Manifest manifest;
  std::set<Capability> capabilities;
  InstallSource installSource = InstallSource::Store;
};

struct AppSpec {
  std::string packageName;
  SigningKey key;
  Manifest manifest;
  InstallSource source = InstallSource::Store;
};

/// The installed-app table and the package-manager queries over it.
///
/// UIDs are allocated sequentially from kFirstApplicationUid and never
/// reused, so a UID that is absent from the index always means the app that
/// held it has been uninstalled.
class Device {
 public:
  explicit Device(PlatformPolicy policy = PlatformPolicy::Android14);

  Uid install_app(const AppSpec& spec);
  void uninstall_app(std::string_view packageName);

  /// Zero or one entries; shared UIDs are not modelled.
  std::vector<std::string> get_packages_for_uid(Uid uid) const;
  bool has_signing_certificate(std::string_view packageName,
                               const CertHash& hash) const;
  void grant_capability(std::string_view packageName, Capability capability);
  bool has_capability(std::string_view packageName,
                      Capability capability) const;

  /// nullptr when absent.
  const InstalledApp* find(std::string_view packageName) const;
  /// Throws Errc::UnknownPackage when absent.
  const InstalledApp& app(std::string_view packageName) const;
  bool uid_installed(Uid uid) const { return uid_index_.contains(uid); }

  /// Installed apps in ascending UID order.
  std::vector<const InstalledApp*> apps() const;
  std::size_t size() const noexcept { return apps_.size(); }

  PlatformPolicy policy() const noexcept { return policy_; }
  Uid next_uid() const noexcept { return next_uid_; }

 private:
  std::map<std::string, InstalledApp, std::less<>> apps_;
  std::map<Uid, std::string> uid_index_;
  Uid next_uid_ = kFirstApplicationUid;
  PlatformPolicy policy_;
};

/// Builds a device from a scenario-config document:
///
///   {"platform": "android14",
///    "apps": [{"packageName": "com.poc.partner",
///              "key": "partner-key"            (label, derived key)
///                  | {"label": "...", "hex": "..."},
///              "installSource": "STORE" | "SIDELOAD",
///              "manifest": {"definedPermissions": [...],
///                           "usedPermissions": [...],
///                           "knownSignerHashes": [...],
///                           "exportedServices": [...]},
///              "capabilities": ["NLS"]}]}
///
/// Apps are installed in document order. Throws Errc::InvalidSpec on
/// malformed input.
Device device_from_config(const nlohmann::json& config);

}  // namespace ipcauth

#endif  // IPCAUTH_DEVICE_HPP_
