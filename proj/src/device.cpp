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
#include "ipcauth/device.hpp"

#include "ipcauth/digest.hpp"
#include "ipcauth/error.hpp"

namespace ipcauth {

CertHash CertHash::from_hex(std::string hex) {
  if (hex.size() != 64 || !is_lower_hex(hex)) {
    throw Error(Errc::InvalidArgument,
                "certificate hash must be 64 lowercase hex digits: " + hex);
  }
  return CertHash(std::move(hex));
}

CertHash CertHash::of(const SigningKey& key) {
  return CertHash(sha256_hex(std::span(key.bytes())));
}

SigningKey::SigningKey(std::vector<std::uint8_t> bytes, std::string label)
    : bytes_(std::move(bytes)), label_(std::move(label)) {
  if (bytes_.size() < kMinBytes) {
    throw Error(Errc::InvalidArgument,
                "signing key '" + label_ + "' shorter than 16 bytes");
  }
}

SigningKey SigningKey::derive(std::string_view label) {
  const std::string hex = sha256_hex("ipcauth-signing-key:" + std::string(label));
  std::vector<std::uint8_t> bytes;
  bytes.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    bytes.push_back(
        static_cast<std::uint8_t>(std::stoi(hex.substr(i, 2), nullptr, 16)));
  }
  return SigningKey(std::move(bytes), std::string(label));
}

std::string_view to_string(InstallSource source) noexcept {
  return source == InstallSource::Store ? "STORE" : "SIDELOAD";
}

std::string_view to_string(PlatformPolicy policy) noexcept {
  return policy == PlatformPolicy::Android14 ? "android14" : "android15";
}

PlatformPolicy parse_platform_policy(std::string_view text) {
  if (text == "android14" || text == "ANDROID_14") return PlatformPolicy::Android14;
  if (text == "android15" || text == "ANDROID_15_MASKING") {
    return PlatformPolicy::Android15Masking;
  }
  throw Error(Errc::InvalidSpec, "unknown platform policy: " + std::string(text));
}

Device::Device(PlatformPolicy policy) : policy_(policy) {}

Uid Device::install_app(const AppSpec& spec) {
  if (apps_.contains(spec.packageName)) {
    throw Error(Errc::DuplicatePackage, spec.packageName);
  }
  const Uid uid = next_uid_++;
  apps_.emplace(spec.packageName,
                InstalledApp{spec.packageName, uid, spec.key.cert_hash(),
                             spec.manifest, {}, spec.source});
  uid_index_.emplace(uid, spec.packageName);
  return uid;
}

void Device::uninstall_app(std::string_view packageName) {
  auto it = apps_.find(packageName);
  if (it == apps_.end()) {
    throw Error(Errc::UnknownPackage, std::string(packageName));
  }
  uid_index_.erase(it->second.uid);
  apps_.erase(it);
}

std::vector<std::string> Device::get_packages_for_uid(Uid uid) const {
  auto it = uid_index_.find(uid);
  if (it == uid_index_.end()) return {};
  return {it->second};
}

bool Device::has_signing_certificate(std::string_view packageName,
                                     const CertHash& hash) const {
  return app(packageName).certHash == hash;
}

void Device::grant_capability(std::string_view packageName,
                              Capability capability) {
  auto it = apps_.find(packageName);
  if (it == apps_.end()) {
    throw Error(Errc::UnknownPackage, std::string(packageName));
  }
  // Restricted Settings: sideloaded apps cannot be given notification access.
  if (capability == Capability::NotificationListener &&
      policy_ == PlatformPolicy::Android15Masking &&
      it->second.installSource == InstallSource::Sideload) {
    throw Error(Errc::RestrictedSettingsBlocked, std::string(packageName));
  }
  it->second.capabilities.insert(capability);
}

bool Device::has_capability(std::string_view packageName,
                            Capability capability) const {
  const InstalledApp* a = find(packageName);
  return a != nullptr && a->capabilities.contains(capability);
}

const InstalledApp* Device::find(std::string_view packageName) const {
  auto it = apps_.find(packageName);
  return it == apps_.end() ? nullptr : &it->second;
}

const InstalledApp& Device::app(std::string_view packageName) const {
  const InstalledApp* a = find(packageName);
  if (a == nullptr) throw Error(Errc::UnknownPackage, std::string(packageName));
  return *a;
}

std::vector<const InstalledApp*> Device::apps() const {
  std::vector<const InstalledApp*> out;
  out.reserve(uid_index_.size());
  for (const auto& [uid, name] : uid_index_) out.push_back(&apps_.find(name)->second);
  return out;
}

namespace {

std::set<std::string> string_set(const nlohmann::json& j, const char* key) {
  std::set<std::string> out;
  if (j.contains(key)) {
    for (const auto& v : j.at(key)) out.insert(v.get<std::string>());
  }
  return out;
}

SigningKey key_from_config(const nlohmann::json& j) {
  if (j.is_string()) return SigningKey::derive(j.get<std::string>());
  const auto label = j.value("label", std::string{});
  const auto hex = j.at("hex").get<std::string>();
  if (hex.size() % 2 != 0 || !is_lower_hex(hex)) {
    throw Error(Errc::InvalidSpec, "key hex must be lowercase, even length");
  }
  std::vector<std::uint8_t> bytes;
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    bytes.push_back(
        static_cast<std::uint8_t>(std::stoi(hex.substr(i, 2), nullptr, 16)));
  }
  return SigningKey(std::move(bytes), label);
}

}  // namespace

Device device_from_config(const nlohmann::json& config) {
  try {
    Device device(parse_platform_policy(config.value("platform", "android14")));
    for (const auto& a : config.at("apps")) {
      Manifest manifest;
      if (a.contains("manifest")) {
        const auto& m = a.at("manifest");
        manifest.definedPermissions = string_set(m, "definedPermissions");
        manifest.usedPermissions = string_set(m, "usedPermissions");
        manifest.exportedServices = string_set(m, "exportedServices");
        for (const auto& h : string_set(m, "knownSignerHashes")) {
          manifest.knownSignerHashes.insert(CertHash::from_hex(h));
        }
      }
      const auto source = a.value("installSource", "STORE");
      if (source != "STORE" && source != "SIDELOAD") {
        throw Error(Errc::InvalidSpec, "installSource must be STORE or SIDELOAD");
      }
      AppSpec spec{a.at("packageName").get<std::string>(),
                   key_from_config(a.at("key")), std::move(manifest),
                   source == "STORE" ? InstallSource::Store
                                     : InstallSource::Sideload};
      device.install_app(spec);
      for (const auto& cap : a.value("capabilities", nlohmann::json::array())) {
        if (cap.get<std::string>() != "NLS") {
          throw Error(Errc::InvalidSpec, "unknown capability " + cap.dump());
        }
        device.grant_capability(spec.packageName, Capability::NotificationListener);
      }
    }
    return device;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidSpec, e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::InvalidArgument) throw Error(Errc::InvalidSpec, e.what());
    throw;
  }
}

}  // namespace ipcauth
