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
#include "ipcauth/notifications.hpp"

#include "ipcauth/error.hpp"

namespace ipcauth {

namespace {
bool is_digit(char c) { return c >= '0' && c <= '9'; }
}  // namespace

std::string mask_sensitive(std::string_view text, PlatformPolicy policy) {
  if (policy != PlatformPolicy::Android15Masking) return std::string(text);
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_digit(text[i])) {
      out.push_back(text[i++]);
      continue;
    }
    std::size_t end = i;
    while (end < text.size() && is_digit(text[end])) ++end;
    const std::size_t run = end - i;
    if (run >= 4 && run <= 8) {
      for (std::size_t k = 0; k < run; ++k) out.append(kMaskGlyph);
    } else {
      out.append(text.substr(i, run));
    }
    i = end;
  }
  return out;
}

std::size_t utf8_length(std::string_view text) noexcept {
  std::size_t n = 0;
  for (unsigned char c : text) {
    if ((c & 0xc0) != 0x80) ++n;
  }
  return n;
}

NotificationManager::NotificationManager(const Kernel& kernel, const SimClock& clock)
    : kernel_(kernel), clock_(clock) {}

void NotificationManager::post_notification(const ProcessHandle& poster,
                                            Notification notification) {
  const std::string packageName = kernel_.package_of(poster);
  const Device& device = kernel_.device();
  StatusBarNotification sbn{packageName, clock_.now(), std::move(notification)};
  posted_.push_back(sbn);

  StatusBarNotification delivered = sbn;
  delivered.notification.title = mask_sensitive(sbn.notification.title, device.policy());
  delivered.notification.text = mask_sensitive(sbn.notification.text, device.policy());

  for (const InstalledApp* app : device.apps()) {
    if (!app->capabilities.contains(Capability::NotificationListener)) continue;
    inbox_[app->packageName].push_back(delivered);
    if (auto l = listeners_.find(app->packageName); l != listeners_.end()) {
      l->second(delivered);
    }
  }
}

void NotificationManager::set_listener(std::string packageName,
                                       NotificationListener listener) {
  listeners_[std::move(packageName)] = std::move(listener);
}

const std::vector<StatusBarNotification>& NotificationManager::delivered_to(
    std::string_view packageName) const {
  static const std::vector<StatusBarNotification> kEmpty;
  auto it = inbox_.find(packageName);
  return it == inbox_.end() ? kEmpty : it->second;
}

std::vector<PendingIntentToken> on_notification_posted(
    const Device& device, std::string_view listenerPackage,
    const StatusBarNotification& sbn) {
  if (!device.has_capability(listenerPackage, Capability::NotificationListener)) {
    throw Error(Errc::NotAListener, std::string(listenerPackage));
  }
  std::vector<PendingIntentToken> out;
  out.reserve(1 + sbn.notification.actionIntents.size());
  out.push_back(sbn.notification.contentIntent);
  for (const auto& t : sbn.notification.actionIntents) out.push_back(t);
  return out;
}

void CredentialCache::store(const std::string& packageName, PendingIntentToken token) {
  tokens_[packageName].push_back(std::move(token));
}

std::optional<PendingIntentToken> CredentialCache::get(
    std::string_view packageName) const {
  auto it = tokens_.find(packageName);
  if (it == tokens_.end() || it->second.empty()) return std::nullopt;
  return it->second.back();
}

std::size_t CredentialCache::size() const noexcept {
  std::size_t n = 0;
  for (const auto& [_, v] : tokens_) n += v.size();
  return n;
}

}  // namespace ipcauth
