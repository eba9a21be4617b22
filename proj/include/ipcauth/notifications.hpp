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

#ifndef IPCAUTH_NOTIFICATIONS_HPP_
#define IPCAUTH_NOTIFICATIONS_HPP_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ipcauth/binder.hpp"
#include "ipcauth/clock.hpp"
#include "ipcauth/pending_intent.hpp"

namespace ipcauth {

/// Tappable notification. The content intent is mandatory by construction.
struct Notification {
  std::string title;
  std::string text;
  PendingIntentToken contentIntent;
  std::vector<PendingIntentToken> actionIntents;
};

struct StatusBarNotification {
  std::string packageName;
  Tick postTime = 0;
  Notification notification;
};

/// Glyph substituted for each masked digit.
inline constexpr std::string_view kMaskGlyph = "•";

/// Under Android15Masking every maximal run of 4 to 8 ASCII digits becomes an
/// equally long run of kMaskGlyph; otherwise the text is returned unchanged.
std::string mask_sensitive(std::string_view text, PlatformPolicy policy);

/// Length in code points, the unit in which masking preserves length.
std::size_t utf8_length(std::string_view text) noexcept;

using NotificationListener = std::function<void(const StatusBarNotification&)>;

/// Posts notifications and fans them out to every app holding notification
/// access, synchronously and in post order. Text is masked per the device
/// policy; tokens are delivered untouched under every policy.
class NotificationManager {
 public:
  NotificationManager(const Kernel& kernel, const SimClock& clock);

  void post_notification(const ProcessHandle& poster, Notification notification);

  /// Optional hook run on each delivery to `packageName`.
  void set_listener(std::string packageName, NotificationListener listener);

  /// Everything delivered to `packageName`, in order.
  const std::vector<StatusBarNotification>& delivered_to(
      std::string_view packageName) const;
  /// Everything posted, unmasked, in order.
  const std::vector<StatusBarNotification>& posted() const noexcept {
    return posted_;
  }

 private:
  const Kernel& kernel_;
  const SimClock& clock_;
  std::vector<StatusBarNotification> posted_;
  std::map<std::string, std::vector<StatusBarNotification>, std::less<>> inbox_;
  std::map<std::string, NotificationListener, std::less<>> listeners_;
};

/// The listener-side harvest: every token reference in the notification.
/// Throws Errc::NotAListener if `listenerPackage` lacks notification access.
std::vector<PendingIntentToken> on_notification_posted(
    const Device& device, std::string_view listenerPackage,
    const StatusBarNotification& sbn);

/// Attacker-side storage for harvested tokens, keyed by posting package.
class CredentialCache {
 public:
  void store(const std::string& packageName, PendingIntentToken token);
  /// Most recent token harvested from `packageName`.
  std::optional<PendingIntentToken> get(std::string_view packageName) const;
  std::size_t size() const noexcept;

 private:
  std::map<std::string, std::vector<PendingIntentToken>, std::less<>> tokens_;
};

}  // namespace ipcauth

#endif  // IPCAUTH_NOTIFICATIONS_HPP_
