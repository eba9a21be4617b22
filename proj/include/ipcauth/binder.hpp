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

#ifndef IPCAUTH_BINDER_HPP_
#define IPCAUTH_BINDER_HPP_

#include <any>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ipcauth/device.hpp"

namespace ipcauth {

class Kernel;

/// Opaque request/reply body carried by a transaction.
using Parcel = std::any;
using ConnectionId = std::uint64_t;

/// A process identity minted by the kernel for one installed app.
///
/// There is no public constructor: the only way to obtain one is
/// Kernel::mint_handle, which binds it to the app's install-time UID. The
/// handle stays bound to the kernel instance that minted it.
class ProcessHandle {
 public:
  Uid uid() const noexcept { return uid_; }

  friend bool operator==(const ProcessHandle&, const ProcessHandle&) = default;

 private:
  friend class Kernel;
  ProcessHandle(Uid uid, std::uint64_t kernel) : uid_(uid), kernel_(kernel) {}

  Uid uid_;
  std::uint64_t kernel_;
};

/// One IPC call as seen by the service handler. The calling UID is stamped by
/// the kernel and is readable only through Kernel::get_calling_uid while the
/// transaction is the one currently being dispatched.
class Transaction {
 public:
  std::uint64_t id() const noexcept { return id_; }
  ConnectionId connection() const noexcept { return connection_; }
  const Parcel& payload() const noexcept { return payload_; }

 private:
  friend class Kernel;
  Transaction(std::uint64_t kernel, std::uint64_t id, Uid callingUid,
              ConnectionId connection, Parcel payload)
      : kernel_(kernel),
        id_(id),
        calling_uid_(callingUid),
        connection_(connection),
        payload_(std::move(payload)) {}

  std::uint64_t kernel_;
  std::uint64_t id_;
  Uid calling_uid_;
  ConnectionId connection_;
  Parcel payload_;
};

using TransactionHandler = std::function<Parcel(const Transaction&)>;
using CallbackEndpoint = std::function<void(const std::string&)>;

struct ServiceRegistration {
  std::string providerPackage;
  std::string serviceName;
  bool exported = false;
};

class Connection {
 public:
  ConnectionId id() const noexcept { return id_; }
  const ProcessHandle& caller() const noexcept { return caller_; }
  const std::string& provider_package() const noexcept { return provider_; }
  const std::string& service_name() const noexcept { return service_; }

 private:
  friend class Kernel;
  Connection(ConnectionId id, ProcessHandle caller, std::string provider,
             std::string service)
      : id_(id),
        caller_(caller),
        provider_(std::move(provider)),
        service_(std::move(service)) {}

  ConnectionId id_;
  ProcessHandle caller_;
  std::string provider_;
  std::string service_;
};

/// The simulated Binder driver.
///
/// Binding never authenticates; acceptance is always decided by the service
/// handler. Handler execution is serialized, so concurrent transact calls
/// observe a total order.
class Kernel {
 public:
  explicit Kernel(const Device& device);

  Kernel(const Kernel&) = delete;
  Kernel& operator=(const Kernel&) = delete;

  /// Throws Errc::UnknownPackage.
  ProcessHandle mint_handle(std::string_view packageName) const;
  /// False once the app behind the handle is uninstalled, or when the handle
  /// came from another kernel.
  bool is_valid(const ProcessHandle& handle) const;
  /// Throws Errc::HandleInvalid when !is_valid(handle).
  void require_valid(const ProcessHandle& handle) const;
  /// Package of a valid handle.
  std::string package_of(const ProcessHandle& handle) const;

  ServiceRegistration register_service(const ProcessHandle& provider,
                                       std::string serviceName, bool exported,
                                       TransactionHandler handler);
  Connection bind_service(const ProcessHandle& caller,
                          std::string_view providerPackage,
                          std::string_view serviceName);
  /// Synchronous request/reply. Handler exceptions come back as
  /// Errc::HandlerError.
  Parcel transact(const Connection& connection, Parcel payload);
  /// Throws Errc::NotInHandlerScope unless `txn` is the transaction currently
  /// being dispatched.
  Uid get_calling_uid(const Transaction& txn) const;

  void register_callback(const Connection& connection,
                         CallbackEndpoint endpoint);
  /// Provider-side push to the caller's registered endpoint; returns the
  /// delivered message. Throws Errc::NoCallback.
  std::string invoke_callback(ConnectionId connection, std::string message);

  const Device& device() const noexcept { return device_; }
  std::uint64_t transactions_dispatched() const noexcept { return next_txn_ - 1; }

 private:
  struct Service {
    ServiceRegistration registration;
    Uid providerUid;
    TransactionHandler handler;
  };
  struct Link {
    ProcessHandle caller;
    std::pair<std::string, std::string> service;
    CallbackEndpoint callback;
  };

  const Device& device_;
  std::uint64_t id_;
  std::map<std::pair<std::string, std::string>, Service, std::less<>> services_;
  std::map<ConnectionId, Link> links_;
  ConnectionId next_connection_ = 1;
  std::uint64_t next_txn_ = 1;
  std::vector<std::uint64_t> dispatching_;
  std::recursive_mutex dispatch_mutex_;
};

}  // namespace ipcauth

#endif  // IPCAUTH_BINDER_HPP_
