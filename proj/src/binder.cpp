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
#include "ipcauth/binder.hpp"

#include <algorithm>
#include <atomic>

#include "ipcauth/error.hpp"

namespace ipcauth {

namespace {
std::atomic<std::uint64_t> g_next_kernel_id{1};
}

Kernel::Kernel(const Device& device)
    : device_(device), id_(g_next_kernel_id.fetch_add(1)) {}

ProcessHandle Kernel::mint_handle(std::string_view packageName) const {
  return ProcessHandle(device_.app(packageName).uid, id_);
}

bool Kernel::is_valid(const ProcessHandle& handle) const {
  return handle.kernel_ == id_ && device_.uid_installed(handle.uid_);
}

void Kernel::require_valid(const ProcessHandle& handle) const {
  if (!is_valid(handle)) {
    throw Error(Errc::HandleInvalid,
                "process handle for uid " + std::to_string(handle.uid_));
  }
}

std::string Kernel::package_of(const ProcessHandle& handle) const {
  require_valid(handle);
  return device_.get_packages_for_uid(handle.uid_).front();
}

ServiceRegistration Kernel::register_service(const ProcessHandle& provider,
                                             std::string serviceName,
                                             bool exported,
                                             TransactionHandler handler) {
  auto key = std::make_pair(package_of(provider), std::move(serviceName));
  if (services_.contains(key)) {
    throw Error(Errc::DuplicateService, key.first + "/" + key.second);
  }
  ServiceRegistration registration{key.first, key.second, exported};
  services_.emplace(std::move(key),
                    Service{registration, provider.uid_, std::move(handler)});
  return registration;
}

Connection Kernel::bind_service(const ProcessHandle& caller,
                                std::string_view providerPackage,
                                std::string_view serviceName) {
  require_valid(caller);
  auto key = std::make_pair(std::string(providerPackage), std::string(serviceName));
  auto it = services_.find(key);
  if (it == services_.end()) {
    throw Error(Errc::ServiceNotFound, key.first + "/" + key.second);
  }
  if (!it->second.registration.exported && caller.uid_ != it->second.providerUid) {
    throw Error(Errc::NotExported, key.first + "/" + key.second);
  }
  const ConnectionId id = next_connection_++;
  links_.emplace(id, Link{caller, key, {}});
  return Connection(id, caller, std::move(key.first), std::move(key.second));
}

Parcel Kernel::transact(const Connection& connection, Parcel payload) {
  std::lock_guard lock(dispatch_mutex_);
  auto link = links_.find(connection.id_);
  if (link == links_.end() || link->second.caller != connection.caller_) {
    throw Error(Errc::ServiceNotFound, "connection is not live");
  }
  require_valid(connection.caller_);
  auto service = services_.find(link->second.service);
  if (service == services_.end()) {
    throw Error(Errc::ServiceNotFound, connection.provider_ + "/" + connection.service_);
  }

  // The UID comes from the connection's handle, never from the caller.
  const Transaction txn(id_, next_txn_++, connection.caller_.uid_,
                        connection.id_, std::move(payload));
  dispatching_.push_back(txn.id_);
  struct PopOnExit {
    std::vector<std::uint64_t>& stack;
    ~PopOnExit() { stack.pop_back(); }
  } pop{dispatching_};

  try {
    return service->second.handler(txn);
  } catch (const std::exception& e) {
    throw Error(Errc::HandlerError, e.what());
  }
}

Uid Kernel::get_calling_uid(const Transaction& txn) const {
  if (txn.kernel_ != id_ || dispatching_.empty() || dispatching_.back() != txn.id_) {
    throw Error(Errc::NotInHandlerScope,
                "transaction " + std::to_string(txn.id_) + " is not being dispatched");
  }
  return txn.calling_uid_;
}

void Kernel::register_callback(const Connection& connection,
                               CallbackEndpoint endpoint) {
  auto link = links_.find(connection.id_);
  if (link == links_.end() || link->second.caller != connection.caller_) {
    throw Error(Errc::ServiceNotFound, "connection is not live");
  }
  require_valid(connection.caller_);
  link->second.callback = std::move(endpoint);
}

std::string Kernel::invoke_callback(ConnectionId connection, std::string message) {
  auto link = links_.find(connection);
  if (link == links_.end() || !link->second.callback) {
    throw Error(Errc::NoCallback, "connection " + std::to_string(connection));
  }
  link->second.callback(message);
  return message;
}

}  // namespace ipcauth
