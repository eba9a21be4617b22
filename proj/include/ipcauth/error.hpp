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

#ifndef IPCAUTH_ERROR_HPP_
#define IPCAUTH_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ipcauth {

enum class Errc {
  InvalidArgument,
  // device
  DuplicatePackage,
  UnknownPackage,
  RestrictedSettingsBlocked,
  // kernel
  DuplicateService,
  ServiceNotFound,
  NotExported,
  HandleInvalid,
  HandlerError,
  NotInHandlerScope,
  NoCallback,
  // notifications
  NotAListener,
  // mechanisms
  NoActivityContext,
  UnknownFlow,
  CodeMismatch,
  IncompleteOutcomes,
  // registry
  DuplicateActive,
  NotFound,
  BadProviderCredential,
  TransportError,
  IoError,
  CorruptFile,
  // harness
  UnknownScenario,
  InvalidSpec,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure surfaced by the simulator. The code is the contract; the
/// message is for humans.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ipcauth

#endif  // IPCAUTH_ERROR_HPP_
