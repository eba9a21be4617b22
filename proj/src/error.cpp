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
#include "ipcauth/error.hpp"

namespace ipcauth {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DuplicatePackage: return "DuplicatePackage";
    case Errc::UnknownPackage: return "UnknownPackage";
    case Errc::RestrictedSettingsBlocked: return "RestrictedSettingsBlocked";
    case Errc::DuplicateService: return "DuplicateService";
    case Errc::ServiceNotFound: return "ServiceNotFound";
    case Errc::NotExported: return "NotExported";
    case Errc::HandleInvalid: return "HandleInvalid";
    case Errc::HandlerError: return "HandlerError";
    case Errc::NotInHandlerScope: return "NotInHandlerScope";
    case Errc::NoCallback: return "NoCallback";
    case Errc::NotAListener: return "NotAListener";
    case Errc::NoActivityContext: return "NoActivityContext";
    case Errc::UnknownFlow: return "UnknownFlow";
    case Errc::CodeMismatch: return "CodeMismatch";
    case Errc::IncompleteOutcomes: return "IncompleteOutcomes";
    case Errc::DuplicateActive: return "DuplicateActive";
    case Errc::NotFound: return "NotFound";
    case Errc::BadProviderCredential: return "BadProviderCredential";
    case Errc::TransportError: return "TransportError";
    case Errc::IoError: return "IoError";
    case Errc::CorruptFile: return "CorruptFile";
    case Errc::UnknownScenario: return "UnknownScenario";
    case Errc::InvalidSpec: return "InvalidSpec";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

}  // namespace ipcauth
