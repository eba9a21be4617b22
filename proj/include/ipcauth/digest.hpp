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

#ifndef IPCAUTH_DIGEST_HPP_
#define IPCAUTH_DIGEST_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace ipcauth {

// SHA-256, lowercase hex. The one digest primitive used for certificate
// hashes and PKCE challenges alike.
std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_hex(std::string_view text);

bool is_lower_hex(std::string_view text) noexcept;

}  // namespace ipcauth

#endif  // IPCAUTH_DIGEST_HPP_
