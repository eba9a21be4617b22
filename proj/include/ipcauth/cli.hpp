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

#ifndef IPCAUTH_CLI_HPP_
#define IPCAUTH_CLI_HPP_

#include <iostream>

namespace ipcauth {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;
inline constexpr int kExitUsage = 2;

/// Entry point of the `ipcauth` tool:
///
///   run <scenario> [--trials N] [--seed S] [--platform android14|android15]
///                  [--mutability immutable|mutable] [--format json|md]
///                  [--out PATH] [--spec PATH]
///   matrix [--fixture PATH] [--seed S]
///   table3 [--trials N] [--seed S]
///   serve-registry --port P --db PATH --provider-credential-file PATH [--host H]
///   list
///
/// Returns 0 on success, 1 when results disagree with what is expected of
/// them, 2 on usage errors.
int cli_main(int argc, char** argv, std::ostream& out = std::cout,
             std::ostream& err = std::cerr);

}  // namespace ipcauth

#endif  // IPCAUTH_CLI_HPP_
