// Copyright 2026 The vectx Authors
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


#ifndef VECTX_CLI_HPP
#define VECTX_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace vectx::cli {

// Exit codes: 0 ok, 1 parse, 2 type, 3 derivation, 4 verification, 5 I/O.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace vectx::cli

#endif  // VECTX_CLI_HPP
