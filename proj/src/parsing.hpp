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

#ifndef VECTX_SRC_PARSING_HPP
#define VECTX_SRC_PARSING_HPP

#include "cursor.hpp"
#include "vectx/type_algebra.hpp"
#include "vectx/value.hpp"

namespace vectx::detail {

// Prefix parsers: consume one item and leave the cursor after it.
VecType parse_type_at(Cursor &cur);
TypeTransform parse_transform_at(Cursor &cur);
Value parse_value_at(Cursor &cur);

}  // namespace vectx::detail

#endif  // VECTX_SRC_PARSING_HPP
