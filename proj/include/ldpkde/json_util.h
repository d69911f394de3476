// Copyright 2026 The ldpkde Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LDPKDE_JSON_UTIL_H_
#define LDPKDE_JSON_UTIL_H_

#include <string>

#include "json.hpp"

namespace ldpkde {

// Serializes like nlohmann::json::dump(2) except that floating values are
// written with 17 significant digits and non-finite values as null.
std::string DumpJson(const nlohmann::json& value);

}  // namespace ldpkde

#endif  // LDPKDE_JSON_UTIL_H_
