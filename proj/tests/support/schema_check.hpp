// Copyright 2026 The ef Authors.
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

#ifndef EF_TESTS_SUPPORT_SCHEMA_CHECK_HPP_
#define EF_TESTS_SUPPORT_SCHEMA_CHECK_HPP_

#include <string>
#include <vector>

#include <json.hpp>

namespace ef::testing {

/// Subset of JSON Schema: type, required, properties, additionalProperties
/// (bool), items, enum, const, minimum, pattern. Returns violations as
/// "<pointer>: <reason>"; empty means valid.
std::vector<std::string> schema_violations(const nlohmann::json &schema,
                                           const nlohmann::json &instance);

}  // namespace ef::testing

#endif  // EF_TESTS_SUPPORT_SCHEMA_CHECK_HPP_
