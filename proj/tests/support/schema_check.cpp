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

#include "support/schema_check.hpp"

#include <regex>

namespace ef::testing {

using nlohmann::json;

namespace {

bool has_type(const json &v, const std::string &t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  if (t == "integer") return v.is_number_integer();
  if (t == "number") return v.is_number();
  return false;
}

void check(const json &s, const json &v, const std::string &at, std::vector<std::string> &out) {
  if (s.contains("type")) {
    bool ok = false;
    if (s["type"].is_array()) {
      for (const auto &t : s["type"]) ok = ok || has_type(v, t.get<std::string>());
    } else {
      ok = has_type(v, s["type"].get<std::string>());
    }
    if (!ok) {
      out.push_back(at + ": wrong type");
      return;
    }
  }
  if (s.contains("const") && v != s["const"]) out.push_back(at + ": const mismatch");
  if (s.contains("enum")) {
    bool found = false;
    for (const auto &e : s["enum"]) found = found || e == v;
    if (!found) out.push_back(at + ": not in enum");
  }
  if (s.contains("minimum") && v.is_number() && v.get<double>() < s["minimum"].get<double>()) {
    out.push_back(at + ": below minimum");
  }
  if (s.contains("pattern") && v.is_string() &&
      !std::regex_search(v.get<std::string>(), std::regex(s["pattern"].get<std::string>()))) {
    out.push_back(at + ": pattern mismatch");
  }
  if (v.is_object()) {
    if (s.contains("required")) {
      for (const auto &k : s["required"]) {
        if (!v.contains(k.get<std::string>())) out.push_back(at + ": missing " + k.get<std::string>());
      }
    }
    const json props = s.value("properties", json::object());
    for (const auto &[k, child] : v.items()) {
      if (props.contains(k)) {
        check(props[k], child, at + "/" + k, out);
      } else if (s.contains("additionalProperties") && s["additionalProperties"] == false) {
        out.push_back(at + ": unexpected " + k);
      }
    }
  }
  if (v.is_array() && s.contains("items")) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      check(s["items"], v[i], at + "/" + std::to_string(i), out);
    }
  }
}

}  // namespace

std::vector<std::string> schema_violations(const json &schema, const json &instance) {
  std::vector<std::string> out;
  check(schema, instance, "", out);
  return out;
}

}  // namespace ef::testing
