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

#ifndef EF_CSV_HPP_
#define EF_CSV_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ef::csv {

/// One physical line with its 1-based line number.
struct Row {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

/// Splits text into rows of fields (RFC 4180 quoting; no embedded newlines).
/// Blank lines are skipped; a trailing '\r' and a leading UTF-8 BOM are
/// dropped.
std::vector<Row> read_rows(std::string_view text);

std::vector<std::string> split_line(std::string_view line);

/// Quotes a field only when it contains a comma, quote or leading/trailing
/// whitespace.
std::string quote(std::string_view field);

/// Base-10 non-negative integer without sign, separators or whitespace.
std::optional<std::int64_t> parse_count(std::string_view text);

std::optional<double> parse_double(std::string_view text);

}  // namespace ef::csv

#endif  // EF_CSV_HPP_
