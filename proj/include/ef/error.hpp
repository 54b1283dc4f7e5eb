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

#ifndef EF_ERROR_HPP_
#define EF_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ef {

enum class ErrorCode {
  kMalformedRow,
  kInvariantViolation,
  kUnknownLeader,
  kZeroRegistered,
  kUnknownParty,
  kDegenerateX,
  kBadBinWidth,
  kEmptyReferenceWindow,
  kRosterMismatch,
  kUnitMismatch,
  kPairMismatch,
  kEmptySeries,
  kMissingSeries,
  kInvalidModel,
  kInfeasibleScenario,
  kNonPositiveInput,
  kBadCounts,
  kEmptyPlot,
  kBadArgument,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Every library failure is reported through this type; the code is what
// callers (and the CLI's `ERROR <code>:` lines) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &message) {
  throw Error(code, message);
}

}  // namespace ef

#endif  // EF_ERROR_HPP_
