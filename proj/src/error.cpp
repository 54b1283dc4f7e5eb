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

#include "ef/error.hpp"

namespace ef {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedRow: return "MalformedRow";
    case ErrorCode::kInvariantViolation: return "InvariantViolation";
    case ErrorCode::kUnknownLeader: return "UnknownLeader";
    case ErrorCode::kZeroRegistered: return "ZeroRegistered";
    case ErrorCode::kUnknownParty: return "UnknownParty";
    case ErrorCode::kDegenerateX: return "DegenerateX";
    case ErrorCode::kBadBinWidth: return "BadBinWidth";
    case ErrorCode::kEmptyReferenceWindow: return "EmptyReferenceWindow";
    case ErrorCode::kRosterMismatch: return "RosterMismatch";
    case ErrorCode::kUnitMismatch: return "UnitMismatch";
    case ErrorCode::kPairMismatch: return "PairMismatch";
    case ErrorCode::kEmptySeries: return "EmptySeries";
    case ErrorCode::kMissingSeries: return "MissingSeries";
    case ErrorCode::kInvalidModel: return "InvalidModel";
    case ErrorCode::kInfeasibleScenario: return "InfeasibleScenario";
    case ErrorCode::kNonPositiveInput: return "NonPositiveInput";
    case ErrorCode::kBadCounts: return "BadCounts";
    case ErrorCode::kEmptyPlot: return "EmptyPlot";
    case ErrorCode::kBadArgument: return "BadArgument";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace ef
