// Copyright 2026 The Unicycle Lab Authors
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

#include "unicycle/error.hpp"

namespace unicycle {

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk: return "Ok";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNonPositiveLength: return "NonPositiveLength";
    case ErrorCode::kNoSolution: return "NoSolution";
    case ErrorCode::kDegenerate: return "Degenerate";
    case ErrorCode::kZeroSpeedPair: return "ZeroSpeedPair";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kDiscontinuousChain: return "DiscontinuousChain";
    case ErrorCode::kTiltSingular: return "TiltSingular";
    case ErrorCode::kPathSingular: return "PathSingular";
    case ErrorCode::kLiftOff: return "LiftOff";
    case ErrorCode::kNoOscillatoryBand: return "NoOscillatoryBand";
    case ErrorCode::kPlacementSingular: return "PlacementSingular";
    case ErrorCode::kUnstableResidualPole: return "UnstableResidualPole";
    case ErrorCode::kFell: return "Fell";
    case ErrorCode::kEmptyTrace: return "EmptyTrace";
    case ErrorCode::kConfig: return "Config";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

}  // namespace unicycle
