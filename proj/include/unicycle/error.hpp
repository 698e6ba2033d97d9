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

#ifndef UNICYCLE_ERROR_HPP_
#define UNICYCLE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace unicycle {

// Failure categories shared by every module. The numeric values are part of
// the C API (see unicycle.h) and must not be reordered.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kNonPositiveLength = 2,
  kNoSolution = 3,
  kDegenerate = 4,
  kZeroSpeedPair = 5,
  kOutOfRange = 6,
  kDiscontinuousChain = 7,
  kTiltSingular = 8,
  kPathSingular = 9,
  kLiftOff = 10,
  kNoOscillatoryBand = 11,
  kPlacementSingular = 12,
  kUnstableResidualPole = 13,
  kFell = 14,
  kEmptyTrace = 15,
  kConfig = 16,
  kIo = 17,
  kInternal = 18,
};

const char* ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace unicycle

#endif  // UNICYCLE_ERROR_HPP_
