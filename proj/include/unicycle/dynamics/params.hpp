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

#ifndef UNICYCLE_DYNAMICS_PARAMS_HPP_
#define UNICYCLE_DYNAMICS_PARAMS_HPP_

namespace unicycle::dynamics {

// Physical constants of the wheel, lateral mass and pendulum (SI units).
struct UnicycleParams {
  double m = 4.0;    // wheel mass
  double m1 = 10.0;  // lateral point mass
  double m2 = 10.0;  // pendulum point mass
  double h = 0.3;    // pendulum length
  double R = 0.3;    // wheel radius
  double g = 9.81;

  // Throws kInvalidArgument unless every field is finite and positive.
  void Validate() const;
};

}  // namespace unicycle::dynamics

#endif  // UNICYCLE_DYNAMICS_PARAMS_HPP_
