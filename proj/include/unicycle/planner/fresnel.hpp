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

#ifndef UNICYCLE_PLANNER_FRESNEL_HPP_
#define UNICYCLE_PLANNER_FRESNEL_HPP_

namespace unicycle::planner {

struct FresnelPair {
  double c = 0.0;
  double s = 0.0;
};

// Generalized Fresnel integrals over the unit interval:
//   C = int_0^1 cos(a/2 t^2 + b t + c) dt,  S = int_0^1 sin(a/2 t^2 + b t + c) dt.
// Absolute error is below 1e-10 for any finite (a, b, c).
FresnelPair FresnelCS(double a, double b, double c);

}  // namespace unicycle::planner

#endif  // UNICYCLE_PLANNER_FRESNEL_HPP_
