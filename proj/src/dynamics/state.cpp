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

#include "unicycle/dynamics/state.hpp"

#include <cmath>
#include <sstream>

#include "unicycle/dynamics/params.hpp"
#include "unicycle/error.hpp"

namespace unicycle::dynamics {

void UnicycleParams::Validate() const {
  const struct {
    const char* name;
    double value;
  } fields[] = {{"m", m}, {"m1", m1}, {"m2", m2}, {"h", h}, {"R", R}, {"g", g}};
  for (const auto& f : fields) {
    if (!(f.value > 0.0) || !std::isfinite(f.value)) {
      std::ostringstream msg;
      msg << "parameter " << f.name << " must be finite and positive, got "
          << f.value;
      throw Error(ErrorCode::kInvalidArgument, msg.str());
    }
  }
}

Vector12 State::ToVector() const {
  Vector12 v;
  v << omega1, sigma_r, r, theta, omega3, chi, eps, omega2, sigma_gamma, gamma,
      phi, s;
  return v;
}

State State::FromVector(const Vector12& v) {
  return {v[0], v[1], v[2], v[3], v[4],  v[5],
          v[6], v[7], v[8], v[9], v[10], v[11]};
}

State State::StraightRolling(double phidot, double R) {
  State x;
  x.omega2 = phidot;
  x.sigma_gamma = phidot * R;
  return x;
}

Vector5 PseudovelocitiesOf(const State& x) {
  Vector5 sigma;
  sigma << x.omega1, x.omega2, x.omega3, x.sigma_r, x.sigma_gamma;
  return sigma;
}

}  // namespace unicycle::dynamics
