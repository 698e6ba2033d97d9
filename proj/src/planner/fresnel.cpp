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

#include "unicycle/planner/fresnel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace unicycle::planner {
namespace {

// 10-point Gauss-Legendre rule on [-1, 1] (positive half; symmetric).
constexpr std::array<double, 5> kNodes = {
    0.1488743389816312108848260, 0.4333953941292471907992659,
    0.6794095682990244062343274, 0.8650633666889845107320967,
    0.9739065285171717200779640};
constexpr std::array<double, 5> kWeights = {
    0.2955242247147528701738930, 0.2692667193099963550912269,
    0.2190863625159820439955349, 0.1494513491505805931457763,
    0.0666713443086881375935688};

constexpr double kAbsTolerance = 1e-12;
constexpr int kMaxDepth = 24;

struct Phase {
  double a, b, c;
  double operator()(double t) const { return (0.5 * a * t + b) * t + c; }
};

std::complex<double> Gauss(const Phase& phase, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  std::complex<double> sum = 0.0;
  for (std::size_t i = 0; i < kNodes.size(); ++i) {
    const double dt = half * kNodes[i];
    sum += kWeights[i] * (std::polar(1.0, phase(mid - dt)) +
                          std::polar(1.0, phase(mid + dt)));
  }
  return half * sum;
}

std::complex<double> Adaptive(const Phase& phase, double lo, double hi,
                              std::complex<double> whole, double tolerance,
                              int depth) {
  const double mid = 0.5 * (lo + hi);
  const std::complex<double> left = Gauss(phase, lo, mid);
  const std::complex<double> right = Gauss(phase, mid, hi);
  const std::complex<double> refined = left + right;
  // Large phases are only known to a few ulps of their magnitude, which caps
  // the attainable accuracy on the panel.
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() *
                       (1.0 + std::abs(phase(mid))) * (hi - lo);
  if (depth >= kMaxDepth ||
      std::abs(refined - whole) <= std::max(tolerance, noise)) {
    return refined;
  }
  return Adaptive(phase, lo, mid, left, 0.5 * tolerance, depth + 1) +
         Adaptive(phase, mid, hi, right, 0.5 * tolerance, depth + 1);
}

}  // namespace

FresnelPair FresnelCS(double a, double b, double c) {
  const Phase phase{a, b, c};
  // Split so that no initial panel spans much more than half a period of the
  // integrand; the adaptive pass then only has to polish.
  const double variation = std::max(std::abs(b), std::abs(a + b)) +
                           0.5 * std::abs(a);
  const int panels =
      std::clamp(static_cast<int>(std::ceil(variation / std::numbers::pi)), 1,
                 1 << 16);
  const double width = 1.0 / panels;
  const double tolerance = kAbsTolerance / panels;
  std::complex<double> total = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double lo = k * width;
    const double hi = (k + 1 == panels) ? 1.0 : lo + width;
    total += Adaptive(phase, lo, hi, Gauss(phase, lo, hi), tolerance, 0);
  }
  return {total.real(), total.imag()};
}

}  // namespace unicycle::planner
