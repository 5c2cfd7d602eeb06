// Copyright 2026 The privdesign Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Random instance generators shared by the unit, property and acceptance
// suites. All draws come from a caller-owned mt19937_64 so runs are
// reproducible.

#ifndef PRIVDESIGN_TESTS_TEST_SUPPORT_HPP_
#define PRIVDESIGN_TESTS_TEST_SUPPORT_HPP_

#include <algorithm>
#include <cstddef>
#include <random>
#include <vector>

#include "privdesign/privdesign.hpp"

namespace privdesign::testing {

using Rng = std::mt19937_64;

inline Vector dirichlet(Rng& rng, std::size_t n, double alpha = 1.0) {
  std::gamma_distribution<double> g(alpha, 1.0);
  Vector v(n);
  double s = 0.0;
  for (double& x : v) s += (x = g(rng));
  for (double& x : v) x /= s;
  return v;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// P_Y bounded away from zero: half uniform, half Dirichlet(1).
inline Vector spread_pmf(Rng& rng, std::size_t n) {
  Vector d = dirichlet(rng, n);
  for (double& x : d) x = 0.5 / static_cast<double>(n) + 0.5 * x;
  return d;
}

// Column-stochastic and diagonally dominant, hence invertible and well
// conditioned: column j is (1 - mix) e_j + mix * Dirichlet.
inline Matrix dominant_channel(Rng& rng, std::size_t n, double mix_lo = 0.2,
                               double mix_hi = 0.5) {
  Matrix m(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const double mix = uniform(rng, mix_lo, mix_hi);
    const Vector d = dirichlet(rng, n);
    for (std::size_t i = 0; i < n; ++i) m(i, j) = mix * d[i] + (i == j ? 1.0 - mix : 0.0);
  }
  return m;
}

// |X| x |Y| channel with Dirichlet(1) columns (full row rank almost surely).
inline Matrix random_channel(Rng& rng, std::size_t nx, std::size_t ny) {
  Matrix m(nx, ny);
  for (std::size_t j = 0; j < ny; ++j) {
    const Vector d = dirichlet(rng, nx);
    for (std::size_t i = 0; i < nx; ++i) m(i, j) = d[i];
  }
  return m;
}

// Non-increasing budgets drawn from [lo, hi].
inline Vector sorted_budgets(Rng& rng, std::size_t k, double lo, double hi) {
  Vector e(k);
  for (double& x : e) x = uniform(rng, lo, hi);
  std::sort(e.begin(), e.end(), std::greater<>());
  return e;
}

inline ProblemInstance invertible_instance(Rng& rng, std::size_t n, Vector eps) {
  return ProblemInstance::make(Channel::make(dominant_channel(rng, n)),
                               Pmf::make(spread_pmf(rng, n)), BudgetVector::make(std::move(eps)),
                               DivergenceKind::kChiSquare);
}

inline ProblemInstance l1_instance(Rng& rng, std::size_t nx, std::size_t ny, Vector eps) {
  return ProblemInstance::make(Channel::make(random_channel(rng, nx, ny)),
                               Pmf::make(spread_pmf(rng, ny)), BudgetVector::make(std::move(eps)),
                               DivergenceKind::kL1);
}

// The symmetric binary channel [[1-d, d], [d, 1-d]] with uniform P_Y.
inline ProblemInstance symmetric_instance(double delta, Vector eps,
                                          DivergenceKind kind = DivergenceKind::kChiSquare) {
  return ProblemInstance::make(Channel::make(Matrix{{1 - delta, delta}, {delta, 1 - delta}}),
                               make_pmf({0.5, 0.5}), BudgetVector::make(std::move(eps)), kind);
}

// Index of the vertex of `points` closest to y, with its distance.
inline std::pair<std::size_t, double> nearest_vertex(const std::vector<ExtremePoint>& points,
                                                     std::span<const double> y, double eps,
                                                     std::span<const double> j) {
  std::size_t best = points.size();
  double dist = 1e300;
  for (const auto& p : points) {
    const Vector v = p.vertex(eps, j, y.size());
    double d = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) d = std::max(d, std::abs(v[i] - y[i]));
    if (d < dist) {
      dist = d;
      best = p.index;
    }
  }
  return {best, dist};
}

}  // namespace privdesign::testing

#endif  // PRIVDESIGN_TESTS_TEST_SUPPORT_HPP_
