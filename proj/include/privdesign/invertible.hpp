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

// Closed-form design for square invertible P_{X|Y} under chi-square budgets.
//
// With P_{X|U=u} = P_X + eps_u [sqrt P_X] L_u, |L_u| <= 1 and L_u orthogonal to
// sqrt P_X, the second-order utility is (1/2) sum_u P_U(u) eps_u^2 |W L_u|^2
// where W = [sqrt P_Y]^-1 P_{X|Y}^-1 [sqrt P_X]. The optimum puts all mass on
// the two largest budgets, in opposite directions along the top right singular
// vector of W restricted to the complement of sqrt P_X.

#ifndef PRIVDESIGN_INVERTIBLE_HPP_
#define PRIVDESIGN_INVERTIBLE_HPP_

#include <cmath>
#include <cstddef>
#include <string>
#include <tuple>
#include <vector>

#include "privdesign/error.hpp"
#include "privdesign/info.hpp"
#include "privdesign/linalg.hpp"
#include "privdesign/mechanism.hpp"
#include "privdesign/prob.hpp"

namespace privdesign {

// Constructed conditionals may dip this far below zero before the design is
// rejected as outside the local regime.
inline constexpr double kNegativeEntryTolerance = 1e-12;

struct SpectralDesign {
  Matrix w;
  Matrix w_inverse_channel;  // P_{X|Y}^-1
  double sigma_max = 0.0;
  Vector l_star;  // unit norm, orthogonal to sqrt(P_X)
  double approx_utility = 0.0;
};

inline SpectralDesign compute_w(const ProblemInstance& inst) {
  const std::size_t n = inst.x_size();
  if (inst.y_size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "closed-form design needs a square channel, got " + std::to_string(n) + " x " +
                    std::to_string(inst.y_size()));
  }
  const Pmf& p_x = marginal_x(inst);
  const Pmf& p_y = inst.p_y();
  if (!p_y.strictly_positive()) {
    throw Error(ErrorCode::kZeroMarginal, "P_Y must be strictly positive");
  }
  SpectralDesign s;
  s.w_inverse_channel = invert(inst.p_x_given_y().matrix());
  Vector sqrt_px(n);
  for (std::size_t i = 0; i < n; ++i) sqrt_px[i] = std::sqrt(p_x[i]);
  s.w = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      s.w(i, j) = s.w_inverse_channel(i, j) * sqrt_px[j] / std::sqrt(p_y[i]);

  const SvdResult dec = svd(projected_operator(s.w, sqrt_px));
  s.sigma_max = dec.sigma[0];
  s.l_star = dec.v.column(0);
  // Remove round-off along sqrt(P_X) and renormalize.
  const double along = dot(s.l_star, sqrt_px);
  for (std::size_t i = 0; i < n; ++i) s.l_star[i] -= along * sqrt_px[i];
  const double nrm = norm2(s.l_star);
  for (double& v : s.l_star) v /= nrm;
  return s;
}

inline double closed_form_utility(double eps1, double eps2, double sigma_max) {
  return 0.5 * eps1 * eps2 * sigma_max * sigma_max;
}

inline MechanismDesign design_invertible(const ProblemInstance& inst) {
  if (inst.divergence() != DivergenceKind::kChiSquare) {
    throw Error(ErrorCode::kModeMismatch, "the closed-form design requires chi2 budgets");
  }
  SpectralDesign s = compute_w(inst);
  const std::size_t k = inst.letters();
  const std::size_t n = inst.y_size();
  const double eps1 = inst.budgets()[0];
  const double eps2 = inst.budgets()[1];

  std::vector<Vector> columns(k, inst.p_y().values());
  Vector p_u(k, 0.0);
  if (eps2 == 0.0) {
    p_u[0] = 1.0;
    return finalize_design(inst, p_u, columns, 0.0,
                           {"DegenerateBudget: eps_2 = 0 forces every perturbation to vanish; "
                            "returning the constant mechanism"});
  }

  p_u[0] = eps2 / (eps1 + eps2);
  p_u[1] = eps1 / (eps1 + eps2);
  Vector scaled(n);
  for (std::size_t i = 0; i < n; ++i) scaled[i] = std::sqrt(inst.p_x()[i]) * s.l_star[i];
  const Vector dy = s.w_inverse_channel * scaled;
  for (std::size_t y = 0; y < n; ++y) {
    columns[0][y] = inst.p_y()[y] + eps1 * dy[y];
    columns[1][y] = inst.p_y()[y] - eps2 * dy[y];
  }
  for (std::size_t u = 0; u < 2; ++u) {
    for (double& v : columns[u]) {
      if (v < -kNegativeEntryTolerance) {
        throw Error(ErrorCode::kEpsilonTooLarge,
                    "P_{Y|U=u" + std::to_string(u + 1) + "} has a negative entry " +
                        std::to_string(v) + "; reduce the budgets");
      }
      if (v < 0.0) v = 0.0;
    }
  }
  s.approx_utility = closed_form_utility(eps1, eps2, s.sigma_max);
  return finalize_design(
      inst, p_u, columns, s.approx_utility,
      {"P_{Y|U=u} is built as P_Y + eps_u P_{X|Y}^-1 [sqrt P_X] L_u (base vector P_Y)"});
}

struct SandwichBounds {
  double lower = 0.0;
  double mid = 0.0;
  double upper = 0.0;
};

// Second-order utilities for uniform budgets eps_K, the design's (eps_1,
// eps_2), and uniform budgets eps_1.
inline SandwichBounds sandwich_bounds(const ProblemInstance& inst) {
  const SpectralDesign s = compute_w(inst);
  const BudgetVector& b = inst.budgets();
  return {closed_form_utility(b.smallest(), b.smallest(), s.sigma_max),
          closed_form_utility(b[0], b[1], s.sigma_max),
          closed_form_utility(b[0], b[0], s.sigma_max)};
}

}  // namespace privdesign

#endif  // PRIVDESIGN_INVERTIBLE_HPP_
