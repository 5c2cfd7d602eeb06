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

// The designed mechanism and its exact audit. Both designers, the oracle and
// the verify command funnel through finalize_design() or assess_filter(), so
// every reported number is recomputed from (P_U, P_{Y|U}) the same way.

#ifndef PRIVDESIGN_MECHANISM_HPP_
#define PRIVDESIGN_MECHANISM_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "privdesign/error.hpp"
#include "privdesign/info.hpp"
#include "privdesign/linalg.hpp"
#include "privdesign/prob.hpp"

namespace privdesign {

struct MechanismDesign {
  Pmf p_u;
  // Column u of P_{Y|U}; empty for letters with P_U(u) <= kUnusedLetterMass.
  std::vector<std::optional<Vector>> p_y_given_u;
  std::vector<std::optional<Vector>> p_x_given_u;
  Channel p_u_given_y;
  // Absent for unused letters and for letters with a zero budget.
  std::vector<std::optional<Perturbation>> perturbations;
  double exact_utility = 0.0;   // nats
  double approx_utility = 0.0;  // nats
  // Realized divergence per letter and the bound it is held to: eps^2 for
  // chi-square budgets, eps for l1 budgets. Unused letters report 0.
  Vector leakages;
  Vector leakage_budgets;
  DivergenceKind divergence = DivergenceKind::kL1;
  std::vector<std::string> warnings;

  std::size_t letters() const noexcept { return p_u.size(); }
  bool used(std::size_t u) const { return p_y_given_u[u].has_value(); }

  std::vector<std::size_t> support() const {
    std::vector<std::size_t> s;
    for (std::size_t u = 0; u < letters(); ++u)
      if (used(u)) s.push_back(u);
    return s;
  }

  // P_{Y|U} as a channel, with unused columns filled by P_Y.
  Matrix p_y_given_u_matrix(std::span<const double> p_y) const {
    Matrix m(p_y.size(), letters());
    for (std::size_t u = 0; u < letters(); ++u)
      for (std::size_t y = 0; y < p_y.size(); ++y)
        m(y, u) = used(u) ? (*p_y_given_u[u])[y] : p_y[y];
    return m;
  }

  // Largest amount by which a letter exceeds its budget (<= 0 when compliant).
  double worst_budget_excess() const {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t u = 0; u < leakages.size(); ++u)
      worst = std::max(worst, leakages[u] - leakage_budgets[u]);
    return worst;
  }
};

inline double leakage_budget(DivergenceKind kind, double eps) {
  return kind == DivergenceKind::kChiSquare ? eps * eps : eps;
}

// Builds the audited design from letter weights and P_{Y|U} columns. Columns of
// letters at or below kUnusedLetterMass are ignored and reported as absent.
inline MechanismDesign finalize_design(const ProblemInstance& inst, std::span<const double> p_u,
                                       const std::vector<Vector>& p_y_given_u,
                                       double approx_utility,
                                       std::vector<std::string> warnings = {}) {
  const std::size_t k = inst.letters();
  const std::size_t ny = inst.y_size();
  if (p_u.size() != k || p_y_given_u.size() != k) {
    throw Error(ErrorCode::kDimensionMismatch, "design needs one weight and column per letter");
  }
  MechanismDesign d;
  d.divergence = inst.divergence();
  d.approx_utility = approx_utility;
  d.warnings = std::move(warnings);

  Vector weights(p_u.begin(), p_u.end());
  for (double& w : weights)
    if (std::abs(w) <= kUnusedLetterMass) w = 0.0;
  d.p_u = Pmf::make(weights, inst.tolerances().stochastic);

  const Pmf& p_x = inst.p_x();
  const Matrix& channel = inst.p_x_given_y().matrix();
  d.p_y_given_u.resize(k);
  d.p_x_given_u.resize(k);
  d.perturbations.resize(k);
  d.leakages.assign(k, 0.0);
  d.leakage_budgets.resize(k);
  Matrix cond(ny, k);
  for (std::size_t u = 0; u < k; ++u) {
    const double eps = inst.budgets()[u];
    d.leakage_budgets[u] = leakage_budget(inst.divergence(), eps);
    if (d.p_u[u] <= kUnusedLetterMass) {
      for (std::size_t y = 0; y < ny; ++y) cond(y, u) = inst.p_y()[y];
      continue;
    }
    const Pmf column = Pmf::make(p_y_given_u[u], inst.tolerances().stochastic);
    for (std::size_t y = 0; y < ny; ++y) cond(y, u) = column[y];
    Vector px_u = channel * column.values();
    d.leakages[u] = divergence(inst.divergence(), px_u, p_x);
    if (eps > 0.0) {
      Vector j(px_u.size());
      for (std::size_t x = 0; x < j.size(); ++x) j[x] = (px_u[x] - p_x[x]) / eps;
      d.perturbations[u] = Perturbation{std::move(j), u};
    }
    d.p_y_given_u[u] = column.values();
    d.p_x_given_u[u] = std::move(px_u);
  }
  d.p_u_given_y = bayes_filter(d.p_u, Channel::make(cond), inst.p_y(), inst.tolerances().mixture);
  d.exact_utility = mutual_information(d.p_u, cond, inst.p_y(), inst.tolerances().mixture);
  return d;
}

// Audits an arbitrary filter P_{U|Y} (K x |Y|, column-stochastic) against the
// instance: P_U = P_{U|Y} P_Y and P_{Y|U=u}(y) = P_{U|Y}(u|y) P_Y(y) / P_U(u).
inline MechanismDesign assess_filter(const ProblemInstance& inst, const Channel& filter) {
  const std::size_t k = inst.letters();
  const std::size_t ny = inst.y_size();
  if (filter.rows() != k || filter.cols() != ny) {
    throw Error(ErrorCode::kDimensionMismatch,
                "filter must be " + std::to_string(k) + " x " + std::to_string(ny));
  }
  Vector p_u = filter.matrix() * inst.p_y().values();
  std::vector<Vector> columns(k, Vector(ny, 0.0));
  for (std::size_t u = 0; u < k; ++u) {
    if (p_u[u] <= kUnusedLetterMass) {
      columns[u] = inst.p_y().values();
      continue;
    }
    for (std::size_t y = 0; y < ny; ++y) columns[u][y] = filter(u, y) * inst.p_y()[y] / p_u[u];
  }
  MechanismDesign d = finalize_design(inst, p_u, columns, 0.0);
  d.approx_utility = d.exact_utility;
  // Keep the caller's filter rather than the one rebuilt through Bayes' rule,
  // which differs on columns where P_Y(y) = 0.
  d.p_u_given_y = filter;
  return d;
}

// Residual of sum_u P_U(u) P_{Y|U=u} = P_Y.
inline double mixture_residual(const MechanismDesign& d, std::span<const double> p_y) {
  Vector mix(p_y.size(), 0.0);
  for (std::size_t u = 0; u < d.letters(); ++u) {
    if (!d.used(u)) continue;
    for (std::size_t y = 0; y < p_y.size(); ++y) mix[y] += d.p_u[u] * (*d.p_y_given_u[u])[y];
  }
  double worst = 0.0;
  for (std::size_t y = 0; y < p_y.size(); ++y) worst = std::max(worst, std::abs(mix[y] - p_y[y]));
  return worst;
}

// max_x |sum_u eps_u P_U(u) J_u(x)|, the zero-mean condition on perturbations.
inline double perturbation_balance_residual(const MechanismDesign& d,
                                            const BudgetVector& budgets) {
  Vector acc;
  for (std::size_t u = 0; u < d.letters(); ++u) {
    if (!d.perturbations[u]) continue;
    const Vector& j = d.perturbations[u]->j;
    if (acc.empty()) acc.assign(j.size(), 0.0);
    for (std::size_t x = 0; x < j.size(); ++x) acc[x] += budgets[u] * d.p_u[u] * j[x];
  }
  return acc.empty() ? 0.0 : norm_inf(acc);
}

// max_u |1^T J_u|.
inline double perturbation_sum_residual(const MechanismDesign& d) {
  double worst = 0.0;
  for (const auto& p : d.perturbations) {
    if (!p) continue;
    double s = 0.0;
    for (double v : p->j) s += v;
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

}  // namespace privdesign

#endif  // PRIVDESIGN_MECHANISM_HPP_
