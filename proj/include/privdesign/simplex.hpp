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

// Dense two-phase primal simplex with Bland's pivoting rule.
//
//   minimize    c^T z
//   subject to  A_eq z  = b_eq
//               A_in z <= b_in
//               z_j >= lower_j   (lower_j may be -infinity)

#ifndef PRIVDESIGN_SIMPLEX_HPP_
#define PRIVDESIGN_SIMPLEX_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "privdesign/error.hpp"
#include "privdesign/linalg.hpp"

namespace privdesign {

struct LpProblem {
  Vector cost;
  Matrix eq_lhs;
  Vector eq_rhs;
  Matrix ineq_lhs;
  Vector ineq_rhs;
  // Empty means every variable is bounded below by 0.
  Vector lower_bounds;

  std::size_t num_variables() const noexcept { return cost.size(); }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

inline std::string_view lp_status_name(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "unknown";
}

struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  Vector z;
  double objective = 0.0;
  std::size_t iterations = 0;
};

namespace detail {

inline constexpr double kPivotTolerance = 1e-9;
inline constexpr double kReducedCostTolerance = 1e-10;
inline constexpr double kPhaseOneTolerance = 1e-9;

class SimplexTableau {
 public:
  SimplexTableau(Matrix a, Vector rhs, std::vector<std::size_t> basis, std::size_t cap)
      : t_(std::move(a)), rhs_(std::move(rhs)), basis_(std::move(basis)), cap_(cap) {}

  std::size_t rows() const { return t_.rows(); }
  std::size_t cols() const { return t_.cols(); }
  const std::vector<std::size_t>& basis() const { return basis_; }
  std::size_t iterations() const { return iterations_; }

  void set_cost(const Vector& c) {
    cost_ = c;
    reduced_.assign(cols(), 0.0);
    for (std::size_t j = 0; j < cols(); ++j) {
      double d = c[j];
      for (std::size_t i = 0; i < rows(); ++i) d -= c[basis_[i]] * t_(i, j);
      reduced_[j] = d;
    }
  }

  double objective() const {
    double v = 0.0;
    for (std::size_t i = 0; i < rows(); ++i) v += cost_[basis_[i]] * rhs_[i];
    return v;
  }

  // Returns false when the objective is unbounded below along an allowed column.
  bool optimize(const std::vector<bool>& allowed) {
    while (true) {
      std::size_t enter = cols();
      for (std::size_t j = 0; j < cols(); ++j) {
        if (allowed[j] && reduced_[j] < -kReducedCostTolerance) {
          enter = j;
          break;
        }
      }
      if (enter == cols()) return true;

      std::size_t leave = rows();
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < rows(); ++i) {
        const double a = t_(i, enter);
        if (a <= kPivotTolerance) continue;
        const double ratio = rhs_[i] / a;
        if (leave == rows() || ratio < best - 1e-12) {
          best = ratio;
          leave = i;
        } else if (ratio <= best + 1e-12 && basis_[i] < basis_[leave]) {
          best = std::min(best, ratio);
          leave = i;
        }
      }
      if (leave == rows()) return false;
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    if (++iterations_ > cap_) {
      throw Error(ErrorCode::kMaxIterations,
                  "simplex exceeded " + std::to_string(cap_) + " pivots");
    }
    const double p = t_(r, c);
    for (std::size_t j = 0; j < cols(); ++j) t_(r, j) /= p;
    rhs_[r] /= p;
    t_(r, c) = 1.0;
    for (std::size_t i = 0; i < rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols(); ++j) t_(i, j) -= f * t_(r, j);
      t_(i, c) = 0.0;
      rhs_[i] -= f * rhs_[r];
      if (rhs_[i] < 0.0 && rhs_[i] > -1e-13) rhs_[i] = 0.0;
    }
    if (!reduced_.empty()) {
      const double f = reduced_[c];
      for (std::size_t j = 0; j < cols(); ++j) reduced_[j] -= f * t_(r, j);
      reduced_[c] = 0.0;
    }
    basis_[r] = c;
  }

  double entry(std::size_t r, std::size_t c) const { return t_(r, c); }

  void drop_row(std::size_t r) {
    Matrix next(rows() - 1, cols());
    Vector next_rhs;
    std::vector<std::size_t> next_basis;
    for (std::size_t i = 0, k = 0; i < rows(); ++i) {
      if (i == r) continue;
      for (std::size_t j = 0; j < cols(); ++j) next(k, j) = t_(i, j);
      next_rhs.push_back(rhs_[i]);
      next_basis.push_back(basis_[i]);
      ++k;
    }
    t_ = std::move(next);
    rhs_ = std::move(next_rhs);
    basis_ = std::move(next_basis);
  }

  Vector primal() const {
    Vector x(cols(), 0.0);
    for (std::size_t i = 0; i < rows(); ++i) x[basis_[i]] = std::max(rhs_[i], 0.0);
    return x;
  }

 private:
  Matrix t_;
  Vector rhs_;
  std::vector<std::size_t> basis_;
  Vector cost_;
  Vector reduced_;
  std::size_t cap_;
  std::size_t iterations_ = 0;
};

inline void validate(const LpProblem& lp) {
  const std::size_t n = lp.num_variables();
  auto check_block = [n](const Matrix& a, const Vector& b, const char* name) {
    if (a.rows() != b.size() || (a.rows() > 0 && a.cols() != n)) {
      throw Error(ErrorCode::kDimensionMismatch, std::string(name) + " block has bad shape");
    }
    if (!a.all_finite()) {
      throw Error(ErrorCode::kInvalidArgument, std::string(name) + " block is not finite");
    }
    for (double v : b)
      if (!std::isfinite(v))
        throw Error(ErrorCode::kInvalidArgument, std::string(name) + " rhs is not finite");
  };
  check_block(lp.eq_lhs, lp.eq_rhs, "equality");
  check_block(lp.ineq_lhs, lp.ineq_rhs, "inequality");
  for (double c : lp.cost)
    if (!std::isfinite(c)) throw Error(ErrorCode::kInvalidArgument, "cost is not finite");
  if (!lp.lower_bounds.empty()) {
    if (lp.lower_bounds.size() != n) {
      throw Error(ErrorCode::kDimensionMismatch, "lower_bounds length != variables");
    }
    for (double l : lp.lower_bounds)
      if (std::isnan(l) || l == std::numeric_limits<double>::infinity())
        throw Error(ErrorCode::kInvalidArgument, "lower bound must be finite or -inf");
  }
}

}  // namespace detail

// Deterministic: the same problem always takes the same pivot sequence.
inline LpSolution solve(const LpProblem& lp) {
  detail::validate(lp);
  const std::size_t n = lp.num_variables();
  const std::size_t m_eq = lp.eq_rhs.size();
  const std::size_t m_in = lp.ineq_rhs.size();
  const std::size_t m = m_eq + m_in;

  Vector lower = lp.lower_bounds.empty() ? Vector(n, 0.0) : lp.lower_bounds;

  // Structural columns: one per bounded variable, two per free variable.
  std::vector<std::size_t> pos_col(n), neg_col(n, SIZE_MAX);
  std::size_t ncols = 0;
  for (std::size_t j = 0; j < n; ++j) {
    pos_col[j] = ncols++;
    if (std::isinf(lower[j])) neg_col[j] = ncols++;
  }
  const std::size_t slack0 = ncols;
  ncols += m_in;

  auto row_coef = [&](std::size_t i, std::size_t j) {
    return i < m_eq ? lp.eq_lhs(i, j) : lp.ineq_lhs(i - m_eq, j);
  };

  Matrix a(m, ncols);
  Vector rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    double b = i < m_eq ? lp.eq_rhs[i] : lp.ineq_rhs[i - m_eq];
    for (std::size_t j = 0; j < n; ++j) {
      const double v = row_coef(i, j);
      if (v == 0.0) continue;
      a(i, pos_col[j]) = v;
      if (neg_col[j] != SIZE_MAX) {
        a(i, neg_col[j]) = -v;
      } else {
        b -= v * lower[j];
      }
    }
    if (i >= m_eq) a(i, slack0 + (i - m_eq)) = 1.0;
    rhs[i] = b;
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (rhs[i] < 0.0) {
      for (std::size_t j = 0; j < ncols; ++j) a(i, j) = -a(i, j);
      rhs[i] = -rhs[i];
    }
  }

  // Slacks with +1 coefficient start basic; every other row gets an artificial.
  std::vector<std::size_t> basis(m);
  std::vector<std::size_t> artificial_rows;
  for (std::size_t i = 0; i < m; ++i) {
    if (i >= m_eq && a(i, slack0 + (i - m_eq)) > 0.0) {
      basis[i] = slack0 + (i - m_eq);
    } else {
      artificial_rows.push_back(i);
    }
  }
  const std::size_t art0 = ncols;
  const std::size_t total = ncols + artificial_rows.size();
  Matrix full(m, total);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < ncols; ++j) full(i, j) = a(i, j);
  for (std::size_t k = 0; k < artificial_rows.size(); ++k) {
    full(artificial_rows[k], art0 + k) = 1.0;
    basis[artificial_rows[k]] = art0 + k;
  }

  const std::size_t cap = 10 * (m + total) * (m + total) + 10;
  detail::SimplexTableau tab(std::move(full), std::move(rhs), std::move(basis), cap);

  LpSolution out;
  std::vector<bool> allowed(total, true);
  if (!artificial_rows.empty()) {
    Vector phase1(total, 0.0);
    for (std::size_t j = art0; j < total; ++j) phase1[j] = 1.0;
    tab.set_cost(phase1);
    tab.optimize(allowed);
    if (tab.objective() > detail::kPhaseOneTolerance) {
      out.status = LpStatus::kInfeasible;
      out.iterations = tab.iterations();
      return out;
    }
    // Pivot remaining artificials out of the basis; rows where that is
    // impossible are linearly dependent and are dropped.
    for (std::size_t i = 0; i < tab.rows();) {
      if (tab.basis()[i] < art0) {
        ++i;
        continue;
      }
      std::size_t best = art0;
      double mag = detail::kPivotTolerance;
      for (std::size_t j = 0; j < art0; ++j) {
        if (std::abs(tab.entry(i, j)) > mag) {
          mag = std::abs(tab.entry(i, j));
          best = j;
        }
      }
      if (best == art0) {
        tab.drop_row(i);
      } else {
        tab.pivot(i, best);
        ++i;
      }
    }
    for (std::size_t j = art0; j < total; ++j) allowed[j] = false;
  }

  Vector phase2(total, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    phase2[pos_col[j]] = lp.cost[j];
    if (neg_col[j] != SIZE_MAX) phase2[neg_col[j]] = -lp.cost[j];
  }
  tab.set_cost(phase2);
  const bool bounded = tab.optimize(allowed);
  out.iterations = tab.iterations();
  if (!bounded) {
    out.status = LpStatus::kUnbounded;
    return out;
  }

  const Vector x = tab.primal();
  out.z.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    out.z[j] = x[pos_col[j]];
    if (neg_col[j] != SIZE_MAX) {
      out.z[j] -= x[neg_col[j]];
    } else {
      out.z[j] += lower[j];
    }
  }
  out.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) out.objective += lp.cost[j] * out.z[j];
  out.status = LpStatus::kOptimal;
  return out;
}

// Largest violation of any constraint or bound at `z`.
inline double max_violation(const LpProblem& lp, std::span<const double> z) {
  double worst = 0.0;
  for (std::size_t i = 0; i < lp.eq_rhs.size(); ++i) {
    worst = std::max(worst, std::abs(dot(lp.eq_lhs.row_span(i), z) - lp.eq_rhs[i]));
  }
  for (std::size_t i = 0; i < lp.ineq_rhs.size(); ++i) {
    worst = std::max(worst, dot(lp.ineq_lhs.row_span(i), z) - lp.ineq_rhs[i]);
  }
  for (std::size_t j = 0; j < z.size(); ++j) {
    const double l = lp.lower_bounds.empty() ? 0.0 : lp.lower_bounds[j];
    if (!std::isinf(l)) worst = std::max(worst, l - z[j]);
  }
  return worst;
}

}  // namespace privdesign

#endif  // PRIVDESIGN_SIMPLEX_HPP_
