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

// l1-budget design for general P_{X|Y}.
//
// Every admissible P_{Y|U=u} lies in the polytope
//
//   S_u = { y >= 0 : M y = M P_Y + eps_u M R J_u },
//
// where the rows of M span the row space of P_{X|Y} and R is a right inverse
// of P_{X|Y} on its range (P_1^-1 placed on an invertible column block, or
// the pseudo-inverse). Conditional entropy is concave, so the optimum sits on
// vertices. A vertex is fixed by an index set Omega of r = rank(P_{X|Y})
// coordinates with M_Omega invertible:
//
//   y_Omega = M_Omega^-1 M P_Y + eps_u M_Omega^-1 M R J_u,   y elsewhere = 0.
//
// Linearizing -H(y) at the base point gives b + eps a.J with l = log(base),
// b = l.base and a = l M_Omega^-1 M R. Substituting eta = P_U(u) y_Omega turns
// the approximate problem for a fixed vertex-per-letter assignment into an LP.

#ifndef PRIVDESIGN_POLYTOPE_HPP_
#define PRIVDESIGN_POLYTOPE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "privdesign/error.hpp"
#include "privdesign/info.hpp"
#include "privdesign/linalg.hpp"
#include "privdesign/mechanism.hpp"
#include "privdesign/prob.hpp"
#include "privdesign/simplex.hpp"

namespace privdesign {

enum class LpMode { kAuto, kFullRowRank, kPseudoInverse };

inline std::string_view lp_mode_name(LpMode m) {
  switch (m) {
    case LpMode::kAuto: return "auto";
    case LpMode::kFullRowRank: return "full-row-rank";
    case LpMode::kPseudoInverse: return "pinv";
  }
  return "unknown";
}

inline constexpr double kBaseFeasibilityMargin = 1e-10;
inline constexpr double kSubsetConditionTolerance = 1e-12;
inline constexpr double kRecoveryTolerance = 1e-7;
inline constexpr double kTieTolerance = 1e-10;

struct ColumnSplit {
  Matrix p1;                            // invertible |X| x |X| block
  std::vector<std::size_t> permutation;  // leading |X| entries index the block
};

// Greedy column selection by partial pivoting: columns are scanned left to
// right and kept when they raise the rank of the block.
inline ColumnSplit split_leakage_matrix(const Matrix& channel) {
  const std::size_t nx = channel.rows();
  const std::size_t ny = channel.cols();
  if (nx > ny) {
    throw Error(ErrorCode::kRankDeficient, "channel has more rows than columns");
  }
  const double scale = std::max(channel.max_abs(), 1e-300);
  Matrix work = channel;
  std::vector<std::size_t> chosen;
  std::vector<bool> row_used(nx, false);
  for (std::size_t j = 0; j < ny && chosen.size() < nx; ++j) {
    std::size_t pivot_row = nx;
    double best = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
      if (!row_used[i] && std::abs(work(i, j)) > best) {
        best = std::abs(work(i, j));
        pivot_row = i;
      }
    }
    if (pivot_row == nx || best <= 1e-10 * scale) continue;
    row_used[pivot_row] = true;
    chosen.push_back(j);
    // Eliminate this pivot from the remaining columns.
    for (std::size_t c = j + 1; c < ny; ++c) {
      const double f = work(pivot_row, c) / work(pivot_row, j);
      if (f == 0.0) continue;
      for (std::size_t i = 0; i < nx; ++i) work(i, c) -= f * work(i, j);
    }
  }
  if (chosen.size() < nx) {
    throw Error(ErrorCode::kRankDeficient,
                "no invertible " + std::to_string(nx) + " x " + std::to_string(nx) +
                    " column block exists");
  }
  ColumnSplit out;
  out.permutation = chosen;
  for (std::size_t j = 0; j < ny; ++j)
    if (std::find(chosen.begin(), chosen.end(), j) == chosen.end()) out.permutation.push_back(j);
  out.p1 = channel.select_columns(chosen);
  return out;
}

// Everything about the instance that does not depend on the assignment.
struct PolytopeModel {
  LpMode mode = LpMode::kFullRowRank;
  std::size_t rank = 0;
  Matrix channel;  // P_{X|Y}
  Vector p_y;
  Vector p_x;
  Matrix m;         // rank x |Y|
  Matrix recovery;  // R, |Y| x |X|
  // G with G M = P_{X|Y}; maps eta-space back to the perturbation xi = eps P_U J.
  Matrix lift;  // |X| x rank
  std::optional<ColumnSplit> split;
};

inline PolytopeModel build_polytope_model(const ProblemInstance& inst, LpMode mode) {
  PolytopeModel model;
  model.channel = inst.p_x_given_y().matrix();
  model.p_y = inst.p_y().values();
  model.p_x = marginal_x(inst).values();
  const std::size_t nx = inst.x_size();
  const std::size_t ny = inst.y_size();
  const std::size_t r = rank(model.channel);
  model.rank = r;
  if (mode == LpMode::kAuto) {
    mode = (r == nx && nx <= ny) ? LpMode::kFullRowRank : LpMode::kPseudoInverse;
  }
  model.mode = mode;
  if (mode == LpMode::kFullRowRank) {
    model.m = build_m_matrix(model.channel, RowSpaceMode::kFullRowRank);
    model.split = split_leakage_matrix(model.channel);
    const Matrix p1_inv = invert(model.split->p1);
    model.recovery = Matrix(ny, nx);
    for (std::size_t k = 0; k < nx; ++k)
      for (std::size_t x = 0; x < nx; ++x)
        model.recovery(model.split->permutation[k], x) = p1_inv(k, x);
    const std::vector<std::size_t> basis(model.split->permutation.begin(),
                                         model.split->permutation.begin() + nx);
    model.lift = model.split->p1 * invert(model.m.select_columns(basis));
  } else {
    model.m = build_m_matrix(model.channel, RowSpaceMode::kRowSpace);
    model.recovery = pseudo_inverse(model.channel);
    model.lift = pseudo_inverse(model.m * model.recovery);
  }
  return model;
}

struct ExtremePoint {
  std::size_t index = 0;
  std::vector<std::size_t> omega;  // sorted, 0-based, size rank
  Vector base;                     // length rank, on omega
  Vector l;                        // log(base); 0 where base is 0
  double b = 0.0;                  // l.base = -H(base), nats
  Vector a;                        // l M_Omega^-1 M R, length |X|
  Matrix offset_map;               // M_Omega^-1 M R, rank x |X|
  // xi = eps P_U J as a linear function of eta: G M_Omega (I - base 1^T).
  Matrix perturbation_map;  // |X| x rank
  std::vector<bool> degenerate;  // base entry is exactly 0

  Vector full_base(std::size_t ny) const {
    Vector y(ny, 0.0);
    for (std::size_t k = 0; k < omega.size(); ++k) y[omega[k]] = base[k];
    return y;
  }

  // The vertex of S_u for perturbation direction J, as a length-|Y| vector.
  Vector vertex(double eps, std::span<const double> j, std::size_t ny) const {
    Vector y = full_base(ny);
    if (eps == 0.0) return y;
    const Vector shift = offset_map * j;
    for (std::size_t k = 0; k < omega.size(); ++k) y[omega[k]] += eps * shift[k];
    return y;
  }

  double entropy_bits() const { return to_bits(-b); }
};

struct RejectedSubset {
  std::vector<std::size_t> omega;
  std::string reason;
};

struct VertexEnumeration {
  std::vector<ExtremePoint> points;
  std::vector<RejectedSubset> rejected;
};

namespace detail {

// Calls fn(subset) for every size-k subset of {0..n-1} in lexicographic order.
template <typename Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(static_cast<const std::vector<std::size_t>&>(idx));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline std::string format_subset(const std::vector<std::size_t>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i] + 1);
  }
  return out + "}";
}

}  // namespace detail

inline VertexEnumeration enumerate_extreme_points(const PolytopeModel& model) {
  VertexEnumeration out;
  const std::size_t r = model.rank;
  const std::size_t ny = model.p_y.size();
  const Vector mpy = model.m * model.p_y;
  const Matrix m_r = model.m * model.recovery;
  detail::for_each_subset(ny, r, [&](const std::vector<std::size_t>& omega) {
    const Matrix m_omega = model.m.select_columns(omega);
    const SvdResult dec = svd(m_omega);
    if (dec.sigma[0] == 0.0 || dec.sigma[r - 1] / dec.sigma[0] < kSubsetConditionTolerance) {
      out.rejected.push_back({omega, "columns of M are linearly dependent"});
      return;
    }
    const Matrix m_inv = invert(m_omega);
    Vector base = m_inv * mpy;
    for (double& v : base) {
      if (v < -kBaseFeasibilityMargin) {
        out.rejected.push_back({omega, "base point has a negative entry"});
        return;
      }
      if (v <= 0.0) v = 0.0;
    }
    double total = 0.0;
    for (double v : base) total += v;
    if (std::abs(total - 1.0) > 1e-8) {
      out.rejected.push_back({omega, "base point does not sum to 1"});
      return;
    }
    ExtremePoint p;
    p.index = out.points.size();
    p.omega = omega;
    p.base = std::move(base);
    p.degenerate.assign(r, false);
    p.l.assign(r, 0.0);
    for (std::size_t k = 0; k < r; ++k) {
      if (p.base[k] > 0.0) {
        p.l[k] = std::log(p.base[k]);
      } else {
        p.degenerate[k] = true;
      }
      p.b += p.l[k] * p.base[k];
    }
    p.offset_map = m_inv * m_r;
    p.a.assign(model.p_x.size(), 0.0);
    for (std::size_t x = 0; x < p.a.size(); ++x)
      for (std::size_t k = 0; k < r; ++k) p.a[x] += p.l[k] * p.offset_map(k, x);
    Matrix centering = Matrix::identity(r);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) centering(i, j) -= p.base[i];
    p.perturbation_map = model.lift * m_omega * centering;
    out.points.push_back(std::move(p));
  });
  return out;
}

inline std::string describe_subset(const std::vector<std::size_t>& omega) {
  return detail::format_subset(omega);
}

struct Assignment {
  std::vector<std::size_t> vertex;  // extreme-point index per letter
  LpMode mode = LpMode::kFullRowRank;
  std::vector<std::size_t> perfect_set;  // letters with eps = 0
};

// Column layout of the LP: per letter with eps > 0 an eta block (rank
// entries) followed by a t block (|X| entries); per zero-budget letter a
// single weight.
struct LpLayout {
  std::vector<std::size_t> offset;
  std::vector<bool> perfect;
  std::size_t rank = 0;
  std::size_t nx = 0;
  std::size_t total = 0;
};

inline LpLayout make_layout(const Assignment& asg, const BudgetVector& budgets, std::size_t r,
                            std::size_t nx) {
  LpLayout lay;
  lay.rank = r;
  lay.nx = nx;
  for (std::size_t u = 0; u < asg.vertex.size(); ++u) {
    lay.offset.push_back(lay.total);
    const bool perfect = budgets[u] == 0.0;
    lay.perfect.push_back(perfect);
    lay.total += perfect ? 1 : r + nx;
  }
  return lay;
}

inline Assignment make_assignment(std::vector<std::size_t> vertex, const PolytopeModel& model,
                                  const BudgetVector& budgets) {
  Assignment a;
  a.vertex = std::move(vertex);
  a.mode = model.mode;
  for (std::size_t u = 0; u < budgets.size(); ++u)
    if (budgets[u] == 0.0) a.perfect_set.push_back(u);
  return a;
}

// Minimizes the linearized H(Y|U) over eta for a fixed assignment.
inline LpProblem assemble_lp(const Assignment& asg, const ProblemInstance& inst,
                             const PolytopeModel& model,
                             const std::vector<ExtremePoint>& points) {
  if (asg.vertex.size() != inst.letters()) {
    throw Error(ErrorCode::kDimensionMismatch, "assignment must name a vertex per letter");
  }
  const std::size_t r = model.rank;
  const std::size_t nx = inst.x_size();
  const std::size_t ny = inst.y_size();
  const LpLayout lay = make_layout(asg, inst.budgets(), r, nx);
  const std::size_t n = lay.total;

  LpProblem lp;
  lp.cost.assign(n, 0.0);
  std::vector<Vector> eq_rows;
  Vector eq_rhs;
  std::vector<Vector> in_rows;
  Vector in_rhs;

  // Marginal: sum of placed eta blocks and weighted bases equals P_Y.
  for (std::size_t y = 0; y < ny; ++y) {
    Vector row(n, 0.0);
    for (std::size_t u = 0; u < asg.vertex.size(); ++u) {
      const ExtremePoint& p = points[asg.vertex[u]];
      for (std::size_t k = 0; k < r; ++k) {
        if (p.omega[k] != y) continue;
        if (lay.perfect[u]) {
          row[lay.offset[u]] += p.base[k];
        } else {
          row[lay.offset[u] + k] += 1.0;
        }
      }
    }
    eq_rows.push_back(std::move(row));
    eq_rhs.push_back(model.p_y[y]);
  }

  // Zero mean: sum_u xi_u = 0.
  for (std::size_t x = 0; x < nx; ++x) {
    Vector row(n, 0.0);
    for (std::size_t u = 0; u < asg.vertex.size(); ++u) {
      if (lay.perfect[u]) continue;
      const ExtremePoint& p = points[asg.vertex[u]];
      for (std::size_t k = 0; k < r; ++k) row[lay.offset[u] + k] += p.perturbation_map(x, k);
    }
    eq_rows.push_back(std::move(row));
    eq_rhs.push_back(0.0);
  }

  for (std::size_t u = 0; u < asg.vertex.size(); ++u) {
    const ExtremePoint& p = points[asg.vertex[u]];
    const std::size_t off = lay.offset[u];
    if (lay.perfect[u]) {
      lp.cost[off] = -p.b;
      continue;
    }
    const double eps = inst.budgets()[u];
    // Cost of eta: -(b 1^T + a^T perturbation_map).
    for (std::size_t k = 0; k < r; ++k) {
      double c = -p.b;
      for (std::size_t x = 0; x < nx; ++x) c -= p.a[x] * p.perturbation_map(x, k);
      lp.cost[off + k] = c;
    }
    // 1^T xi_u = 0.
    {
      Vector row(n, 0.0);
      for (std::size_t k = 0; k < r; ++k)
        for (std::size_t x = 0; x < nx; ++x) row[off + k] += p.perturbation_map(x, k);
      eq_rows.push_back(std::move(row));
      eq_rhs.push_back(0.0);
    }
    // Zero base coordinates have no entropy expansion; keep them at zero.
    for (std::size_t k = 0; k < r; ++k) {
      if (!p.degenerate[k]) continue;
      Vector row(n, 0.0);
      row[off + k] = 1.0;
      eq_rows.push_back(std::move(row));
      eq_rhs.push_back(0.0);
    }
    // |xi_u(x)| <= t_u(x) and sum_x t_u(x) <= eps 1^T eta_u.
    for (std::size_t x = 0; x < nx; ++x) {
      for (double sign : {1.0, -1.0}) {
        Vector row(n, 0.0);
        for (std::size_t k = 0; k < r; ++k) row[off + k] = sign * p.perturbation_map(x, k);
        row[off + r + x] = -1.0;
        in_rows.push_back(std::move(row));
        in_rhs.push_back(0.0);
      }
    }
    Vector budget_row(n, 0.0);
    for (std::size_t k = 0; k < r; ++k) budget_row[off + k] = -eps;
    for (std::size_t x = 0; x < nx; ++x) budget_row[off + r + x] = 1.0;
    in_rows.push_back(std::move(budget_row));
    in_rhs.push_back(0.0);
  }

  auto stack = [n](const std::vector<Vector>& rows) {
    Matrix m(rows.size(), n);
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
    return m;
  };
  lp.eq_lhs = stack(eq_rows);
  lp.eq_rhs = std::move(eq_rhs);
  lp.ineq_lhs = stack(in_rows);
  lp.ineq_rhs = std::move(in_rhs);
  lp.lower_bounds.assign(n, 0.0);
  return lp;
}

// Rebuilds the mechanism from an optimal eta and audits it.
inline MechanismDesign recover_design(const LpSolution& sol, const Assignment& asg,
                                      const ProblemInstance& inst, const PolytopeModel& model,
                                      const std::vector<ExtremePoint>& points) {
  if (sol.status != LpStatus::kOptimal) {
    throw Error(ErrorCode::kNoFeasibleAssignment,
                std::string("LP status is ") + std::string(lp_status_name(sol.status)));
  }
  const std::size_t k = inst.letters();
  const std::size_t r = model.rank;
  const std::size_t nx = inst.x_size();
  const std::size_t ny = inst.y_size();
  const LpLayout lay = make_layout(asg, inst.budgets(), r, nx);

  Vector p_u(k, 0.0);
  std::vector<Vector> columns(k, model.p_y);
  std::vector<Vector> directions(k);
  for (std::size_t u = 0; u < k; ++u) {
    const ExtremePoint& p = points[asg.vertex[u]];
    const std::size_t off = lay.offset[u];
    if (lay.perfect[u]) {
      p_u[u] = sol.z[off];
      if (p_u[u] > kUnusedLetterMass) columns[u] = p.full_base(ny);
      continue;
    }
    Vector eta(sol.z.begin() + off, sol.z.begin() + off + r);
    double mass = 0.0;
    for (double v : eta) mass += v;
    p_u[u] = mass;
    if (mass <= kUnusedLetterMass) continue;
    const double eps = inst.budgets()[u];
    Vector j = p.perturbation_map * eta;
    for (double& v : j) v /= eps * mass;
    Vector y = p.vertex(eps, j, ny);
    for (std::size_t i = 0; i < ny; ++i) {
      if (y[i] < -kRecoveryTolerance) {
        throw Error(ErrorCode::kLeakageViolated,
                    "recovered P_{Y|U=u" + std::to_string(u + 1) + "} leaves the simplex");
      }
      if (y[i] < 0.0) y[i] = 0.0;
    }
    if (model.mode == LpMode::kPseudoInverse) {
      Vector diff(ny);
      for (std::size_t i = 0; i < ny; ++i) diff[i] = y[i] - model.p_y[i];
      Vector resid = model.channel * diff;
      for (std::size_t x = 0; x < nx; ++x) resid[x] -= eps * j[x];
      if (norm_inf(resid) > kRecoveryTolerance) {
        throw Error(ErrorCode::kResidualCheckFailed,
                    "P_{X|Y}(P_{Y|U=u" + std::to_string(u + 1) +
                        "} - P_Y) differs from eps J by " + std::to_string(norm_inf(resid)));
      }
    }
    columns[u] = std::move(y);
    directions[u] = std::move(j);
  }

  double approx = entropy(model.p_y) - sol.objective;
  MechanismDesign d = finalize_design(inst, p_u, columns, approx);
  for (std::size_t u = 0; u < k; ++u) {
    if (!d.used(u)) continue;
    if (!lay.perfect[u]) d.perturbations[u] = Perturbation{directions[u], u};
    if (d.leakages[u] > inst.budgets()[u] + kRecoveryTolerance) {
      throw Error(ErrorCode::kLeakageViolated,
                  "letter " + std::to_string(u + 1) + " leaks " + std::to_string(d.leakages[u]) +
                      " > " + std::to_string(inst.budgets()[u]));
    }
  }
  return d;
}

struct LpDesignResult {
  MechanismDesign design;
  Assignment assignment;
  PolytopeModel model;
  VertexEnumeration vertices;
  std::size_t assignments_tried = 0;
  std::size_t assignments_feasible = 0;
};

namespace detail {

// Lexicographic enumeration of vertex-per-letter assignments. Letters that
// share a budget are interchangeable, so only non-decreasing runs are
// produced inside each group. Branches that can no longer cover the support of
// P_Y are cut.
template <typename Fn>
void for_each_assignment(const std::vector<ExtremePoint>& points, const BudgetVector& budgets,
                         std::span<const double> p_y, Fn&& fn) {
  const std::size_t k = budgets.size();
  const std::size_t ny = p_y.size();
  std::vector<std::vector<bool>> support(points.size(), std::vector<bool>(ny, false));
  std::size_t widest = 0;
  for (std::size_t v = 0; v < points.size(); ++v) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < points[v].omega.size(); ++i) {
      if (points[v].degenerate[i]) continue;
      support[v][points[v].omega[i]] = true;
      ++count;
    }
    widest = std::max(widest, count);
  }
  std::vector<std::size_t> choice(k, 0);
  std::vector<int> cover(ny, 0);
  auto uncovered = [&]() {
    std::size_t c = 0;
    for (std::size_t y = 0; y < ny; ++y)
      if (p_y[y] > 0.0 && cover[y] == 0) ++c;
    return c;
  };
  auto recurse = [&](auto&& self, std::size_t u) -> void {
    if (uncovered() > (k - u) * widest) return;
    if (u == k) {
      fn(static_cast<const std::vector<std::size_t>&>(choice));
      return;
    }
    const std::size_t start = (u > 0 && budgets[u] == budgets[u - 1]) ? choice[u - 1] : 0;
    for (std::size_t v = start; v < points.size(); ++v) {
      choice[u] = v;
      for (std::size_t y = 0; y < ny; ++y) cover[y] += support[v][y];
      self(self, u + 1);
      for (std::size_t y = 0; y < ny; ++y) cover[y] -= support[v][y];
    }
  };
  recurse(recurse, 0);
}

}  // namespace detail

inline std::size_t count_assignments(const std::vector<ExtremePoint>& points,
                                     const BudgetVector& budgets, std::span<const double> p_y) {
  std::size_t n = 0;
  detail::for_each_assignment(points, budgets, p_y, [&](const auto&) { ++n; });
  return n;
}

// Solves one assignment; nullopt when its LP is infeasible or unbounded.
inline std::optional<std::pair<LpSolution, Assignment>> solve_assignment(
    std::vector<std::size_t> vertex, const ProblemInstance& inst, const PolytopeModel& model,
    const std::vector<ExtremePoint>& points) {
  Assignment asg = make_assignment(std::move(vertex), model, inst.budgets());
  LpSolution sol = solve(assemble_lp(asg, inst, model, points));
  if (sol.status != LpStatus::kOptimal) return std::nullopt;
  return std::make_pair(std::move(sol), std::move(asg));
}

inline LpDesignResult design_lp(const ProblemInstance& inst, LpMode mode = LpMode::kAuto) {
  if (inst.divergence() != DivergenceKind::kL1) {
    throw Error(ErrorCode::kModeMismatch, "the extreme-point design requires l1 budgets");
  }
  LpDesignResult res;
  res.model = build_polytope_model(inst, mode);
  res.vertices = enumerate_extreme_points(res.model);
  const auto& points = res.vertices.points;
  if (points.empty()) {
    throw Error(ErrorCode::kNoFeasibleAssignment, "the polytope has no feasible base vertex");
  }

  struct Candidate {
    double approx;
    LpSolution solution;
    Assignment assignment;
  };
  std::vector<Candidate> candidates;
  const double h_y = entropy(res.model.p_y);
  detail::for_each_assignment(
      points, inst.budgets(), res.model.p_y, [&](const std::vector<std::size_t>& choice) {
        ++res.assignments_tried;
        auto solved = solve_assignment(choice, inst, res.model, points);
        if (!solved) return;
        ++res.assignments_feasible;
        const double approx = h_y - solved->first.objective;
        candidates.push_back({approx, std::move(solved->first), std::move(solved->second)});
      });

  // Best approximate utility first; within kTieTolerance the earlier
  // (lexicographically smaller) assignment wins.
  std::vector<bool> taken(candidates.size(), false);
  std::string last_failure = "every assignment LP is infeasible";
  for (std::size_t round = 0; round < candidates.size(); ++round) {
    std::size_t best = candidates.size();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (taken[i]) continue;
      if (best == candidates.size() ||
          candidates[i].approx > candidates[best].approx + kTieTolerance) {
        best = i;
      }
    }
    taken[best] = true;
    try {
      res.design = recover_design(candidates[best].solution, candidates[best].assignment, inst,
                                  res.model, points);
      res.assignment = candidates[best].assignment;
      return res;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kLeakageViolated &&
          e.code() != ErrorCode::kResidualCheckFailed) {
        throw;
      }
      last_failure = e.what();
    }
  }
  throw Error(ErrorCode::kNoFeasibleAssignment, last_failure);
}

}  // namespace privdesign

#endif  // PRIVDESIGN_POLYTOPE_HPP_
