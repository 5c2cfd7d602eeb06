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

// Probability data model. Matrices are column-stochastic everywhere: column j
// of a channel is the conditional pmf given the j-th conditioning outcome, so
// P_X = P_{X|Y} P_Y.

#ifndef PRIVDESIGN_PROB_HPP_
#define PRIVDESIGN_PROB_HPP_

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "privdesign/error.hpp"
#include "privdesign/info.hpp"
#include "privdesign/linalg.hpp"

namespace privdesign {

inline constexpr double kStochasticTolerance = 1e-9;
inline constexpr double kMixtureTolerance = 1e-8;
// Letters whose probability does not exceed this are reported as unused.
inline constexpr double kUnusedLetterMass = 1e-12;

class Pmf {
 public:
  Pmf() = default;

  // Entries in [-tol, tol] are clamped to exactly 0.
  static Pmf make(std::span<const double> values, double tol = kStochasticTolerance) {
    Vector v(values.begin(), values.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!std::isfinite(v[i])) {
        throw Error(ErrorCode::kInvalidArgument,
                    "pmf entry " + std::to_string(i) + " is not finite");
      }
      if (v[i] < -tol) {
        throw Error(ErrorCode::kNegativeMass,
                    "pmf entry " + std::to_string(i) + " = " + std::to_string(v[i]));
      }
      if (std::abs(v[i]) <= tol) v[i] = 0.0;
      sum += v[i];
    }
    if (v.empty() || std::abs(sum - 1.0) > tol) {
      throw Error(ErrorCode::kNotNormalized, "pmf sums to " + std::to_string(sum));
    }
    return Pmf(std::move(v), tol);
  }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const Vector& values() const noexcept { return values_; }
  double tol() const noexcept { return tol_; }
  operator std::span<const double>() const noexcept { return values_; }

  bool strictly_positive() const {
    for (double v : values_)
      if (!(v > 0.0)) return false;
    return true;
  }

 private:
  Pmf(Vector values, double tol) : values_(std::move(values)), tol_(tol) {}

  Vector values_;
  double tol_ = kStochasticTolerance;
};

inline Pmf make_pmf(std::span<const double> values, double tol = kStochasticTolerance) {
  return Pmf::make(values, tol);
}

inline Pmf make_pmf(std::initializer_list<double> values, double tol = kStochasticTolerance) {
  return Pmf::make(std::span<const double>(values.begin(), values.size()), tol);
}

class Channel {
 public:
  Channel() = default;

  static Channel make(Matrix m, double tol = kStochasticTolerance) {
    if (m.rows() == 0 || m.cols() == 0) {
      throw Error(ErrorCode::kDimensionMismatch, "channel must be non-empty");
    }
    for (std::size_t j = 0; j < m.cols(); ++j) {
      double sum = 0.0;
      for (std::size_t i = 0; i < m.rows(); ++i) {
        double& v = m(i, j);
        if (!std::isfinite(v)) {
          throw Error(ErrorCode::kInvalidArgument, "channel entry is not finite");
        }
        if (v < -tol) {
          throw Error(ErrorCode::kNotStochastic,
                      "negative entry at (" + std::to_string(i) + ", " + std::to_string(j) +
                          ")");
        }
        if (v < 0.0) v = 0.0;
        sum += v;
      }
      if (std::abs(sum - 1.0) > tol) {
        throw Error(ErrorCode::kNotStochastic,
                    "column " + std::to_string(j) + " sums to " + std::to_string(sum));
      }
    }
    return Channel(std::move(m));
  }

  std::size_t rows() const noexcept { return m_.rows(); }
  std::size_t cols() const noexcept { return m_.cols(); }
  double operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
  const Matrix& matrix() const noexcept { return m_; }
  Vector column(std::size_t c) const { return m_.column(c); }

 private:
  explicit Channel(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

// Per-letter leakage budgets, bound positionally: epsilons[i] belongs to u_i.
class BudgetVector {
 public:
  BudgetVector() = default;

  static BudgetVector make(Vector epsilons) {
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
      if (!std::isfinite(epsilons[i]) || epsilons[i] < 0.0) {
        throw Error(ErrorCode::kInvalidArgument,
                    "epsilon " + std::to_string(i + 1) + " must be finite and >= 0");
      }
      if (i > 0 && epsilons[i] > epsilons[i - 1]) {
        throw Error(ErrorCode::kBudgetOrder,
                    "epsilons must be non-increasing (epsilon_" + std::to_string(i + 1) +
                        " > epsilon_" + std::to_string(i) + ")");
      }
    }
    return BudgetVector(std::move(epsilons));
  }

  std::size_t size() const noexcept { return eps_.size(); }
  double operator[](std::size_t i) const { return eps_[i]; }
  const Vector& values() const noexcept { return eps_; }
  double largest() const { return eps_.front(); }
  double smallest() const { return eps_.back(); }

  // Same alphabet size with every budget set to `eps`.
  BudgetVector uniform(double eps) const { return make(Vector(eps_.size(), eps)); }

 private:
  explicit BudgetVector(Vector eps) : eps_(std::move(eps)) {}
  Vector eps_;
};

struct Tolerances {
  double stochastic = kStochasticTolerance;
  double mixture = kMixtureTolerance;
};

class ProblemInstance {
 public:
  static ProblemInstance make(Channel p_x_given_y, Pmf p_y, BudgetVector budgets,
                              DivergenceKind divergence, Tolerances tol = {}) {
    if (p_x_given_y.cols() != p_y.size()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "p_x_given_y has " + std::to_string(p_x_given_y.cols()) +
                      " columns but p_y has " + std::to_string(p_y.size()) + " entries");
    }
    if (divergence == DivergenceKind::kKL) {
      throw Error(ErrorCode::kInvalidArgument, "leakage divergence must be chi2 or l1");
    }
    if (budgets.size() < 2) {
      throw Error(ErrorCode::kTooFewLetters,
                  "at least two letters are required; a single letter cannot carry a "
                  "nonzero perturbation");
    }
    Pmf p_x = Pmf::make(p_x_given_y.matrix() * p_y.values(), tol.stochastic);
    return ProblemInstance(std::move(p_x_given_y), std::move(p_y), std::move(p_x),
                           std::move(budgets), divergence, tol);
  }

  // Derives P_Y (column sums) and P_{X|Y} from a joint pmf matrix.
  static ProblemInstance from_joint(const Matrix& p_xy, BudgetVector budgets,
                                    DivergenceKind divergence, Tolerances tol = {}) {
    Vector p_y(p_xy.cols(), 0.0);
    for (std::size_t j = 0; j < p_xy.cols(); ++j)
      for (std::size_t i = 0; i < p_xy.rows(); ++i) p_y[j] += p_xy(i, j);
    Matrix cond(p_xy.rows(), p_xy.cols());
    for (std::size_t j = 0; j < p_xy.cols(); ++j) {
      if (!(p_y[j] > 0.0)) {
        throw Error(ErrorCode::kZeroMarginal,
                    "joint matrix column " + std::to_string(j) + " has no mass");
      }
      for (std::size_t i = 0; i < p_xy.rows(); ++i) cond(i, j) = p_xy(i, j) / p_y[j];
    }
    return make(Channel::make(std::move(cond), tol.stochastic), Pmf::make(p_y, tol.stochastic),
                std::move(budgets), divergence, tol);
  }

  const Channel& p_x_given_y() const noexcept { return p_x_given_y_; }
  const Pmf& p_y() const noexcept { return p_y_; }
  const Pmf& p_x() const noexcept { return p_x_; }
  const BudgetVector& budgets() const noexcept { return budgets_; }
  DivergenceKind divergence() const noexcept { return divergence_; }
  const Tolerances& tolerances() const noexcept { return tol_; }
  std::size_t x_size() const noexcept { return p_x_given_y_.rows(); }
  std::size_t y_size() const noexcept { return p_x_given_y_.cols(); }
  std::size_t letters() const noexcept { return budgets_.size(); }

  ProblemInstance with_budgets(BudgetVector budgets) const {
    return make(p_x_given_y_, p_y_, std::move(budgets), divergence_, tol_);
  }

 private:
  ProblemInstance(Channel c, Pmf p_y, Pmf p_x, BudgetVector b, DivergenceKind d, Tolerances t)
      : p_x_given_y_(std::move(c)),
        p_y_(std::move(p_y)),
        p_x_(std::move(p_x)),
        budgets_(std::move(b)),
        divergence_(d),
        tol_(t) {}

  Channel p_x_given_y_;
  Pmf p_y_;
  Pmf p_x_;
  BudgetVector budgets_;
  DivergenceKind divergence_;
  Tolerances tol_;
};

// P_X = P_{X|Y} P_Y, required strictly positive by both designers.
inline const Pmf& marginal_x(const ProblemInstance& inst) {
  const Pmf& p_x = inst.p_x();
  for (std::size_t i = 0; i < p_x.size(); ++i) {
    if (!(p_x[i] > 0.0)) {
      throw Error(ErrorCode::kZeroMarginal, "P_X(" + std::to_string(i) + ") = 0");
    }
  }
  return p_x;
}

// Direction J of P_{X|U=u} = P_X + eps J for one letter.
struct Perturbation {
  Vector j;
  std::size_t letter_index = 0;  // 0-based

  static Perturbation make(Vector j, std::size_t letter, DivergenceKind kind,
                           std::span<const double> p_x, double tol = kStochasticTolerance) {
    const double sum = std::accumulate(j.begin(), j.end(), 0.0);
    if (std::abs(sum) > tol) {
      throw Error(ErrorCode::kInvalidArgument,
                  "perturbation does not sum to zero (" + std::to_string(sum) + ")");
    }
    const double n = constraint_norm(j, kind, p_x);
    if (n > 1.0 + tol) {
      throw Error(ErrorCode::kBudgetExceeded,
                  "perturbation norm " + std::to_string(n) + " exceeds 1 for letter " +
                      std::to_string(letter + 1));
    }
    return Perturbation{std::move(j), letter};
  }

  // ||J||_1 for l1 budgets, ||[sqrt P_X]^-1 J||_2 for chi-square budgets.
  static double constraint_norm(std::span<const double> j, DivergenceKind kind,
                                std::span<const double> p_x) {
    if (kind == DivergenceKind::kL1) return norm1(j);
    double s = 0.0;
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!(p_x[i] > 0.0)) {
        throw Error(ErrorCode::kZeroMarginal, "P_X has a zero entry");
      }
      s += j[i] * j[i] / p_x[i];
    }
    return std::sqrt(s);
  }
};

inline Perturbation perturbation_from_conditional(const Pmf& p_x_given_u, const Pmf& p_x,
                                                  double eps,
                                                  DivergenceKind kind = DivergenceKind::kL1,
                                                  std::size_t letter = 0) {
  if (!(eps > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "eps must be positive");
  }
  if (p_x_given_u.size() != p_x.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "conditional and marginal differ in length");
  }
  Vector j(p_x.size());
  for (std::size_t i = 0; i < j.size(); ++i) j[i] = (p_x_given_u[i] - p_x[i]) / eps;
  return Perturbation::make(std::move(j), letter, kind, p_x.values(), 1e-9);
}

// P_{U|Y}(u|y) = P_U(u) P_{Y|U}(y|u) / P_Y(y).
inline Channel bayes_filter(const Pmf& p_u, const Channel& p_y_given_u, const Pmf& p_y,
                            double mixture_tol = kMixtureTolerance) {
  const std::size_t k = p_u.size();
  const std::size_t ny = p_y.size();
  if (p_y_given_u.cols() != k || p_y_given_u.rows() != ny) {
    throw Error(ErrorCode::kDimensionMismatch, "bayes_filter shape mismatch");
  }
  Matrix joint(k, ny);
  for (std::size_t u = 0; u < k; ++u)
    for (std::size_t y = 0; y < ny; ++y) joint(u, y) = p_u[u] * p_y_given_u(y, u);

  Matrix filter(k, ny);
  for (std::size_t y = 0; y < ny; ++y) {
    double mass = 0.0;
    for (std::size_t u = 0; u < k; ++u) mass += joint(u, y);
    if (std::abs(mass - p_y[y]) > mixture_tol) {
      throw Error(ErrorCode::kMixtureMismatch,
                  "mixture of conditionals differs from P_Y at index " + std::to_string(y));
    }
    if (p_y[y] <= 0.0) {
      if (mass > kMixtureTolerance) {
        throw Error(ErrorCode::kZeroSupport,
                    "P_Y(" + std::to_string(y) + ") = 0 but conditionals place mass there");
      }
      // Unreachable column: send it to the heaviest letter.
      std::size_t heaviest = 0;
      for (std::size_t u = 1; u < k; ++u)
        if (p_u[u] > p_u[heaviest]) heaviest = u;
      filter(heaviest, y) = 1.0;
      continue;
    }
    for (std::size_t u = 0; u < k; ++u) filter(u, y) = joint(u, y) / mass;
  }
  return Channel::make(std::move(filter), kStochasticTolerance);
}

}  // namespace privdesign

#endif  // PRIVDESIGN_PROB_HPP_
