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

// Dense linear algebra for alphabets up to a few hundred letters: a row-major
// matrix, one-sided Jacobi SVD, inverse, Moore-Penrose pseudo-inverse, null
// space bases and the M matrix whose rows span the row space of a channel.

#ifndef PRIVDESIGN_LINALG_HPP_
#define PRIVDESIGN_LINALG_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "privdesign/error.hpp"

namespace privdesign {

using Vector = std::vector<double>;

class Matrix {
 public:
  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  // `data` is row-major.
  Matrix(std::size_t rows, std::size_t cols, Vector data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "matrix data has " + std::to_string(data_.size()) +
                      " entries, expected " + std::to_string(rows_ * cols_));
    }
  }

  Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) {
        throw Error(ErrorCode::kDimensionMismatch, "ragged matrix literal");
      }
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix diagonal(std::span<const double> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  static Matrix from_columns(std::size_t rows, const std::vector<Vector>& columns) {
    Matrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j].size() != rows) {
        throw Error(ErrorCode::kDimensionMismatch, "column length mismatch");
      }
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<const double> row_span(std::size_t r) const {
    return std::span<const double>(data_).subspan(r * cols_, cols_);
  }

  Vector row(std::size_t r) const {
    auto s = row_span(r);
    return Vector(s.begin(), s.end());
  }

  Vector column(std::size_t c) const {
    Vector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, c);
    return out;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix select_columns(std::span<const std::size_t> idx) const {
    Matrix out(rows_, idx.size());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < idx.size(); ++k) out(i, k) = (*this)(i, idx[k]);
    return out;
  }

  Matrix leading_columns(std::size_t n) const {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    return select_columns(idx);
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](double v) { return std::isfinite(v); });
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Vector data_;
};

inline Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "cannot multiply " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " by " + std::to_string(b.rows()) +
                    "x" + std::to_string(b.cols()));
  }
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline Vector operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "matrix-vector size mismatch");
  }
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

inline Vector operator*(const Matrix& a, const Vector& x) {
  return a * std::span<const double>(x);
}

inline Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "matrix difference size mismatch");
  }
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

inline Matrix operator*(double s, const Matrix& a) {
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = s * a(i, j);
  return c;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double norm1(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += std::abs(v);
  return s;
}

inline double norm_inf(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s = std::max(s, std::abs(v));
  return s;
}

struct SvdResult {
  Matrix u;            // m x k, orthonormal columns
  Vector sigma;        // k values, non-increasing
  Matrix v;            // n x k, orthonormal columns
};

namespace detail {

inline constexpr int kMaxJacobiSweeps = 100;
inline constexpr double kJacobiTolerance = 1e-12;
inline constexpr double kRankTolerance = 1e-12;

// Fills the columns of `q` flagged invalid with unit vectors orthogonal to
// every other column (modified Gram-Schmidt over the standard basis).
inline void complete_orthonormal_columns(Matrix& q, std::vector<bool> valid) {
  const std::size_t m = q.rows();
  std::size_t next_candidate = 0;
  for (std::size_t j = 0; j < q.cols(); ++j) {
    if (valid[j]) continue;
    bool placed = false;
    while (!placed && next_candidate < m) {
      Vector e(m, 0.0);
      e[next_candidate++] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t k = 0; k < q.cols(); ++k) {
          if (!valid[k]) continue;
          double proj = 0.0;
          for (std::size_t i = 0; i < m; ++i) proj += q(i, k) * e[i];
          for (std::size_t i = 0; i < m; ++i) e[i] -= proj * q(i, k);
        }
      }
      const double n = norm2(e);
      if (n > 1e-8) {
        for (std::size_t i = 0; i < m; ++i) q(i, j) = e[i] / n;
        valid[j] = true;
        placed = true;
      }
    }
    if (!placed) {
      throw Error(ErrorCode::kInvalidArgument, "cannot complete orthonormal basis");
    }
  }
}

// Hestenes one-sided Jacobi on a tall (m >= n) matrix. Returns W = A V with
// mutually orthogonal columns together with the accumulated rotations V.
inline std::pair<Matrix, Matrix> one_sided_jacobi(Matrix work) {
  const std::size_t m = work.rows();
  const std::size_t n = work.cols();
  Matrix v = Matrix::identity(n);
  // Columns below this squared norm are rounding noise; rotating them never
  // settles the relative test.
  const double fro = work.frobenius_norm();
  const double noise = (1e-15 * fro) * (1e-15 * fro);
  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          const double wp = work(i, p), wq = work(i, q);
          alpha += wp * wp;
          beta += wq * wq;
          gamma += wp * wq;
        }
        if (gamma == 0.0 || alpha <= noise || beta <= noise ||
            std::abs(gamma) <= kJacobiTolerance * std::sqrt(alpha * beta)) {
          continue;
        }
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double wp = work(i, p), wq = work(i, q);
          work(i, p) = c * wp - s * wq;
          work(i, q) = s * wp + c * wq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) return {std::move(work), std::move(v)};
  }
  throw Error(ErrorCode::kNoConvergence,
              "Jacobi SVD did not converge in " + std::to_string(kMaxJacobiSweeps) +
                  " sweeps");
}

}  // namespace detail

// Thin SVD A = U diag(sigma) V^T with k = min(rows, cols). Each right singular
// vector is sign-normalized so that its first nonzero component is positive.
inline SvdResult svd(const Matrix& a) {
  if (!a.all_finite()) {
    throw Error(ErrorCode::kInvalidArgument, "svd input has non-finite entries");
  }
  const bool wide = a.rows() < a.cols();
  auto [work, rot] = detail::one_sided_jacobi(wide ? a.transpose() : a);
  const std::size_t m = work.rows();
  const std::size_t k = work.cols();

  Vector norms(k);
  for (std::size_t j = 0; j < k; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += work(i, j) * work(i, j);
    norms[j] = std::sqrt(s);
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

  // Columns with negligible norm carry only rounding noise; their left
  // vectors are rebuilt orthogonally instead of normalized.
  const double floor_norm = k == 0 ? 0.0 : detail::kRankTolerance * norms[order[0]];
  Matrix left(m, k);
  Matrix right(k, k);
  Vector sigma(k);
  std::vector<bool> valid(k, false);
  for (std::size_t jj = 0; jj < k; ++jj) {
    const std::size_t j = order[jj];
    sigma[jj] = norms[j];
    for (std::size_t i = 0; i < k; ++i) right(i, jj) = rot(i, j);
    if (norms[j] > floor_norm && norms[j] > 0.0) {
      for (std::size_t i = 0; i < m; ++i) left(i, jj) = work(i, j) / norms[j];
      valid[jj] = true;
    }
  }
  detail::complete_orthonormal_columns(left, valid);

  SvdResult r;
  r.sigma = std::move(sigma);
  if (wide) {
    r.u = std::move(right);
    r.v = std::move(left);
  } else {
    r.u = std::move(left);
    r.v = std::move(right);
  }
  for (std::size_t j = 0; j < k; ++j) {
    double lead = 0.0;
    for (std::size_t i = 0; i < r.v.rows(); ++i) {
      if (std::abs(r.v(i, j)) > 1e-14) {
        lead = r.v(i, j);
        break;
      }
    }
    if (lead < 0.0) {
      for (std::size_t i = 0; i < r.v.rows(); ++i) r.v(i, j) = -r.v(i, j);
      for (std::size_t i = 0; i < r.u.rows(); ++i) r.u(i, j) = -r.u(i, j);
    }
  }
  return r;
}

// Numerical rank with the relative threshold sigma_i / sigma_1 >= 1e-12.
inline std::size_t numerical_rank(const Vector& sigma) {
  if (sigma.empty() || sigma[0] == 0.0) return 0;
  std::size_t r = 0;
  for (double s : sigma) {
    if (s / sigma[0] >= detail::kRankTolerance) ++r;
  }
  return r;
}

inline std::size_t rank(const Matrix& a) { return numerical_rank(svd(a).sigma); }

inline Matrix invert(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "invert requires a square matrix");
  }
  const SvdResult s = svd(a);
  const std::size_t n = a.rows();
  if (n == 0) return Matrix();
  if (s.sigma[0] == 0.0 || s.sigma[n - 1] / s.sigma[0] < detail::kRankTolerance) {
    throw Error(ErrorCode::kSingular, "matrix is numerically singular");
  }
  Matrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += s.v(i, k) * s.u(j, k) / s.sigma[k];
      inv(i, j) = acc;
    }
  return inv;
}

inline Matrix pseudo_inverse(const Matrix& a) {
  const SvdResult s = svd(a);
  const std::size_t r = numerical_rank(s.sigma);
  Matrix pinv(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.cols(); ++i)
    for (std::size_t j = 0; j < a.rows(); ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < r; ++k) acc += s.v(i, k) * s.u(j, k) / s.sigma[k];
      pinv(i, j) = acc;
    }
  return pinv;
}

// Orthonormal basis (as columns) of the null space of `a`.
inline Matrix null_space(const Matrix& a) {
  const SvdResult s = svd(a);
  const std::size_t n = a.cols();
  const std::size_t r = numerical_rank(s.sigma);
  Matrix full(n, n);
  std::vector<bool> valid(n, false);
  for (std::size_t j = 0; j < r; ++j) {
    for (std::size_t i = 0; i < n; ++i) full(i, j) = s.v(i, j);
    valid[j] = true;
  }
  detail::complete_orthonormal_columns(full, valid);
  Matrix basis(n, n - r);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = r; j < n; ++j) basis(i, j - r) = full(i, j);
  return basis;
}

enum class RowSpaceMode {
  kFullRowRank,  // |X| rows; fails unless rank == rows
  kRowSpace,     // rank(A) rows, for arbitrary A
};

// Rows are the leading right singular vectors of the channel matrix, so that
// M y = M y' iff y - y' lies in the null space of the channel.
inline Matrix build_m_matrix(const Matrix& channel,
                             RowSpaceMode mode = RowSpaceMode::kFullRowRank) {
  const SvdResult s = svd(channel);
  const std::size_t r = numerical_rank(s.sigma);
  if (mode == RowSpaceMode::kFullRowRank &&
      (channel.rows() > channel.cols() || r < channel.rows())) {
    throw Error(ErrorCode::kRankDeficient,
                "channel has rank " + std::to_string(r) + " < " +
                    std::to_string(channel.rows()) + " rows");
  }
  const std::size_t keep = mode == RowSpaceMode::kFullRowRank ? channel.rows() : r;
  Matrix m(keep, channel.cols());
  for (std::size_t i = 0; i < keep; ++i)
    for (std::size_t j = 0; j < channel.cols(); ++j) m(i, j) = s.v(j, i);
  return m;
}

// W (I - d d^T / |d|^2): agrees with W on the orthogonal complement of d and
// annihilates d.
inline Matrix projected_operator(const Matrix& w, std::span<const double> direction) {
  if (direction.size() != w.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "direction length != operator columns");
  }
  const double n2 = dot(direction, direction);
  if (!(n2 > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "projection direction must be nonzero");
  }
  const std::size_t n = w.cols();
  Matrix proj = Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) proj(i, j) -= direction[i] * direction[j] / n2;
  return w * proj;
}

}  // namespace privdesign

#endif  // PRIVDESIGN_LINALG_HPP_
