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

// Exact divergences and information quantities. Everything is in nats; use
// to_bits() at reporting boundaries. 0 log 0 is taken as 0 throughout.

#ifndef PRIVDESIGN_INFO_HPP_
#define PRIVDESIGN_INFO_HPP_

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <string_view>

#include "privdesign/error.hpp"
#include "privdesign/linalg.hpp"

namespace privdesign {

enum class DivergenceKind { kKL, kChiSquare, kL1 };

inline std::string_view divergence_name(DivergenceKind kind) {
  switch (kind) {
    case DivergenceKind::kKL: return "kl";
    case DivergenceKind::kChiSquare: return "chi2";
    case DivergenceKind::kL1: return "l1";
  }
  return "unknown";
}

inline double to_bits(double nats) { return nats / std::numbers::ln2; }
inline double to_nats(double bits) { return bits * std::numbers::ln2; }

namespace detail {
inline void require_same_length(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "distributions have lengths " + std::to_string(p.size()) + " and " +
                    std::to_string(q.size()));
  }
}
}  // namespace detail

inline double kl(std::span<const double> p, std::span<const double> q) {
  detail::require_same_length(p, q);
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) {
      throw Error(ErrorCode::kSupportViolation,
                  "p has mass at index " + std::to_string(i) + " where q is zero");
    }
    d += p[i] * std::log(p[i] / q[i]);
  }
  return std::max(d, 0.0);
}

inline double chi_square(std::span<const double> p, std::span<const double> q) {
  detail::require_same_length(p, q);
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (q[i] <= 0.0) {
      throw Error(ErrorCode::kZeroReference,
                  "reference distribution is zero at index " + std::to_string(i));
    }
    const double diff = p[i] - q[i];
    d += diff * diff / q[i];
  }
  return d;
}

inline double l1(std::span<const double> p, std::span<const double> q) {
  detail::require_same_length(p, q);
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) d += std::abs(p[i] - q[i]);
  return d;
}

inline double divergence(DivergenceKind kind, std::span<const double> p,
                         std::span<const double> q) {
  switch (kind) {
    case DivergenceKind::kKL: return kl(p, q);
    case DivergenceKind::kChiSquare: return chi_square(p, q);
    case DivergenceKind::kL1: return l1(p, q);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown divergence kind");
}

inline double entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return std::max(h, 0.0);
}

// I(U;Y) = sum_u P_U(u) D(P_{Y|U=u} || P_Y). Column u of `p_y_given_u` is the
// conditional pmf of Y given U = u; columns of letters with P_U(u) = 0 are
// ignored.
inline double mutual_information(std::span<const double> p_u, const Matrix& p_y_given_u,
                                 std::span<const double> p_y, double tol = 1e-8) {
  if (p_y_given_u.cols() != p_u.size() || p_y_given_u.rows() != p_y.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "mutual_information shape mismatch");
  }
  Vector mix(p_y.size(), 0.0);
  for (std::size_t u = 0; u < p_u.size(); ++u) {
    if (p_u[u] <= 0.0) continue;
    for (std::size_t y = 0; y < p_y.size(); ++y) mix[y] += p_u[u] * p_y_given_u(y, u);
  }
  for (std::size_t y = 0; y < p_y.size(); ++y) {
    if (std::abs(mix[y] - p_y[y]) > tol) {
      throw Error(ErrorCode::kMixtureMismatch,
                  "sum_u P_U(u) P_{Y|U=u} differs from P_Y at index " + std::to_string(y));
    }
  }
  double info = 0.0;
  for (std::size_t u = 0; u < p_u.size(); ++u) {
    if (p_u[u] <= 0.0) continue;
    info += p_u[u] * kl(p_y_given_u.column(u), p_y);
  }
  return info;
}

}  // namespace privdesign

#endif  // PRIVDESIGN_INFO_HPP_
