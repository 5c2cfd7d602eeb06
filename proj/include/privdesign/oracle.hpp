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

// Brute-force search over filters P_{U|Y}. Each column of the filter is drawn
// from a grid on the K-simplex (or sampled uniformly), so X - Y - U holds by
// construction, and every candidate is checked with exact divergences.

#ifndef PRIVDESIGN_ORACLE_HPP_
#define PRIVDESIGN_ORACLE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <future>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "privdesign/error.hpp"
#include "privdesign/info.hpp"
#include "privdesign/mechanism.hpp"
#include "privdesign/prob.hpp"

namespace privdesign {

inline constexpr std::size_t kOracleMaxGridY = 4;
inline constexpr std::size_t kOracleMaxGridLetters = 3;

struct OracleConfig {
  double grid_step = 0.05;
  std::size_t max_random_samples = 1'000'000;
  std::uint64_t seed = 0;
  bool random = false;
  // 0 picks std::thread::hardware_concurrency().
  unsigned workers = 0;

  // Grid for |Y| K <= 8, sampling otherwise.
  static OracleConfig defaults_for(std::size_t ny, std::size_t k) {
    OracleConfig c;
    c.random = ny * k > 8;
    return c;
  }
};

struct OracleResult {
  MechanismDesign design;
  Matrix filter;
  std::size_t evaluated = 0;
  std::size_t feasible = 0;
};

inline bool oracle_grid_supported(std::size_t ny, std::size_t k) {
  return ny <= kOracleMaxGridY && k <= kOracleMaxGridLetters;
}

namespace detail {

// All compositions of `units` into k nonnegative parts, lexicographic.
inline std::vector<std::vector<int>> simplex_grid(int units, std::size_t k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(k, 0);
  auto rec = [&](auto&& self, std::size_t pos, int left) -> void {
    if (pos + 1 == k) {
      cur[pos] = left;
      out.push_back(cur);
      return;
    }
    for (int v = left; v >= 0; --v) {
      cur[pos] = v;
      self(self, pos + 1, left - v);
    }
  };
  rec(rec, 0, units);
  return out;
}

// Exact feasibility and utility of one filter, written against raw arrays so
// the grid loop does not allocate.
class FilterScorer {
 public:
  explicit FilterScorer(const ProblemInstance& inst)
      : nx_(inst.x_size()),
        ny_(inst.y_size()),
        k_(inst.letters()),
        kind_(inst.divergence()),
        channel_(inst.p_x_given_y().matrix()),
        p_y_(inst.p_y().values()),
        p_x_(inst.p_x().values()),
        p_u_(k_),
        px_u_(nx_) {
    for (std::size_t u = 0; u < k_; ++u)
      budget_.push_back(leakage_budget(kind_, inst.budgets()[u]) + 1e-12);
  }

  // filter is K x |Y| row-major. Returns -1 when a budget is violated.
  double score(const double* filter) {
    for (std::size_t u = 0; u < k_; ++u) {
      double m = 0.0;
      for (std::size_t y = 0; y < ny_; ++y) m += filter[u * ny_ + y] * p_y_[y];
      p_u_[u] = m;
    }
    double info = 0.0;
    for (std::size_t u = 0; u < k_; ++u) {
      const double pu = p_u_[u];
      if (pu <= 0.0) continue;
      double leak = 0.0;
      for (std::size_t x = 0; x < nx_; ++x) {
        double s = 0.0;
        for (std::size_t y = 0; y < ny_; ++y) s += channel_(x, y) * filter[u * ny_ + y] * p_y_[y];
        const double diff = s / pu - p_x_[x];
        leak += kind_ == DivergenceKind::kChiSquare ? diff * diff / p_x_[x] : std::abs(diff);
      }
      if (leak > budget_[u]) return -1.0;
      for (std::size_t y = 0; y < ny_; ++y) {
        const double f = filter[u * ny_ + y];
        if (f > 0.0) info += f * p_y_[y] * std::log(f / pu);
      }
    }
    return std::max(info, 0.0);
  }

 private:
  std::size_t nx_, ny_, k_;
  DivergenceKind kind_;
  const Matrix& channel_;
  const Vector& p_y_;
  const Vector& p_x_;
  Vector budget_;
  Vector p_u_;
  Vector px_u_;
};

struct PartialBest {
  double score = -1.0;
  std::vector<double> filter;
  std::size_t evaluated = 0;
  std::size_t feasible = 0;
};

}  // namespace detail

inline OracleResult brute_force(const ProblemInstance& inst, const OracleConfig& cfg) {
  const std::size_t k = inst.letters();
  const std::size_t ny = inst.y_size();
  std::vector<detail::PartialBest> parts;

  if (!cfg.random) {
    if (!oracle_grid_supported(ny, k)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "grid search supports |Y| <= 4 and K <= 3; use random sampling");
    }
    if (!(cfg.grid_step > 0.0 && cfg.grid_step < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "grid_step must lie in (0, 1)");
    }
    const double units_real = 1.0 / cfg.grid_step;
    const int units = static_cast<int>(std::lround(units_real));
    if (std::abs(units_real - units) > 1e-12 * units_real + 1e-9) {
      throw Error(ErrorCode::kInvalidArgument, "grid_step must divide 1");
    }
    const auto grid = detail::simplex_grid(units, k);
    const std::size_t g = grid.size();
    std::size_t total = 1;
    for (std::size_t y = 0; y < ny; ++y) total *= g;

    // Filters are encoded in mixed radix with column 0 most significant;
    // workers take contiguous ranges of the leading column.
    auto run = [&](std::size_t first_lo, std::size_t first_hi) {
      detail::PartialBest best;
      detail::FilterScorer scorer(inst);
      std::vector<double> filter(k * ny);
      std::vector<std::size_t> digit(ny, 0);
      const std::size_t per_first = total / g;
      for (std::size_t lead = first_lo; lead < first_hi; ++lead) {
        for (std::size_t code = 0; code < per_first; ++code) {
          std::size_t c = code;
          digit[0] = lead;
          for (std::size_t y = ny; y-- > 1;) {
            digit[y] = c % g;
            c /= g;
          }
          for (std::size_t y = 0; y < ny; ++y)
            for (std::size_t u = 0; u < k; ++u)
              filter[u * ny + y] = grid[digit[y]][u] / static_cast<double>(units);
          ++best.evaluated;
          const double s = scorer.score(filter.data());
          if (s < 0.0) continue;
          ++best.feasible;
          if (s > best.score) {
            best.score = s;
            best.filter = filter;
          }
        }
      }
      return best;
    };
    unsigned workers = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, g));
    std::vector<std::future<detail::PartialBest>> futures;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t lo = g * w / workers;
      const std::size_t hi = g * (w + 1) / workers;
      futures.push_back(std::async(std::launch::async, run, lo, hi));
    }
    for (auto& f : futures) parts.push_back(f.get());
  } else {
    detail::PartialBest best;
    detail::FilterScorer scorer(inst);
    std::mt19937_64 rng(cfg.seed);
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> filter(k * ny);
    // The constant filter first: always feasible.
    for (std::size_t y = 0; y < ny; ++y) filter[y] = 1.0;
    best.score = scorer.score(filter.data());
    best.filter = filter;
    best.evaluated = best.feasible = 1;
    for (std::size_t s = 0; s < cfg.max_random_samples; ++s) {
      for (std::size_t y = 0; y < ny; ++y) {
        double total = 0.0;
        for (std::size_t u = 0; u < k; ++u) {
          filter[u * ny + y] = expo(rng);
          total += filter[u * ny + y];
        }
        for (std::size_t u = 0; u < k; ++u) filter[u * ny + y] /= total;
      }
      ++best.evaluated;
      const double score = scorer.score(filter.data());
      if (score < 0.0) continue;
      ++best.feasible;
      if (score > best.score) {
        best.score = score;
        best.filter = filter;
      }
    }
    parts.push_back(std::move(best));
  }

  // Parts are in encoding order, so a strict comparison keeps the first
  // optimal filter.
  OracleResult out;
  const detail::PartialBest* best = nullptr;
  for (const auto& p : parts) {
    out.evaluated += p.evaluated;
    out.feasible += p.feasible;
    if (p.score >= 0.0 && (best == nullptr || p.score > best->score)) best = &p;
  }
  if (best == nullptr) {
    throw Error(ErrorCode::kNoFeasibleFilter, "no filter satisfies the budgets");
  }
  out.filter = Matrix(k, ny, best->filter);
  out.design = assess_filter(inst, Channel::make(out.filter));
  return out;
}

}  // namespace privdesign

#endif  // PRIVDESIGN_ORACLE_HPP_
