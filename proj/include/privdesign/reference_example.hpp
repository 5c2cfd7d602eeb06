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

// Built-in 2 x 4 worked example with three l1-budget letters and one
// zero-budget letter, together with its reference values.

#ifndef PRIVDESIGN_REFERENCE_EXAMPLE_HPP_
#define PRIVDESIGN_REFERENCE_EXAMPLE_HPP_

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "privdesign/info.hpp"
#include "privdesign/polytope.hpp"
#include "privdesign/prob.hpp"

namespace privdesign::reference {

inline ProblemInstance instance() {
  return ProblemInstance::make(
      Channel::make(Matrix{{0.3, 0.8, 0.5, 0.4}, {0.7, 0.2, 0.5, 0.6}}),
      make_pmf({0.5, 0.25, 0.125, 0.125}), BudgetVector::make({0.01, 0.01, 0.01, 0.0}),
      DivergenceKind::kL1);
}

// Base vertices in the reference order, as full length-4 vectors.
inline const std::array<std::array<double, 4>, 4> kBaseVertices = {{
    {0.675, 0.325, 0.0, 0.0},
    {0.1875, 0.0, 0.8125, 0.0},
    {0.0, 0.1563, 0.0, 0.8437},
    {0.0, 0.0, 0.6251, 0.3749},
}};
// Entropies of the base vertices in bits, listed in the order the cost row
// pairs them with letters u1..u4 (vertices 4, 2, 3, 1).
inline constexpr std::array<double, 4> kCostBits = {0.9544, 0.6962, 0.6254, 0.9097};
inline constexpr std::array<std::size_t, 4> kCostVertexOrder = {3, 1, 2, 0};
// Reference assignment of vertices to letters u1..u4.
inline const std::vector<std::size_t> kReferenceAssignment = {3, 1, 2, 0};
inline constexpr std::array<double, 4> kPU = {0.0, 0.1488, 0.143, 0.7082};
inline constexpr double kUtilityBits = 0.9109;

inline constexpr double kValueTolerance = 1e-3;
// Reference vertex entries are rounded to four decimals; the slack absorbs the
// binary representation of values such as 0.6251 - 0.625.
inline constexpr double kVertexTolerance = 1e-4 + 1e-12;

struct Check {
  std::string name;
  double expected = 0.0;
  double actual = 0.0;
  double tolerance = 0.0;
  bool pass() const { return std::abs(expected - actual) <= tolerance; }
};

struct Reproduction {
  LpDesignResult result;
  // The reference assignment solved on its own.
  MechanismDesign reference_assignment_design;
  std::vector<std::size_t> vertex_match;  // our vertex index per reference vertex
  std::vector<Check> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass()) return false;
    return true;
  }
};

inline Reproduction reproduce() {
  const ProblemInstance inst = instance();
  Reproduction rep;
  rep.result = design_lp(inst, LpMode::kAuto);
  const auto& points = rep.result.vertices.points;
  const std::size_t ny = inst.y_size();

  for (std::size_t v = 0; v < kBaseVertices.size(); ++v) {
    // Match by support, then compare entries.
    std::size_t match = points.size();
    for (std::size_t p = 0; p < points.size(); ++p) {
      const Vector full = points[p].full_base(ny);
      bool same_support = true;
      for (std::size_t y = 0; y < ny; ++y)
        same_support &= (full[y] > 0.0) == (kBaseVertices[v][y] > 0.0);
      if (same_support) match = p;
    }
    rep.vertex_match.push_back(match);
    for (std::size_t y = 0; y < ny; ++y) {
      const double actual = match < points.size() ? points[match].full_base(ny)[y] : NAN;
      rep.checks.push_back({"vertex " + std::to_string(v + 1) + " entry " + std::to_string(y + 1),
                            kBaseVertices[v][y], actual, kVertexTolerance});
    }
  }
  for (std::size_t i = 0; i < kCostBits.size(); ++i) {
    const std::size_t match = rep.vertex_match[kCostVertexOrder[i]];
    const double actual = match < points.size() ? points[match].entropy_bits() : NAN;
    rep.checks.push_back({"cost coefficient u" + std::to_string(i + 1) + " (bits)",
                          kCostBits[i], actual, kValueTolerance});
  }
  for (std::size_t u = 0; u < kPU.size(); ++u) {
    rep.checks.push_back({"P_U(u" + std::to_string(u + 1) + ")", kPU[u],
                          rep.result.design.p_u[u], kValueTolerance});
  }
  rep.checks.push_back({"I(U;Y) bits", kUtilityBits, to_bits(rep.result.design.exact_utility),
                        kValueTolerance});

  std::vector<std::size_t> assigned;
  for (std::size_t v : kReferenceAssignment) assigned.push_back(rep.vertex_match[v]);
  auto solved = solve_assignment(assigned, inst, rep.result.model, points);
  if (solved) {
    rep.reference_assignment_design =
        recover_design(solved->first, solved->second, inst, rep.result.model, points);
  }
  return rep;
}

}  // namespace privdesign::reference

#endif  // PRIVDESIGN_REFERENCE_EXAMPLE_HPP_
