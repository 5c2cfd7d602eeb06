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

// JSON instance, mechanism and report files for the command-line tool.
//
// Matrices are written as {"rows": R, "cols": C, "data": [row-major]}; nested
// arrays of rows are accepted on input as well.

#ifndef PRIVDESIGN_TOOLS_CLI_IO_HPP_
#define PRIVDESIGN_TOOLS_CLI_IO_HPP_

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "privdesign/privdesign.hpp"

namespace privdesign::cli {

using json = nlohmann::json;

enum class DesignMode { kAuto, kInvertible, kFullRowRank, kPseudoInverse };

inline DesignMode parse_design_mode(const std::string& s) {
  if (s == "auto") return DesignMode::kAuto;
  if (s == "invertible") return DesignMode::kInvertible;
  if (s == "full-row-rank") return DesignMode::kFullRowRank;
  if (s == "pinv") return DesignMode::kPseudoInverse;
  throw Error(ErrorCode::kInvalidArgument,
              "field 'mode': expected auto, invertible, full-row-rank or pinv, got '" + s + "'");
}

inline std::string design_mode_name(DesignMode m) {
  switch (m) {
    case DesignMode::kAuto: return "auto";
    case DesignMode::kInvertible: return "invertible";
    case DesignMode::kFullRowRank: return "full-row-rank";
    case DesignMode::kPseudoInverse: return "pinv";
  }
  return "auto";
}

struct InstanceFile {
  ProblemInstance instance;
  DesignMode mode = DesignMode::kAuto;
};

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kInvalidArgument, path + ": " + e.what());
  }
}

inline Vector vector_field(const json& j, const std::string& field) {
  if (!j.is_array()) {
    throw Error(ErrorCode::kInvalidArgument, "field '" + field + "': expected an array");
  }
  Vector out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "field '" + field + "[" + std::to_string(i) + "]': expected a number");
    }
    out.push_back(j[i].get<double>());
  }
  return out;
}

inline Matrix matrix_field(const json& j, const std::string& field) {
  if (j.is_object()) {
    for (const char* key : {"rows", "cols", "data"}) {
      if (!j.contains(key)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "field '" + field + "': missing '" + std::string(key) + "'");
      }
    }
    if (!j["rows"].is_number_unsigned() || !j["cols"].is_number_unsigned()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "field '" + field + "': rows and cols must be positive integers");
    }
    const auto rows = j["rows"].get<std::size_t>();
    const auto cols = j["cols"].get<std::size_t>();
    Vector data = vector_field(j["data"], field + ".data");
    if (data.size() != rows * cols) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "field '" + field + "': " + std::to_string(data.size()) +
                      " entries for a " + std::to_string(rows) + "x" + std::to_string(cols) +
                      " matrix");
    }
    return Matrix(rows, cols, std::move(data));
  }
  if (j.is_array()) {
    std::vector<Vector> rows;
    for (std::size_t i = 0; i < j.size(); ++i)
      rows.push_back(vector_field(j[i], field + "[" + std::to_string(i) + "]"));
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) {
        throw Error(ErrorCode::kDimensionMismatch,
                    "field '" + field + "[" + std::to_string(i) + "]': ragged row");
      }
      for (std::size_t c = 0; c < cols; ++c) m(i, c) = rows[i][c];
    }
    return m;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "field '" + field + "': expected {rows, cols, data} or an array of rows");
}

inline json matrix_json(const Matrix& m) {
  return json{{"rows", m.rows()},
              {"cols", m.cols()},
              {"data", Vector(m.data().begin(), m.data().end())}};
}

inline DivergenceKind parse_divergence(const std::string& s) {
  if (s == "chi2") return DivergenceKind::kChiSquare;
  if (s == "l1") return DivergenceKind::kL1;
  throw Error(ErrorCode::kInvalidArgument,
              "field 'divergence': expected \"chi2\" or \"l1\", got '" + s + "'");
}

inline InstanceFile parse_instance(const json& j, std::optional<double> tol_override = {}) {
  if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, "instance must be a JSON object");
  Tolerances tol;
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (!t.is_object()) {
      throw Error(ErrorCode::kInvalidArgument, "field 'tolerances': expected an object");
    }
    if (t.contains("stochastic")) tol.stochastic = t["stochastic"].get<double>();
    if (t.contains("mixture")) tol.mixture = t["mixture"].get<double>();
  }
  if (tol_override) tol.stochastic = tol.mixture = *tol_override;

  if (!j.contains("epsilons")) throw Error(ErrorCode::kInvalidArgument, "missing 'epsilons'");
  if (!j.contains("divergence")) {
    throw Error(ErrorCode::kInvalidArgument, "missing 'divergence'");
  }
  if (!j["divergence"].is_string()) {
    throw Error(ErrorCode::kInvalidArgument, "field 'divergence': expected a string");
  }
  BudgetVector budgets = BudgetVector::make(vector_field(j["epsilons"], "epsilons"));
  const DivergenceKind kind = parse_divergence(j["divergence"].get<std::string>());

  InstanceFile out{[&] {
    if (j.contains("p_xy")) {
      return ProblemInstance::from_joint(matrix_field(j["p_xy"], "p_xy"), budgets, kind, tol);
    }
    if (!j.contains("p_x_given_y") || !j.contains("p_y")) {
      throw Error(ErrorCode::kInvalidArgument,
                  "instance needs 'p_x_given_y' and 'p_y', or 'p_xy'");
    }
    return ProblemInstance::make(
        Channel::make(matrix_field(j["p_x_given_y"], "p_x_given_y"), tol.stochastic),
        Pmf::make(vector_field(j["p_y"], "p_y"), tol.stochastic), budgets, kind, tol);
  }()};
  if (j.contains("mode")) out.mode = parse_design_mode(j["mode"].get<std::string>());
  return out;
}

inline json instance_json(const ProblemInstance& inst, DesignMode mode = DesignMode::kAuto) {
  return json{{"p_x_given_y", matrix_json(inst.p_x_given_y().matrix())},
              {"p_y", inst.p_y().values()},
              {"epsilons", inst.budgets().values()},
              {"divergence", std::string(divergence_name(inst.divergence()))},
              {"mode", design_mode_name(mode)},
              {"tolerances",
               {{"stochastic", inst.tolerances().stochastic},
                {"mixture", inst.tolerances().mixture}}}};
}

enum class Unit { kBits, kNats };

struct ReportExtras {
  std::string status = "optimal";
  std::string mode_used;
  std::optional<std::vector<std::size_t>> assignment;      // 0-based vertex per letter
  std::optional<std::vector<ExtremePoint>> vertices;
  double timing_ms = -1.0;  // omitted when negative
  Unit unit = Unit::kBits;
};

inline json design_report(const ProblemInstance& inst, const MechanismDesign& d,
                          const ReportExtras& extra) {
  json leak = json::array();
  for (std::size_t u = 0; u < d.letters(); ++u) {
    leak.push_back({{"letter", u + 1},
                    {"epsilon", inst.budgets()[u]},
                    {"realized", d.leakages[u]},
                    {"budget", d.leakage_budgets[u]},
                    {"within_budget", d.leakages[u] <= d.leakage_budgets[u] + 1e-8}});
  }
  json unused = json::array();
  for (std::size_t u = 0; u < d.letters(); ++u)
    if (!d.used(u)) unused.push_back(u + 1);
  const bool bits = extra.unit == Unit::kBits;
  json r{{"status", extra.status},
         {"mode_used", extra.mode_used},
         {"divergence", std::string(divergence_name(inst.divergence()))},
         {"p_u", d.p_u.values()},
         {"p_y_given_u", matrix_json(d.p_y_given_u_matrix(inst.p_y().values()))},
         {"unused_letters", unused},
         {"p_u_given_y", matrix_json(d.p_u_given_y.matrix())},
         {"utility_nats", d.exact_utility},
         {"utility_bits", to_bits(d.exact_utility)},
         {"unit", bits ? "bits" : "nats"},
         {"utility", bits ? to_bits(d.exact_utility) : d.exact_utility},
         {"approx_utility",
          {{"nats", d.approx_utility}, {"bits", to_bits(d.approx_utility)}}},
         {"leakage_per_letter", leak},
         {"warnings", d.warnings}};
  if (extra.assignment) {
    json a = json::array();
    for (std::size_t u = 0; u < extra.assignment->size(); ++u) {
      json entry{{"letter", u + 1}, {"vertex", (*extra.assignment)[u] + 1}};
      if (extra.vertices) {
        std::vector<std::size_t> omega;
        for (std::size_t v : (*extra.vertices)[(*extra.assignment)[u]].omega) omega.push_back(v + 1);
        entry["omega"] = omega;
      }
      a.push_back(entry);
    }
    r["assignment"] = a;
  }
  if (extra.timing_ms >= 0.0) r["timing_ms"] = extra.timing_ms;
  return r;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write '" + path + "'");
  out << text;
}

}  // namespace privdesign::cli

#endif  // PRIVDESIGN_TOOLS_CLI_IO_HPP_
