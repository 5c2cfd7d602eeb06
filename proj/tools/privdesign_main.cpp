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

// privdesign: design, audit and brute-force privacy mechanisms P_{U|Y}.
//
// Exit status:
//   0  success
//   1  internal error
//   2  no feasible extreme-point assignment
//   3  invalid input (parse, validation, mode/divergence mismatch)
//   4  budget too large for the closed-form design
//   5  verify found a letter over budget
//   6  reproduce-example differs from the reference values
//   7  oracle instance too large for grid search (use --random)

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "cli_io.hpp"
#include "privdesign/privdesign.hpp"

namespace privdesign::cli {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitNoAssignment = 2;
constexpr int kExitInvalid = 3;
constexpr int kExitEpsilonTooLarge = 4;
constexpr int kExitBudgetViolated = 5;
constexpr int kExitReproduceMismatch = 6;
constexpr int kExitOracleSize = 7;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNoFeasibleAssignment: return kExitNoAssignment;
    case ErrorCode::kEpsilonTooLarge: return kExitEpsilonTooLarge;
    case ErrorCode::kNoConvergence:
    case ErrorCode::kMaxIterations:
    case ErrorCode::kLeakageViolated:
    case ErrorCode::kResidualCheckFailed:
    case ErrorCode::kNoFeasibleFilter: return kExitInternal;
    default: return kExitInvalid;
  }
}

std::shared_ptr<spdlog::logger> make_logger() {
  auto logger = std::make_shared<spdlog::logger>(
      "privdesign", std::make_shared<spdlog::sinks::stderr_sink_mt>());
  logger->set_pattern("privdesign: %l: %v");
  logger->set_level(spdlog::level::warn);
  if (const char* env = std::getenv("PRIVDESIGN_LOG")) {
    logger->set_level(spdlog::level::from_str(env));
  }
  return logger;
}

struct CommonFlags {
  std::string out;
  std::optional<double> tol;
  bool bits = false;
  bool nats = false;

  Unit unit() const { return nats && !bits ? Unit::kNats : Unit::kBits; }
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--out", f.out, "Write the JSON report here instead of stdout");
  cmd->add_option("--tol", f.tol, "Override the stochastic and mixture tolerances");
  auto* b = cmd->add_flag("--bits", f.bits, "Emphasize bits in the report (default)");
  cmd->add_flag("--nats", f.nats, "Emphasize nats in the report")->excludes(b);
}

void emit(const CommonFlags& f, const json& report) {
  const std::string text = report.dump(2) + "\n";
  if (f.out.empty()) {
    std::cout << text;
  } else {
    write_text(f.out, text);
  }
}

enum class Resolved { kInvertible, kFullRowRank, kPseudoInverse };

Resolved resolve_mode(const ProblemInstance& inst, DesignMode requested) {
  const bool chi2 = inst.divergence() == DivergenceKind::kChiSquare;
  switch (requested) {
    case DesignMode::kInvertible:
      if (!chi2) throw Error(ErrorCode::kModeMismatch, "mode 'invertible' requires chi2 budgets");
      return Resolved::kInvertible;
    case DesignMode::kFullRowRank:
    case DesignMode::kPseudoInverse:
      if (chi2) {
        throw Error(ErrorCode::kModeMismatch,
                    "mode '" + design_mode_name(requested) + "' requires l1 budgets");
      }
      return requested == DesignMode::kFullRowRank ? Resolved::kFullRowRank
                                                   : Resolved::kPseudoInverse;
    case DesignMode::kAuto: break;
  }
  const Matrix& p = inst.p_x_given_y().matrix();
  if (chi2) {
    if (p.rows() != p.cols() || rank(p) < p.rows()) {
      throw Error(ErrorCode::kModeMismatch,
                  "chi2 budgets need a square invertible P_{X|Y}; use l1 budgets otherwise");
    }
    return Resolved::kInvertible;
  }
  return rank(p) == p.rows() && p.rows() <= p.cols() ? Resolved::kFullRowRank
                                                    : Resolved::kPseudoInverse;
}

std::string resolved_name(Resolved r) {
  switch (r) {
    case Resolved::kInvertible: return "invertible";
    case Resolved::kFullRowRank: return "full-row-rank";
    case Resolved::kPseudoInverse: return "pinv";
  }
  return "";
}

struct DesignRun {
  MechanismDesign design;
  ReportExtras extras;
};

DesignRun run_designer(const ProblemInstance& inst, Resolved mode) {
  DesignRun run;
  run.extras.mode_used = resolved_name(mode);
  if (mode == Resolved::kInvertible) {
    run.design = design_invertible(inst);
    return run;
  }
  LpDesignResult r = design_lp(inst, mode == Resolved::kFullRowRank ? LpMode::kFullRowRank
                                                                    : LpMode::kPseudoInverse);
  run.design = std::move(r.design);
  run.extras.assignment = r.assignment.vertex;
  run.extras.vertices = r.vertices.points;
  return run;
}

int cmd_design(const std::string& path, const std::string& mode_flag, const CommonFlags& f,
               spdlog::logger& log) {
  const auto start = std::chrono::steady_clock::now();
  InstanceFile file = parse_instance(read_json_file(path), f.tol);
  const DesignMode requested = mode_flag.empty() ? file.mode : parse_design_mode(mode_flag);
  const Resolved mode = resolve_mode(file.instance, requested);
  log.info("designing with mode {}", resolved_name(mode));
  DesignRun run = run_designer(file.instance, mode);
  for (const auto& w : run.design.warnings) log.info("{}", w);
  run.extras.unit = f.unit();
  run.extras.timing_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  emit(f, design_report(file.instance, run.design, run.extras));
  return kExitOk;
}

int cmd_verify(const std::string& instance_path, const std::string& mechanism_path,
               const CommonFlags& f) {
  InstanceFile file = parse_instance(read_json_file(instance_path), f.tol);
  const json mech = read_json_file(mechanism_path);
  if (!mech.is_object() || !mech.contains("p_u_given_y")) {
    throw Error(ErrorCode::kInvalidArgument, mechanism_path + ": missing 'p_u_given_y'");
  }
  const double tol = f.tol.value_or(kMixtureTolerance);
  const Channel filter =
      Channel::make(matrix_field(mech["p_u_given_y"], "p_u_given_y"), tol);
  const MechanismDesign d = assess_filter(file.instance, filter);

  const bool bits = f.unit() == Unit::kBits;
  std::printf("%-6s %-12s %-14s %-14s %-14s %s\n", "letter", "P_U", "epsilon", "realized",
              "budget", "status");
  bool ok = true;
  json rows = json::array();
  for (std::size_t u = 0; u < d.letters(); ++u) {
    const bool within = d.leakages[u] <= d.leakage_budgets[u] + tol;
    ok &= within;
    std::printf("u%-5zu %-12.6g %-14.6g %-14.6g %-14.6g %s\n", u + 1, d.p_u[u],
                file.instance.budgets()[u], d.leakages[u], d.leakage_budgets[u],
                within ? "ok" : "VIOLATED");
    rows.push_back({{"letter", u + 1},
                    {"p_u", d.p_u[u]},
                    {"realized", d.leakages[u]},
                    {"budget", d.leakage_budgets[u]},
                    {"within_budget", within}});
  }
  std::printf("I(U;Y) = %.10g %s\n", bits ? to_bits(d.exact_utility) : d.exact_utility,
              bits ? "bits" : "nats");
  if (!f.out.empty()) {
    write_text(f.out, json{{"status", ok ? "pass" : "violated"},
                           {"utility_nats", d.exact_utility},
                           {"utility_bits", to_bits(d.exact_utility)},
                           {"leakage_per_letter", rows}}
                              .dump(2) +
                          "\n");
  }
  return ok ? kExitOk : kExitBudgetViolated;
}

std::string format_vector(std::span<const double> v, int precision = 6) {
  std::string s = "[";
  char buf[64];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.*f", i ? ", " : "", precision, v[i]);
    s += buf;
  }
  return s + "]";
}

int cmd_reproduce(const CommonFlags& f) {
  const reference::Reproduction rep = reference::reproduce();
  const ProblemInstance inst = reference::instance();
  const auto& points = rep.result.vertices.points;
  std::printf("base extreme points\n");
  for (const auto& p : points) {
    std::printf("  V%zu  Omega=%s  %s  H=%.6f bits\n", p.index + 1,
                describe_subset(p.omega).c_str(),
                format_vector(p.full_base(inst.y_size())).c_str(), p.entropy_bits());
  }
  for (const auto& r : rep.result.vertices.rejected)
    std::printf("  rejected Omega=%s: %s\n", describe_subset(r.omega).c_str(), r.reason.c_str());

  const auto& d = rep.result.design;
  std::printf("assignments tried %zu, feasible %zu\n", rep.result.assignments_tried,
              rep.result.assignments_feasible);
  std::printf("chosen assignment:");
  for (std::size_t u = 0; u < rep.result.assignment.vertex.size(); ++u)
    std::printf(" u%zu->V%zu", u + 1, rep.result.assignment.vertex[u] + 1);
  std::printf("\nP_U = %s\n", format_vector(d.p_u.values()).c_str());
  std::printf("I(U;Y) = %.6f bits (%.6f nats), approx %.6f bits\n", to_bits(d.exact_utility),
              d.exact_utility, to_bits(d.approx_utility));

  const auto& pub = rep.reference_assignment_design;
  if (pub.letters() > 0) {
    std::printf("reference assignment u1->V4 u2->V2 u3->V3 u4->V1: P_U = %s, I(U;Y) = %.6f bits, "
                "approx %.6f bits\n",
                format_vector(pub.p_u.values()).c_str(), to_bits(pub.exact_utility),
                to_bits(pub.approx_utility));
  }

  std::printf("\n%-32s %-10s %-10s %-10s %s\n", "check", "expected", "actual", "tol", "result");
  for (const auto& c : rep.checks) {
    std::printf("%-32s %-10.6f %-10.6f %-10.1e %s\n", c.name.c_str(), c.expected, c.actual,
                c.tolerance, c.pass() ? "ok" : "MISMATCH");
  }
  const bool ok = rep.all_pass();
  std::printf("%s\n", ok ? "all reference values reproduced" : "reference values differ");

  if (!f.out.empty()) {
    ReportExtras extras;
    extras.mode_used = std::string(lp_mode_name(rep.result.model.mode));
    extras.assignment = rep.result.assignment.vertex;
    extras.vertices = points;
    extras.status = ok ? "optimal" : "mismatch";
    extras.unit = f.unit();
    write_text(f.out, design_report(inst, d, extras).dump(2) + "\n");
  }
  return ok ? kExitOk : kExitReproduceMismatch;
}

struct OracleFlags {
  bool random = false;
  bool compare = false;
  std::uint64_t seed = 0;
  std::optional<double> grid_step;
  std::size_t samples = 1'000'000;
};

int cmd_oracle(const std::string& path, const OracleFlags& of, const CommonFlags& f,
               spdlog::logger& log) {
  InstanceFile file = parse_instance(read_json_file(path), f.tol);
  const ProblemInstance& inst = file.instance;
  OracleConfig cfg = OracleConfig::defaults_for(inst.y_size(), inst.letters());
  cfg.seed = of.seed;
  cfg.max_random_samples = of.samples;
  if (of.random) {
    cfg.random = true;
  } else if (!oracle_grid_supported(inst.y_size(), inst.letters())) {
    log.error("instance has |Y| = {} and K = {}; grid search supports |Y| <= {} and K <= {}. "
              "Pass --random to sample instead",
              inst.y_size(), inst.letters(), kOracleMaxGridY, kOracleMaxGridLetters);
    return kExitOracleSize;
  } else if (of.grid_step) {
    cfg.random = false;
  }
  if (of.grid_step) cfg.grid_step = *of.grid_step;

  const OracleResult res = brute_force(inst, cfg);
  const bool bits = f.unit() == Unit::kBits;
  auto show = [bits](double nats) { return bits ? to_bits(nats) : nats; };
  const char* unit = bits ? "bits" : "nats";
  std::printf("oracle (%s): evaluated %zu filters, %zu feasible\n",
              cfg.random ? "random" : "grid", res.evaluated, res.feasible);
  std::printf("best I(U;Y) = %.10g %s\n", show(res.design.exact_utility), unit);
  std::printf("best P_U = %s\n", format_vector(res.design.p_u.values()).c_str());

  json report{{"status", "optimal"},
              {"search", cfg.random ? "random" : "grid"},
              {"evaluated", res.evaluated},
              {"feasible", res.feasible},
              {"utility_nats", res.design.exact_utility},
              {"utility_bits", to_bits(res.design.exact_utility)},
              {"p_u", res.design.p_u.values()},
              {"p_u_given_y", matrix_json(res.filter)}};
  if (cfg.random) {
    report["seed"] = cfg.seed;
    report["samples"] = cfg.max_random_samples;
  } else {
    report["grid_step"] = cfg.grid_step;
  }

  if (of.compare) {
    const Resolved mode = resolve_mode(inst, file.mode);
    const DesignRun run = run_designer(inst, mode);
    const double gap = res.design.exact_utility - run.design.exact_utility;
    std::printf("designer (%s) I(U;Y) = %.10g %s\n", resolved_name(mode).c_str(),
                show(run.design.exact_utility), unit);
    std::printf("gap (oracle - designer) = %.3e %s\n", show(gap), unit);
    report["compare"] = {{"mode_used", resolved_name(mode)},
                         {"designer_utility_nats", run.design.exact_utility},
                         {"gap_nats", gap}};
  }
  if (!f.out.empty()) write_text(f.out, report.dump(2) + "\n");
  return kExitOk;
}

}  // namespace
}  // namespace privdesign::cli

int main(int argc, char** argv) {
  using namespace privdesign::cli;
  auto log = make_logger();

  CLI::App app{"Design, audit and brute-force privacy mechanisms with per-letter leakage "
               "budgets"};
  app.require_subcommand(1);

  CommonFlags design_flags, verify_flags, reproduce_flags, oracle_flags;
  std::string design_path, mode_flag;
  auto* design = app.add_subcommand("design", "Design a mechanism for an instance file");
  design->add_option("instance", design_path, "Instance JSON")->required();
  design->add_option("--mode", mode_flag, "auto | invertible | full-row-rank | pinv");
  add_common(design, design_flags);

  std::string verify_instance, verify_mechanism;
  auto* verify = app.add_subcommand("verify", "Audit a filter P_{U|Y} against the budgets");
  verify->add_option("instance", verify_instance, "Instance JSON")->required();
  verify->add_option("mechanism", verify_mechanism, "JSON with a 'p_u_given_y' matrix")
      ->required();
  add_common(verify, verify_flags);

  auto* reproduce =
      app.add_subcommand("reproduce-example", "Run the built-in worked example");
  add_common(reproduce, reproduce_flags);

  std::string oracle_path;
  OracleFlags of;
  auto* oracle = app.add_subcommand("oracle", "Brute-force search over filters");
  oracle->add_option("instance", oracle_path, "Instance JSON")->required();
  oracle->add_flag("--random", of.random, "Sample filters instead of enumerating a grid");
  oracle->add_flag("--compare", of.compare, "Also run the matching designer and print the gap");
  oracle->add_option("--seed", of.seed, "Seed for --random");
  oracle->add_option("--grid-step", of.grid_step, "Grid resolution (must divide 1)");
  oracle->add_option("--samples", of.samples, "Number of random filters");
  add_common(oracle, oracle_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInvalid;
  }

  try {
    if (*design) return cmd_design(design_path, mode_flag, design_flags, *log);
    if (*verify) return cmd_verify(verify_instance, verify_mechanism, verify_flags);
    if (*reproduce) return cmd_reproduce(reproduce_flags);
    if (*oracle) return cmd_oracle(oracle_path, of, oracle_flags, *log);
  } catch (const privdesign::Error& e) {
    log->error("{}", e.what());
    return exit_code_for(e.code());
  } catch (const nlohmann::json::exception& e) {
    log->error("{}", e.what());
    return kExitInvalid;
  } catch (const std::exception& e) {
    log->error("internal error: {}", e.what());
    return kExitInternal;
  }
  return kExitInternal;
}
