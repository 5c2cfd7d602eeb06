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

// Acceptance runner. `privdesign_acceptance --criterion N` checks one
// criterion; without arguments all nine run. Each criterion prints exactly one
// PASS or FAIL line, preceded by indented detail lines. The exit status is 0
// iff every requested criterion passed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "privdesign/privdesign.hpp"
#include "test_support.hpp"

namespace privdesign::acceptance {
namespace {

using testing::Rng;

struct Outcome {
  bool pass = true;
  std::string summary;
};

void note(const char* fmt, auto... args) {
  std::printf("    ");
  std::printf(fmt, args...);
  std::printf("\n");
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

// Counts cases and failures of one named property and keeps the worst value.
class Tally {
 public:
  void check(const std::string& name, bool ok, double value = 0.0) {
    Entry& e = entries_[name];
    if (e.cases == 0) order_.push_back(name);
    ++e.cases;
    if (!ok) ++e.failures;
    e.worst = std::max(e.worst, value);
  }

  bool all_pass() const {
    for (const auto& [name, e] : entries_)
      if (e.failures > 0) return false;
    return true;
  }

  void print() const {
    for (const auto& name : order_) {
      const Entry& e = entries_.at(name);
      note("%-58s %6zu cases  %4zu failed  worst %.3e", name.c_str(), e.cases, e.failures,
           e.worst);
    }
  }

 private:
  struct Entry {
    std::size_t cases = 0;
    std::size_t failures = 0;
    double worst = 0.0;
  };
  std::map<std::string, Entry> entries_;
  std::vector<std::string> order_;
};

// Top singular value of W restricted to the complement of d, by power
// iteration on the Gram matrix of W (I - d d^T / |d|^2). Independent of the
// Jacobi SVD used by the library.
double restricted_sigma_max(const Matrix& w, const Vector& d) {
  const std::size_t n = w.cols();
  const double dd = dot(d, d);
  auto project = [&](Vector& v) {
    const double a = dot(v, d) / dd;
    for (std::size_t i = 0; i < n; ++i) v[i] -= a * d[i];
  };
  const Matrix wt = w.transpose();
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 0.37 * static_cast<double>(i * i);
  project(v);
  double lambda = 0.0;
  for (int it = 0; it < 20000; ++it) {
    const double nv = norm2(v);
    for (double& x : v) x /= nv;
    Vector g = wt * (w * v);
    project(g);
    const double next = dot(v, g);
    v = std::move(g);
    if (it > 50 && std::abs(next - lambda) <= 1e-15 * next) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(lambda);
}

// W = [sqrt P_Y]^-1 P_{X|Y}^-1 [sqrt P_X], with the inverse from Eigen.
Matrix independent_w(const ProblemInstance& inst) {
  const std::size_t n = inst.x_size();
  Eigen::MatrixXd p(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) p(i, j) = inst.p_x_given_y()(i, j);
  const Eigen::MatrixXd inv = p.inverse();
  Matrix w(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      w(i, j) = inv(i, j) * std::sqrt(inst.p_x()[j]) / std::sqrt(inst.p_y()[i]);
  return w;
}

Vector sqrt_of(const Pmf& p) {
  Vector s(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) s[i] = std::sqrt(p[i]);
  return s;
}

// Exact utility of design_lp, or 0 when no assignment is feasible (the
// constant mechanism is then the only design on offer).
struct LpRun {
  std::optional<LpDesignResult> result;
  double exact = 0.0;
  double approx = 0.0;
};

LpRun run_lp(const ProblemInstance& inst, LpMode mode = LpMode::kAuto) {
  LpRun r;
  try {
    r.result = design_lp(inst, mode);
    r.exact = r.result->design.exact_utility;
    r.approx = r.result->design.approx_utility;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNoFeasibleAssignment) throw;
  }
  return r;
}

ProblemInstance uniform_budgets(const ProblemInstance& inst, double eps) {
  return inst.with_budgets(BudgetVector::make(Vector(inst.letters(), eps)));
}

// ---------------------------------------------------------------------------

Outcome criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  const reference::Reproduction rep = reference::reproduce();
  const double ms = elapsed_ms(start);
  std::size_t failed = 0;
  for (const auto& c : rep.checks) {
    if (!c.pass()) {
      ++failed;
      note("%-30s expected %.4f  got %.6f  (tol %.0e)", c.name.c_str(), c.expected, c.actual,
           c.tolerance);
    }
  }
  const auto& d = rep.result.design;
  note("chosen P_U = [%.6f, %.6f, %.6f, %.6f], I(U;Y) = %.6f bits", d.p_u[0], d.p_u[1], d.p_u[2],
       d.p_u[3], to_bits(d.exact_utility));
  const bool fast = ms < 5000.0;
  if (!fast) note("runtime %.0f ms exceeds 5000 ms", ms);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu of %zu reference values outside tolerance, %.0f ms", failed,
                rep.checks.size(), ms);
  return {failed == 0 && fast, buf};
}

Outcome criterion_2() {
  Rng rng(2002);
  std::vector<ProblemInstance> instances;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 2 + i % 3;
    const double e1 = testing::uniform(rng, 1e-3, 1e-2);
    const double e2 = testing::uniform(rng, 1e-4, e1);
    Vector eps{e1, e2};
    if (i % 2) eps.push_back(testing::uniform(rng, 0.0, e2));
    instances.push_back(testing::invertible_instance(rng, n, eps));
  }
  Tally t;
  const auto start = std::chrono::steady_clock::now();
  std::vector<MechanismDesign> designs;
  for (const auto& inst : instances) designs.push_back(design_invertible(inst));
  const double ms = elapsed_ms(start);
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    const auto& d = designs[i];
    const double sigma = restricted_sigma_max(independent_w(inst), sqrt_of(inst.p_x()));
    const double expected = 0.5 * inst.budgets()[0] * inst.budgets()[1] * sigma * sigma;
    const double err = std::abs(d.approx_utility - expected);
    t.check("approx utility = eps1 eps2 sigma^2 / 2 (1e-12)", err <= 1e-12, err);
    for (std::size_t u = 0; u < inst.letters(); ++u) {
      if (!d.used(u)) continue;
      const double chi = chi_square(*d.p_x_given_u[u], inst.p_x().values());
      const double excess = chi - inst.budgets()[u] * inst.budgets()[u];
      t.check("chi2 <= eps^2 + 1e-10 per letter", excess <= 1e-10, std::max(excess, 0.0));
    }
  }
  t.print();
  const bool fast = ms < 1000.0;
  char buf[120];
  std::snprintf(buf, sizeof buf, "100 instances designed in %.1f ms", ms);
  return {t.all_pass() && fast, buf};
}

Outcome criterion_3() {
  bool ok = true;
  double worst = std::numeric_limits<double>::infinity();
  for (double e1 : {0.02, 0.01, 0.005}) {
    auto gap = [](double eps) {
      const MechanismDesign d = design_invertible(testing::symmetric_instance(0.3, {eps, eps}));
      return std::abs(d.exact_utility - d.approx_utility);
    };
    const double g = gap(e1);
    const double h = gap(e1 / 2);
    const double ratio = g / h;
    note("eps1 = %.4f: gap %.3e -> %.3e at eps1/2, ratio %.2f", e1, g, h, ratio);
    worst = std::min(worst, ratio);
    ok &= ratio >= 3.5;
  }
  char buf[80];
  std::snprintf(buf, sizeof buf, "smallest shrink factor %.2f (need >= 3.5)", worst);
  return {ok, buf};
}

Outcome criterion_4() {
  Rng rng(2004);
  std::size_t bad = 0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t n = 2 + i % 3;
    const std::size_t k = 3 + i % 2;
    Vector eps = testing::sorted_budgets(rng, k, 1e-3, 1e-2);
    // Strict gap below the second budget.
    for (std::size_t u = 2; u < k; ++u) eps[u] = std::min(eps[u], 0.9 * eps[1]);
    std::sort(eps.begin(), eps.end(), std::greater<>());
    const MechanismDesign d = design_invertible(testing::invertible_instance(rng, n, eps));
    if (d.support() != std::vector<std::size_t>{0, 1}) ++bad;
  }
  char buf[80];
  std::snprintf(buf, sizeof buf, "%zu of 50 designs leave support {u1, u2}", bad);
  return {bad == 0, buf};
}

Outcome criterion_5() {
  Rng rng(2005);
  Tally t;
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = 2 + i % 3;
    const ProblemInstance inst =
        testing::invertible_instance(rng, n, testing::sorted_budgets(rng, 3, 1e-3, 1e-2));
    const double lo = design_invertible(uniform_budgets(inst, inst.budgets().smallest())).exact_utility;
    const double mid = design_invertible(inst).exact_utility;
    const double hi = design_invertible(uniform_budgets(inst, inst.budgets().largest())).exact_utility;
    t.check("invertible: lower <= design (exact, 1e-6)", lo <= mid + 1e-6, std::max(lo - mid, 0.0));
    t.check("invertible: design <= upper (exact, 1e-6)", mid <= hi + 1e-6, std::max(mid - hi, 0.0));
  }
  for (int i = 0; i < 20; ++i) {
    const std::size_t ny = 3 + i % 2;
    const std::size_t k = ny - 1;
    const ProblemInstance inst =
        testing::l1_instance(rng, 2, ny, testing::sorted_budgets(rng, k, 0.0, 1e-2));
    const LpRun lo = run_lp(uniform_budgets(inst, inst.budgets().smallest()));
    const LpRun mid = run_lp(inst);
    const LpRun hi = run_lp(uniform_budgets(inst, inst.budgets().largest()));
    t.check("lp: lower <= design (exact, 1e-6)", lo.exact <= mid.exact + 1e-6,
            std::max(lo.exact - mid.exact, 0.0));
    t.check("lp: design <= upper (exact, 1e-6)", mid.exact <= hi.exact + 1e-6,
            std::max(mid.exact - hi.exact, 0.0));
    t.check("lp: lower <= design <= upper (approx, 1e-6)",
            lo.approx <= mid.approx + 1e-6 && mid.approx <= hi.approx + 1e-6,
            std::max({lo.approx - mid.approx, mid.approx - hi.approx, 0.0}));
  }
  t.print();
  return {t.all_pass(), "20 instances per designer"};
}

Outcome criterion_6() {
  Rng rng(2006);
  OracleConfig cfg;
  cfg.grid_step = 0.02;
  Tally t;
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 10; ++i) {
    double designer = 0.0;
    OracleResult oracle;
    if (i % 2 == 0) {
      const ProblemInstance inst =
          testing::invertible_instance(rng, 2 + (i / 2) % 2, testing::sorted_budgets(rng, 2, 1e-3, 1e-2));
      designer = design_invertible(inst).exact_utility;
      oracle = brute_force(inst, cfg);
    } else {
      const ProblemInstance inst =
          testing::l1_instance(rng, 2, 3, testing::sorted_budgets(rng, 2, 0.0, 1e-2));
      designer = run_lp(inst).exact;
      oracle = brute_force(inst, cfg);
    }
    const double o = oracle.design.exact_utility;
    note("instance %d (%s): designer %.6e nats, oracle %.6e nats", i + 1,
         i % 2 == 0 ? "chi2" : "l1", designer, o);
    t.check("designer >= oracle - 5e-3", designer >= o - 5e-3, std::max(o - designer, 0.0));
    t.check("oracle >= designer - 5e-3", o >= designer - 5e-3, std::max(designer - o, 0.0));
  }
  const double ms = elapsed_ms(start);
  t.print();
  char buf[80];
  std::snprintf(buf, sizeof buf, "10 instances in %.0f ms", ms);
  return {t.all_pass() && ms < 60000.0, buf};
}

Outcome criterion_7() {
  Rng rng(2007);
  Tally t;
  for (int i = 0; i < 100; ++i) {
    const std::size_t nx = 2 + i % 3;
    const std::size_t ny = nx + i % 4;
    const Matrix p = testing::random_channel(rng, nx, ny);
    const Matrix pinv = pseudo_inverse(p);
    double worst = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      double s = 0.0;
      for (std::size_t y = 0; y < ny; ++y) s += pinv(y, x);
      worst = std::max(worst, std::abs(s - 1.0));
    }
    t.check("1^T pinv(P) = 1^T (1e-9)", worst <= 1e-9, worst);
  }
  for (int i = 0; i < 30; ++i) {
    const std::size_t ny = 3 + i % 2;
    const ProblemInstance inst =
        testing::l1_instance(rng, 2, ny, testing::sorted_budgets(rng, ny - 1, 0.0, 1e-2));
    const LpRun a = run_lp(inst, LpMode::kFullRowRank);
    const LpRun b = run_lp(inst, LpMode::kPseudoInverse);
    t.check("pinv and full-row-rank agree on feasibility", a.result.has_value() == b.result.has_value());
    t.check("pinv vs full-row-rank approx utility (1e-6)", std::abs(a.approx - b.approx) <= 1e-6,
            std::abs(a.approx - b.approx));
    t.check("pinv vs full-row-rank exact utility (1e-6)", std::abs(a.exact - b.exact) <= 1e-6,
            std::abs(a.exact - b.exact));
  }
  t.print();
  return {t.all_pass(), "100 channels, 30 designs per mode"};
}

Outcome criterion_8() {
  const reference::Reproduction rep = reference::reproduce();
  const auto& d = rep.result.design;
  const double leak = d.leakages[3];
  const double weight = d.p_u[3];
  const double target = reference::kPU[3];
  note("u4: l1 leakage %.3e, P_U(u4) = %.6f (target %.4f +- 1e-3)", leak, weight, target);
  const auto& pub = rep.reference_assignment_design;
  if (pub.letters() > 0) {
    note("same instance with the reference assignment forced: P_U(u4) = %.6f, I = %.6f bits "
         "(chosen design: %.6f bits)",
         pub.p_u[3], to_bits(pub.exact_utility), to_bits(d.exact_utility));
  }
  const bool ok = leak <= 1e-12 && std::abs(weight - target) <= 1e-3;
  char buf[120];
  std::snprintf(buf, sizeof buf, "leakage %.1e, weight %.4f", leak, weight);
  return {ok, buf};
}

// --- criterion 9 ------------------------------------------------------------

void check_design(Tally& t, const ProblemInstance& inst, const MechanismDesign& d,
                  const std::string& who) {
  t.check(who + ": 1^T J = 0 residual (1e-7)", perturbation_sum_residual(d) <= 1e-7,
          perturbation_sum_residual(d));
  const double bal = perturbation_balance_residual(d, inst.budgets());
  t.check(who + ": sum eps P_U J = 0 residual (1e-7)", bal <= 1e-7, bal);
  const double mix = mixture_residual(d, inst.p_y().values());
  t.check(who + ": mixture residual (1e-8)", mix <= 1e-8, mix);
  // Bayes filter round trip.
  const std::size_t ny = inst.y_size();
  double worst = 0.0;
  for (std::size_t u = 0; u < d.letters(); ++u) {
    double pu = 0.0;
    for (std::size_t y = 0; y < ny; ++y) pu += d.p_u_given_y(u, y) * inst.p_y()[y];
    worst = std::max(worst, std::abs(pu - d.p_u[u]));
    if (pu <= kUnusedLetterMass) continue;
    for (std::size_t y = 0; y < ny; ++y)
      worst = std::max(worst, std::abs(d.p_u_given_y(u, y) * inst.p_y()[y] / pu -
                                       (*d.p_y_given_u[u])[y]));
  }
  t.check(who + ": bayes filter round trip (1e-10)", worst <= 1e-10, worst);
  const double excess = std::max(d.worst_budget_excess(), 0.0);
  const double tol = inst.divergence() == DivergenceKind::kChiSquare ? 1e-10 : 1e-7;
  t.check(who + ": realized leakage within budget", excess <= tol, excess);
}

void check_lp_design(Tally& t, const ProblemInstance& inst, const LpDesignResult& r) {
  check_design(t, inst, r.design, "lp");
  const Vector mpy = r.model.m * inst.p_y().values();
  for (std::size_t u = 0; u < inst.letters(); ++u) {
    if (!r.design.used(u)) continue;
    const Vector& y = *r.design.p_y_given_u[u];
    const double eps = inst.budgets()[u];
    Vector j(inst.x_size(), 0.0);
    if (r.design.perturbations[u]) j = r.design.perturbations[u]->j;
    const double dist = testing::nearest_vertex(r.vertices.points, y, eps, j).second;
    t.check("lp: P_{Y|U=u} is a polytope vertex (1e-7)", dist <= 1e-7, dist);
    const Vector my = r.model.m * y;
    const Vector shift = r.model.m * (r.model.recovery * j);
    double worst = 0.0;
    for (std::size_t i = 0; i < my.size(); ++i)
      worst = std::max(worst, std::abs(my[i] - mpy[i] - eps * shift[i]));
    t.check("lp: polytope membership M y = M P_Y + eps M R J (1e-7)", worst <= 1e-7, worst);
  }
}

Matrix gaussian_matrix(Rng& rng, std::size_t r, std::size_t c) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = nd(rng);
  return m;
}

// Exhaustive optimum over basic solutions of {A x <= b, 0 <= x <= 1}.
double brute_force_box_lp(const Matrix& a, const Vector& b, const Vector& c) {
  const std::size_t n = c.size();
  const std::size_t m = b.size();
  const std::size_t total = m + 2 * n;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(total, n);
  Eigen::VectorXd h(total);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) g(i, j) = a(i, j);
    h(i) = b[i];
  }
  for (std::size_t j = 0; j < n; ++j) {
    g(m + j, j) = -1.0;
    h(m + j) = 0.0;
    g(m + n + j, j) = 1.0;
    h(m + n + j) = 1.0;
  }
  double best = std::numeric_limits<double>::infinity();
  std::vector<bool> pick(total, false);
  std::fill(pick.end() - n, pick.end(), true);
  do {
    Eigen::MatrixXd sub(n, n);
    Eigen::VectorXd rhs(n);
    std::size_t r = 0;
    for (std::size_t i = 0; i < total; ++i) {
      if (!pick[i]) continue;
      sub.row(r) = g.row(i);
      rhs(r++) = h(i);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
    if (lu.rank() < static_cast<Eigen::Index>(n)) continue;
    const Eigen::VectorXd x = lu.solve(rhs);
    if (((g * x - h).array() > 1e-9).any()) continue;
    double obj = 0.0;
    for (std::size_t j = 0; j < n; ++j) obj += c[j] * x(j);
    best = std::min(best, obj);
  } while (std::next_permutation(pick.begin(), pick.end()));
  return best;
}

void invariants_prob_info(Tally& t, Rng& rng) {
  // Clamping leaves no negative mass.
  Vector v = testing::dirichlet(rng, 5);
  v[0] -= 5e-10;
  v[1] += 5e-10;
  v[2] = -std::abs(v[2]) * 1e-12;
  double s = 0.0;
  for (double x : v) s += x;
  v[3] += 1.0 - s;
  const Pmf p = Pmf::make(v);
  bool clean = true;
  for (std::size_t i = 0; i < p.size(); ++i) clean &= p[i] >= 0.0;
  t.check("prob: make_pmf leaves no negative entries", clean);

  // MI identity and divergence comparisons.
  const std::size_t ny = 2 + rng() % 5;
  const std::size_t k = 2 + rng() % 4;
  const Vector p_u = testing::dirichlet(rng, k);
  Matrix cond(ny, k);
  Vector p_y(ny, 0.0);
  double h_cond = 0.0;
  for (std::size_t u = 0; u < k; ++u) {
    const Vector c = testing::dirichlet(rng, ny, 0.7);
    h_cond += p_u[u] * entropy(c);
    for (std::size_t y = 0; y < ny; ++y) {
      cond(y, u) = c[y];
      p_y[y] += p_u[u] * c[y];
    }
  }
  const double mi_err = std::abs(mutual_information(p_u, cond, p_y) - (entropy(p_y) - h_cond));
  t.check("info: I(U;Y) = H(Y) - H(Y|U) (1e-10)", mi_err <= 1e-10, mi_err);
  const Vector a = testing::dirichlet(rng, ny);
  const Vector b = testing::spread_pmf(rng, ny);
  const double d1 = l1(a, b);
  t.check("info: chi2 >= l1^2 / 2 >= 0", chi_square(a, b) >= d1 * d1 / 2.0 && d1 >= 0.0);
  t.check("info: divergences vanish on equal inputs",
          l1(b, b) == 0.0 && chi_square(b, b) == 0.0 && std::abs(kl(b, b)) <= 1e-15);
  t.check("info: divergences positive on distinct inputs",
          d1 == 0.0 || (chi_square(a, b) > 0.0 && l1(a, b) > 0.0));
}

void invariants_linalg(Tally& t, Rng& rng, int i) {
  const std::size_t r = 1 + rng() % 20;
  const std::size_t c = 1 + rng() % 20;
  const Matrix a = gaussian_matrix(rng, r, c);
  const SvdResult s = svd(a);
  const std::size_t k = std::min(r, c);
  Matrix us = s.u;
  for (std::size_t x = 0; x < us.rows(); ++x)
    for (std::size_t y = 0; y < k; ++y) us(x, y) *= s.sigma[y];
  const double rec = (a - us * s.v.transpose()).frobenius_norm() / a.frobenius_norm();
  t.check("linalg: svd reconstruction (1e-10 relative)", rec <= 1e-10, rec);
  const double orth = std::max((s.u.transpose() * s.u - Matrix::identity(k)).max_abs(),
                               (s.v.transpose() * s.v - Matrix::identity(k)).max_abs());
  t.check("linalg: svd orthonormality (1e-10)", orth <= 1e-10, orth);

  const Matrix sq = testing::dominant_channel(rng, 2 + i % 5);
  const double pinv_err = (pseudo_inverse(sq) - invert(sq)).max_abs();
  t.check("linalg: pinv = inverse on invertible input (1e-9)", pinv_err <= 1e-9, pinv_err);

  const std::size_t nx = 2 + rng() % 3;
  const Matrix ch = testing::random_channel(rng, nx, nx + 1 + rng() % 3);
  const Matrix null = null_space(ch);
  const double mn = (build_m_matrix(ch) * null).max_abs();
  t.check("linalg: M n = 0 on the null space of P (1e-10)", mn <= 1e-10, mn);
}

void invariants_lp_solver(Tally& t, Rng& rng, int i) {
  std::normal_distribution<double> nd(0.0, 1.0);
  const std::size_t n = 2 + i % 3;
  const std::size_t m = 1 + (i / 3) % 4;
  Matrix a(m, n);
  Vector b(m), c(n);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < n; ++j) a(r, j) = nd(rng);
    b[r] = nd(rng);
  }
  for (double& x : c) x = nd(rng);
  LpProblem lp;
  lp.cost = c;
  lp.ineq_lhs = Matrix(m + n, n);
  lp.ineq_rhs = Vector(m + n);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t j = 0; j < n; ++j) lp.ineq_lhs(r, j) = a(r, j);
    lp.ineq_rhs[r] = b[r];
  }
  for (std::size_t j = 0; j < n; ++j) {
    lp.ineq_lhs(m + j, j) = 1.0;
    lp.ineq_rhs[m + j] = 1.0;
  }
  const LpSolution s1 = solve(lp);
  const LpSolution s2 = solve(lp);
  t.check("lp-solver: identical inputs give identical solutions",
          s1.status == s2.status && s1.z == s2.z && s1.iterations == s2.iterations);
  const double expected = brute_force_box_lp(a, b, c);
  if (std::isinf(expected)) {
    t.check("lp-solver: infeasibility agrees with vertex enumeration",
            s1.status == LpStatus::kInfeasible);
    return;
  }
  t.check("lp-solver: feasible problems solve to optimality", s1.status == LpStatus::kOptimal);
  if (s1.status != LpStatus::kOptimal) return;
  const double viol = max_violation(lp, s1.z);
  t.check("lp-solver: optimal point re-checks feasible (1e-9)", viol <= 1e-9, viol);
  const double gap = std::abs(s1.objective - expected);
  t.check("lp-solver: optimum matches vertex enumeration (1e-6)", gap <= 1e-6, gap);
}

void invariants_invertible(Tally& t, Rng& rng, int i) {
  const std::size_t n = 2 + i % 3;
  const std::size_t k = 2 + i % 3;
  Vector eps = testing::sorted_budgets(rng, k, 1e-3, 1e-2);
  for (std::size_t u = 2; u < k; ++u) eps[u] = std::min(eps[u], 0.9 * eps[1]);
  std::sort(eps.begin(), eps.end(), std::greater<>());
  const ProblemInstance inst = testing::invertible_instance(rng, n, eps);
  const MechanismDesign d = design_invertible(inst);
  check_design(t, inst, d, "invertible");
  t.check("invertible: support is {u1, u2} when eps3 < eps2",
          d.support() == std::vector<std::size_t>{0, 1});
  const SpectralDesign s = compute_w(inst);
  const double swap =
      std::abs(closed_form_utility(eps[0], eps[1], s.sigma_max) -
               closed_form_utility(eps[1], eps[0], s.sigma_max));
  t.check("invertible: approximation symmetric under eps1 <-> eps2", swap <= 1e-18, swap);
  const double pu_err = std::abs(d.p_u[0] - eps[1] / (eps[0] + eps[1]));
  t.check("invertible: P_U(u1) = eps2 / (eps1 + eps2)", pu_err <= 1e-15, pu_err);

  // Local accuracy on the symmetric family.
  const double delta = testing::uniform(rng, 0.05, 0.4);
  const double e1 = testing::uniform(rng, 1e-3, 1e-2);
  const double e2 = testing::uniform(rng, 0.2, 1.0) * e1;
  auto gap = [&](double scale) {
    const MechanismDesign m =
        design_invertible(testing::symmetric_instance(delta, {e1 * scale, e2 * scale}));
    return std::abs(m.exact_utility - m.approx_utility);
  };
  const double g1 = gap(1.0);
  const double g2 = gap(0.5);
  t.check("invertible: halving budgets shrinks |exact - approx| >= 4x", g1 >= 4.0 * g2,
          g1 > 0.0 ? 4.0 * g2 / g1 : 0.0);
}

void invariants_polytope(Tally& t, Rng& rng, int i) {
  const std::size_t ny = 3 + i % 2;
  const std::size_t k = 2 + i % 2;
  const ProblemInstance inst =
      testing::l1_instance(rng, 2, ny, testing::sorted_budgets(rng, k, 0.0, 1e-2));
  const LpRun mid = run_lp(inst);
  if (mid.result) check_lp_design(t, inst, *mid.result);

  const LpRun lo = run_lp(uniform_budgets(inst, inst.budgets().smallest()));
  const LpRun hi = run_lp(uniform_budgets(inst, inst.budgets().largest()));
  t.check("polytope: sandwich on exact utility (1e-6)",
          lo.exact <= mid.exact + 1e-6 && mid.exact <= hi.exact + 1e-6,
          std::max({lo.exact - mid.exact, mid.exact - hi.exact, 0.0}));

  const std::size_t which = rng() % k;
  Vector raised(inst.budgets().values());
  const double ceiling = which == 0 ? raised[0] * 1.5 + 1e-3 : raised[which - 1];
  raised[which] = testing::uniform(rng, raised[which], ceiling);
  const LpRun up = run_lp(inst.with_budgets(BudgetVector::make(raised)));
  t.check("polytope: raising one budget never lowers approx utility",
          up.approx >= mid.approx - 1e-9, std::max(mid.approx - up.approx, 0.0));
}

void invariants_linearization(Tally& t) {
  const PolytopeModel model = build_polytope_model(reference::instance(), LpMode::kFullRowRank);
  const VertexEnumeration e = enumerate_extreme_points(model);
  for (const ExtremePoint& p : e.points) {
    for (double sign : {1.0, -1.0}) {
      const Vector j{0.5 * sign, -0.5 * sign};
      auto gap = [&](double eps) {
        const double linear = -(p.b + eps * dot(p.a, j));
        return std::abs(entropy(p.vertex(eps, j, 4)) - linear);
      };
      const double g1 = gap(0.01);
      const double g2 = gap(0.005);
      t.check("polytope: entropy linearization gap shrinks >= 4x", g1 >= 4.0 * g2 * (1 - 1e-9),
              g1 > 0.0 ? 4.0 * g2 / g1 : 0.0);
    }
  }
}

void invariants_oracle(Tally& t, Rng& rng, int i) {
  const bool chi = i % 2 == 0;
  const ProblemInstance inst =
      chi ? testing::invertible_instance(rng, 2, testing::sorted_budgets(rng, 2, 1e-3, 1e-2))
          : testing::l1_instance(rng, 2, 3, testing::sorted_budgets(rng, 2, 0.0, 1e-2));
  OracleConfig cfg;
  cfg.grid_step = 0.02;
  const OracleResult r = brute_force(inst, cfg);
  const MechanismDesign audit = assess_filter(inst, Channel::make(r.filter));
  const double excess = std::max(audit.worst_budget_excess(), 0.0);
  t.check("oracle: output feasible on exact re-audit (1e-12)", excess <= 1e-12, excess);
  OracleConfig rnd;
  rnd.random = true;
  rnd.max_random_samples = 300;
  rnd.seed = static_cast<std::uint64_t>(i);
  t.check("oracle: same seed gives the same filter",
          brute_force(inst, rnd).filter == brute_force(inst, rnd).filter);
  const double designer = chi ? design_invertible(inst).exact_utility : run_lp(inst).exact;
  const double o = r.design.exact_utility;
  t.check("oracle: grid 0.02 value + 5e-3 >= designer value", o + 5e-3 >= designer,
          std::max(designer - o, 0.0));
  t.check("oracle: designer value >= grid 0.02 value - 5e-3", designer >= o - 5e-3,
          std::max(o - designer, 0.0));
}

Outcome criterion_9() {
  constexpr int kCases = 1000;
  Rng rng(2009);
  Tally t;
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < kCases; ++i) {
    invariants_prob_info(t, rng);
    invariants_linalg(t, rng, i);
    invariants_lp_solver(t, rng, i);
    invariants_invertible(t, rng, i);
    invariants_polytope(t, rng, i);
    invariants_oracle(t, rng, i);
  }
  invariants_linearization(t);
  // The reference design itself.
  const LpDesignResult ref = design_lp(reference::instance());
  check_lp_design(t, reference::instance(), ref);
  t.print();
  char buf[80];
  std::snprintf(buf, sizeof buf, "%d randomized cases per module, %.0f ms", kCases,
                elapsed_ms(start));
  return {t.all_pass(), buf};
}

int run(int n) {
  static const std::vector<std::pair<const char*, std::function<Outcome()>>> kCriteria = {
      {"worked example reproduction", criterion_1},
      {"closed-form utility identity", criterion_2},
      {"second-order accuracy", criterion_3},
      {"binary support of the closed-form design", criterion_4},
      {"sandwich bounds for both designers", criterion_5},
      {"oracle consistency", criterion_6},
      {"pseudo-inverse identities", criterion_7},
      {"hybrid perfect privacy on the worked example", criterion_8},
      {"invariant suite", criterion_9},
  };
  const auto& [name, fn] = kCriteria[static_cast<std::size_t>(n - 1)];
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  std::printf("criterion %d (%s): %s  %s\n", n, name, o.pass ? "PASS" : "FAIL", o.summary.c_str());
  std::fflush(stdout);
  return o.pass ? 0 : 1;
}

}  // namespace
}  // namespace privdesign::acceptance

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      which.push_back(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
      return 2;
    }
  }
  if (which.empty())
    for (int n = 1; n <= 9; ++n) which.push_back(n);
  int failures = 0;
  for (int n : which) {
    if (n < 1 || n > 9) {
      std::fprintf(stderr, "criterion must be 1..9\n");
      return 2;
    }
    failures += privdesign::acceptance::run(n);
  }
  return failures == 0 ? 0 : 1;
}
