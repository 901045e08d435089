// Acceptance gate: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "axiom_suite.hpp"
#include "gsdde/error.hpp"
#include "gsdde/experiment.hpp"
#include "gsdde/integrator.hpp"
#include "gsdde/parallel.hpp"
#include "gsdde/registry.hpp"
#include "gsdde/stability.hpp"

using namespace gsdde;
namespace fs = std::filesystem;

namespace {

// Tolerances and limits, pinned.
constexpr double kDelayBoundTol = 1e-12;
constexpr double kBdgTol = 1e-12;
constexpr std::size_t kAxiomArrays = 1000;
constexpr double kAxiomSeconds = 5.0;
constexpr double kStandardErrors = 3.0;
constexpr double kClassicalSeconds = 30.0;
constexpr double kRecursionTol = 1e-14;
constexpr double kCheckTol = 1e-9;
constexpr double kLipschitzPerturbedTol = 1e-6;
constexpr double kCheckSeconds = 60.0;
constexpr double kFigureSeconds = 120.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("gsdde_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome delay_bound_arithmetic() {
  const auto b = delay_bound({0.1, 0.05, kUnboundedBeta, 1.0, 1.0, 1.0});
  const double exact = std::sqrt(1.0 / 150.0);
  const double err = std::fabs(b.value - exact);
  return {err <= kDelayBoundTol && b.value <= 0.0817 && b.value > 0.08,
          "tau_max = " + num(b.value) + ", |error| = " + num(err)};
}

Outcome bdg_constants() {
  bool ok = bdg_constant(2.0, 1.0).cp == 4.0;
  std::string detail = "C_2 = " + num(bdg_constant(2.0, 1.0).cp);
  // Hand-simplified closed forms of each branch.
  const std::pair<double, double> cases[] = {
      {0.5, 2.0 * std::sqrt(2.0)},                  // 64^(1/4)
      {1.0, 4.0 * std::sqrt(2.0)},                  // sqrt(32)
      {3.0, 10.125 * std::sqrt(10.125)},            // (81/8)^(3/2)
      {4.0, (512.0 / 27.0) * (512.0 / 27.0)},       // (1024/54)^2
  };
  for (const auto& [p, expected] : cases) {
    const double cp = bdg_constant(p, 1.0).cp;
    const double err = std::fabs(cp - expected);
    ok = ok && err <= kBdgTol;
    detail += ", C_" + num(p) + " err " + num(err);
  }
  return {ok, detail};
}

Outcome sublinear_axioms() {
  const auto start = std::chrono::steady_clock::now();
  const auto rational = axiom_suite::run_rational(kAxiomArrays, 2026);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto dbl = axiom_suite::run_double_exact(kAxiomArrays, 2027);
  const bool ok = rational.arrays == kAxiomArrays && rational.failures() == 0 &&
                  dbl.failures() == 0 && secs < kAxiomSeconds;
  std::string detail = std::to_string(rational.arrays) + " rational arrays, " +
                       std::to_string(rational.failures()) + " failures; " +
                       std::to_string(dbl.arrays) + " exact-double arrays, " +
                       std::to_string(dbl.failures()) + " failures; " + num(secs) + " s";
  if (!rational.first_failure.empty()) detail += "; first: " + rational.first_failure;
  if (!dbl.first_failure.empty()) detail += "; first: " + dbl.first_failure;
  return {ok, detail};
}

Outcome classical_limit() {
  const auto start = std::chrono::steady_clock::now();
  // 10^4 paths split into two groups of 5000 equal levels.
  ExperimentConfig c;
  const auto ou = linear_ou();
  c.model = ou.model;
  c.history = ou.history;
  c.m = 5000;
  c.n = 2;
  c.steps = 1000;
  c.horizon = 1.0;
  c.seed = 4;
  c.functional = "abs";
  c.exponent = 2.0;
  c.output.paths = true;
  const auto r = simulate(c);
  const auto& e = *r.paths;

  const double dt = r.grid.dt();
  double v = 1.0;
  for (std::size_t i = 0; i < r.grid.steps; ++i) v = (1.0 - dt) * (1.0 - dt) * v + dt;

  const auto last = static_cast<std::ptrdiff_t>(r.grid.steps);
  double sum = 0.0;
  double sq = 0.0;
  for (const auto& p : e.paths()) {
    const double x2 = p.at(last) * p.at(last);
    sum += x2;
    sq += x2 * x2;
  }
  const double total = static_cast<double>(e.paths().size());
  const double mean = sum / total;
  const double sd = std::sqrt((sq - sum * sum / total) / (total - 1.0));
  const double se_all = sd / std::sqrt(total);
  const double se_group = sd / std::sqrt(static_cast<double>(c.m));
  const double gap = r.series.upper.back() - r.series.lower.back();
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const bool ok = e.paths().size() == 10000 && std::fabs(mean - v) <= kStandardErrors * se_all &&
                  gap >= 0.0 && gap < kStandardErrors * se_group && secs < kClassicalSeconds;
  return {ok, "E[X_T^2] = " + num(mean) + " vs recursion " + num(v) + " (" +
                  num(std::fabs(mean - v) / se_all) + " SE); gap " + num(gap) + " = " +
                  num(gap / se_group) + " group SE; " + num(secs) + " s"};
}

Outcome integrator_hand_check() {
  auto r = example41(0.01);
  r.model.delay.delta = parse_expr("0");
  r.history.eta = parse_expr("1");
  const TimeGrid one{0.001, 1};
  const auto model = validate_model(r.model, r.history, one);
  const std::vector<double> zero{0.0};
  const double x1 = integrate_path(model, zero, one, 1.0).at(1);

  GsddeModel lin;
  lin.drift_f = parse_expr("-x");
  lin.qv_coeff_g = parse_expr("0");
  lin.noise_h = parse_expr("0");
  lin.delay.tau = 0.001;
  lin.delay.delta = parse_expr("0");
  const TimeGrid grid{1.0, 1000};
  const auto lm = validate_model(lin, {parse_expr("1"), 0.001}, grid);
  const std::vector<double> zeros(grid.steps, 0.0);
  const auto p = integrate_path(lm, zeros, grid, 1.0);
  double worst = 0.0;
  for (std::size_t i = 0; i <= grid.steps; ++i) {
    const double exact = std::pow(1.0 - grid.dt(), static_cast<double>(i));
    worst = std::max(worst, std::fabs(p.at(static_cast<std::ptrdiff_t>(i)) - exact));
  }
  return {x1 == 0.998 && worst <= kRecursionTol,
          "X(t_1) = " + num(x1) + ", max |X_i - (1-dt)^i| = " + num(worst)};
}

Outcome assumption_checkers() {
  const auto start = std::chrono::steady_clock::now();
  const auto r = example41(0.01);
  const auto model = validate_model(r.model, r.history, TimeGrid{20.0, 20000});
  const auto grid = default_check_grid();
  const CheckReport reports[] = {
      check_polynomial_growth(model, 1.0, 3.0, 0.0, grid, kCheckTol),
      check_khasminskii(r.lyapunov, model, grid, kCheckTol),
      check_delay_lipschitz(model, 1.0, grid, kCheckTol),
      check_stability_assumption(r.lyapunov, model, grid, kCheckTol),
  };
  bool ok = true;
  std::string detail;
  for (const auto& rep : reports) {
    ok = ok && rep.satisfied && rep.max_violation <= kCheckTol;
    detail += rep.name + " " + num(rep.max_violation) + "; ";
  }
  const auto perturbed = check_delay_lipschitz(model, 0.5, grid, kCheckTol);
  ok = ok && !perturbed.satisfied &&
       std::fabs(perturbed.max_violation - 0.5) <= kLipschitzPerturbedTol;
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ok = ok && secs < kCheckSeconds;
  detail += "varpi = 0.5 gives " + num(perturbed.max_violation) + "; " + num(secs) + " s";
  return {ok, detail};
}

Outcome figure_reproduction() {
  bool ok = true;
  std::string detail;
  const std::pair<const char*, Verdict> figures[] = {
      {"fig41", Verdict::Stable}, {"fig42", Verdict::Unstable}, {"fig43", Verdict::Stable}};
  for (const auto& [name, expected] : figures) {
    const auto start = std::chrono::steady_clock::now();
    const auto preset = figure_preset(name);
    auto c = figure_config(preset);
    c.output.dir = scratch(name);
    std::ostringstream log;
    const auto r = run_reproduce(preset, c, log);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ok = ok && r.verdict.verdict == expected && secs < kFigureSeconds;
    detail += std::string(name) + " " + std::string(verdict_name(r.verdict.verdict)) +
              " (tail upper " + num(r.verdict.tail_upper) + ", tail lower " +
              num(r.verdict.tail_lower) + ", " + num(secs) + " s); ";
  }
  return {ok, detail};
}

Outcome determinism() {
  const auto preset = figure_preset("fig41");
  auto c = figure_config(preset);
  c.seed = 42;
  const int before = max_threads();
  std::vector<std::string> csvs;
  for (int threads : {1, 1, 2, 4}) {
    set_thread_cap(threads);
    c.output.dir = scratch("det" + std::to_string(csvs.size()));
    std::ostringstream log;
    run_reproduce(preset, c, log);
    csvs.push_back(slurp(c.output.dir / "fig41.csv"));
  }
  set_thread_cap(before);
  bool ok = !csvs[0].empty();
  for (const auto& s : csvs) ok = ok && s == csvs[0];
  return {ok, std::to_string(csvs.size()) + " runs (threads 1, 1, 2, 4), " +
                  std::to_string(csvs[0].size()) + " bytes each, identical = " +
                  (ok ? "yes" : "no")};
}

Outcome exponent_gate() {
  const bool a = moment_exponent_condition(4.0, 3.0, 0.0, 6.0);
  const bool b = moment_exponent_condition(6.0, 3.0, 0.0, 6.0);
  return {a && !b, std::string("(4,3,0,6) -> ") + (a ? "true" : "false") +
                       ", (6,3,0,6) -> " + (b ? "true" : "false")};
}

}  // namespace

int main() {
  apply_thread_cap_from_env();
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"delay-bound arithmetic", delay_bound_arithmetic},
      {"BDG constants", bdg_constants},
      {"sublinear axiom suite", sublinear_axioms},
      {"classical-limit oracle", classical_limit},
      {"integrator hand-check", integrator_hand_check},
      {"assumption checkers", assumption_checkers},
      {"figure reproduction", figure_reproduction},
      {"determinism", determinism},
      {"moment exponent gate", exponent_gate},
  };
  int failed = 0;
  int index = 1;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("criterion %d %s: %s | %s\n", index++, o.pass ? "PASS" : "FAIL", name,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed;
}
