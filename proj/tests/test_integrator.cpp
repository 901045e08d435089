#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "gsdde/error.hpp"
#include "gsdde/integrator.hpp"
#include "gsdde/registry.hpp"
#include "gsdde/scenario.hpp"

using namespace gsdde;

namespace {

GsddeModel simple_model(const char* f, const char* g, const char* h, double tau,
                        const char* delta) {
  GsddeModel m;
  m.drift_f = parse_expr(f);
  m.qv_coeff_g = parse_expr(g);
  m.noise_h = parse_expr(h);
  m.delay.tau = tau;
  m.delay.delta = parse_expr(delta);
  m.delay.delta_dot_bound = 0.0;
  m.vol = {1.0, 1.0};
  return m;
}

}  // namespace

TEST_CASE("zero dynamics keep the initial value") {
  const TimeGrid grid{1.0, 100};
  const auto model = validate_model(simple_model("0", "0", "0", 0.1, "0.1"),
                                    {parse_expr("3.25"), 0.1}, grid);
  const std::vector<double> zeta(grid.steps, 0.7);
  const auto p = integrate_path(model, zeta, grid, 1.0);
  for (std::ptrdiff_t i = -10; i <= 100; ++i) CHECK(p.at(i) == 3.25);
  CHECK_FALSE(p.exploded());
}

TEST_CASE("single hand-computed step") {
  auto r = example41(0.01);
  r.model.delay.delta = parse_expr("0");
  r.history.eta = parse_expr("1");
  const TimeGrid grid{0.001, 1};
  const auto model = validate_model(r.model, r.history, grid);
  const std::vector<double> zeta{0.0};
  const auto p = integrate_path(model, zeta, grid, 1.0);
  CHECK(p.at(1) == 0.998);

  // With the constant delay of the example the lookback hits eta(-0.01) = 1.
  auto r2 = example41(0.01);
  r2.history.eta = parse_expr("1");
  const auto model2 = validate_model(r2.model, r2.history, TimeGrid{0.01, 10});
  const std::vector<double> zeros(10, 0.0);
  CHECK(integrate_path(model2, zeros, TimeGrid{0.01, 10}, 1.0).at(1) == 0.998);
}

TEST_CASE("linear drift matches the closed-form recursion") {
  const TimeGrid grid{1.0, 1000};
  const auto model = validate_model(simple_model("-x", "0", "0", 0.001, "0"),
                                    {parse_expr("1"), 0.001}, grid);
  const std::vector<double> zeta(grid.steps, 0.0);
  const auto p = integrate_path(model, zeta, grid, 1.0);
  const double dt = grid.dt();
  for (std::size_t i = 0; i <= grid.steps; ++i) {
    const double exact = std::pow(1.0 - dt, static_cast<double>(i));
    CHECK(std::fabs(p.at(static_cast<std::ptrdiff_t>(i)) - exact) <= 1e-14);
  }
}

TEST_CASE("quadratic variation term uses sigma squared dt") {
  const TimeGrid grid{1.0, 10};
  auto m = simple_model("0", "1", "0", 0.1, "0");
  m.vol = {0.25, 1.0};
  const auto model = validate_model(m, {parse_expr("0"), 0.1}, grid);
  const std::vector<double> zeta(grid.steps, 0.0);
  const auto p = integrate_path(model, zeta, grid, 0.5);
  double x = 0.0;
  for (std::size_t i = 1; i <= grid.steps; ++i) {
    x = x + 1.0 * 0.25 * grid.dt();
    CHECK(p.at(static_cast<std::ptrdiff_t>(i)) == x);
  }
}

TEST_CASE("noise term uses h at the left endpoint") {
  const TimeGrid grid{1.0, 4};
  const auto model = validate_model(simple_model("0", "0", "1 + t", 0.25, "0"),
                                    {parse_expr("0"), 0.25}, grid);
  const std::vector<double> zeta{1.0, 2.0, 3.0, 4.0};
  const auto p = integrate_path(model, zeta, grid, 1.0);
  CHECK(p.at(1) == 1.0);
  CHECK(p.at(2) == 1.0 + 1.25 * 2.0);
  CHECK(p.at(3) == 1.0 + 1.25 * 2.0 + 1.5 * 3.0);
  CHECK(p.at(4) == 1.0 + 1.25 * 2.0 + 1.5 * 3.0 + 1.75 * 4.0);
}

TEST_CASE("history segment equals eta on the grid") {
  const auto r = example41(0.08);
  const TimeGrid grid{1.0, 1000};
  const auto model = validate_model(r.model, r.history, grid);
  const std::vector<double> zeta(grid.steps, 0.0);
  const auto p = integrate_path(model, zeta, grid, 1.0);
  CHECK(p.history_steps == 80);
  for (std::ptrdiff_t i = -80; i <= 0; ++i) {
    CHECK(p.at(i) == 2.0 + std::sin(static_cast<double>(i) * grid.dt()));
  }
}

TEST_CASE("delayed state lookups") {
  const InitialHistory history{parse_expr("2 + sin(u)"), 0.01};
  const double dt = 0.001;
  const std::size_t r = 10;
  std::vector<double> known(r + 6);
  for (std::size_t i = 0; i < known.size(); ++i) known[i] = 100.0 + static_cast<double>(i);
  std::size_t interp = 0;

  // Aligned constant delay returns the stored value.
  CHECK(delayed_state(known, r, history, dt, 0.005, 0.002, &interp) == known[r + 3]);
  // Zero delay returns the current state.
  CHECK(delayed_state(known, r, history, dt, 0.005, 0.0, &interp) == known[r + 5]);
  CHECK(interp == 0);
  // Lookback into the history evaluates eta directly.
  CHECK(delayed_state(known, r, history, dt, 0.0, 0.005, &interp) ==
        2.0 + std::sin(-0.005));
  CHECK(delayed_state(known, r, history, dt, 0.003, 0.008, &interp) ==
        2.0 + std::sin(0.003 - 0.008));
  CHECK(interp == 0);
  // Off-grid lookback interpolates and counts.
  const double v = delayed_state(known, r, history, dt, 0.005, 0.0015, &interp);
  CHECK(v == doctest::Approx(0.5 * known[r + 3] + 0.5 * known[r + 4]));
  CHECK(interp == 1);

  try {
    delayed_state(known, r, history, dt, 0.001, 0.02, &interp);
    FAIL("expected LookbackBeforeHistory");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::LookbackBeforeHistory);
  }
}

TEST_CASE("aligned constant delay never interpolates") {
  for (double delay : {0.01, 0.08, 2.0}) {
    const auto r = example41(delay);
    const TimeGrid grid{4.0, 4000};
    const auto model = validate_model(r.model, r.history, grid);
    const auto g = build_volatility_grid(r.model.vol, 3);
    const auto s = generate_ensemble(g, 4, grid, 11);
    const auto e = integrate_ensemble(model, s);
    CHECK(e.interpolation_count() == 0);
  }
}

TEST_CASE("variable delay interpolates") {
  auto r = example41(0.5);
  r.model.delay.delta = parse_expr("0.25 + 0.2*sin(t)");
  r.model.delay.delta_dot_bound = 0.2;
  const TimeGrid grid{2.0, 2000};
  const auto model = validate_model(r.model, r.history, grid);
  const std::vector<double> zeta(grid.steps, 0.0);
  const auto p = integrate_path(model, zeta, grid, 1.0);
  CHECK(p.interpolations > 0);
  CHECK_FALSE(p.exploded());
}

TEST_CASE("explosion is flagged at the first non-finite value") {
  const TimeGrid grid{1.0, 100};
  const auto model = validate_model(simple_model("x^3", "0", "0", 0.01, "0"),
                                    {parse_expr("10"), 0.01}, grid);
  const std::vector<double> zeta(grid.steps, 0.0);
  const auto p = integrate_path(model, zeta, grid, 1.0);
  REQUIRE(p.exploded());
  const std::size_t at = *p.exploded_at;
  CHECK(at > 0);
  for (std::size_t i = 0; i < at; ++i) {
    CHECK(std::isfinite(p.at(static_cast<std::ptrdiff_t>(i))));
    CHECK(p.valid_at(i));
  }
  CHECK_FALSE(p.valid_at(at));
  CHECK(std::isnan(p.at(static_cast<std::ptrdiff_t>(at))));

  const auto g = build_volatility_grid({1.0, 1.0}, 1);
  const auto s = generate_ensemble(g, 3, grid, 1);
  try {
    integrate_ensemble(model, s);
    FAIL("expected AllPathsExploded");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::AllPathsExploded);
  }
}

TEST_CASE("singleton ensemble reduces to one path") {
  const auto r = example41(0.01);
  const TimeGrid grid{2.0, 2000};
  const auto model = validate_model(r.model, r.history, grid);
  const auto g = build_volatility_grid({1.0, 1.0}, 1);
  const auto s = generate_ensemble(g, 1, grid, 5);
  const auto e = integrate_ensemble(model, s);
  const auto p = integrate_path(model, s.increments(0, 0), grid, g.levels[0]);
  CHECK(e.path(0, 0).values == p.values);
}

TEST_CASE("serial and parallel ensembles are bit-identical") {
  const auto r = example41(0.08);
  const TimeGrid grid{5.0, 5000};
  const auto model = validate_model(r.model, r.history, grid);
  const auto g = build_volatility_grid(r.model.vol, 5);
  const auto s = generate_ensemble(g, 20, grid, 42);
  const auto a = integrate_ensemble(model, s, Backend::Serial);
  const auto b = integrate_ensemble(model, s, Backend::OpenMP);
  const auto c = integrate_ensemble(model, s, Backend::OpenMP);
  for (std::size_t i = 0; i < a.paths().size(); ++i) {
    CHECK(a.paths()[i].values == b.paths()[i].values);
    CHECK(b.paths()[i].values == c.paths()[i].values);
  }
}

TEST_CASE("stable regime of the example stays finite") {
  const auto r = example41(0.01);
  const TimeGrid grid{20.0, 20000};
  const auto model = validate_model(r.model, r.history, grid);
  const auto g = build_volatility_grid(r.model.vol, 5);
  const auto e = integrate_ensemble(model, generate_ensemble(g, 20, grid, 42));
  CHECK(e.exploded_count() == 0);
  CHECK(e.paths().size() == 100);
}

TEST_CASE("classical limit second moment") {
  const TimeGrid grid{1.0, 1000};
  const double h = 0.7;
  auto m = simple_model("-x", "0", "0.7", 0.001, "0");
  m.vol = {1.44, 1.44};
  const auto model = validate_model(m, {parse_expr("1"), 0.001}, grid);
  const auto g = build_volatility_grid(m.vol, 1);
  const std::size_t n = 4000;
  const auto e = integrate_ensemble(model, generate_ensemble(g, n, grid, 3));

  const double dt = grid.dt();
  double v = 1.0;
  for (std::size_t i = 0; i < grid.steps; ++i) {
    v = (1.0 - dt) * (1.0 - dt) * v + h * h * 1.44 * dt;
  }
  double m2 = 0.0;
  double m4 = 0.0;
  for (const auto& p : e.paths()) {
    const double x2 = p.at(1000) * p.at(1000);
    m2 += x2;
    m4 += x2 * x2;
  }
  m2 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);
  const double se = std::sqrt((m4 - m2 * m2) / static_cast<double>(n));
  CHECK(std::fabs(m2 - v) <= 3.0 * se);
}
