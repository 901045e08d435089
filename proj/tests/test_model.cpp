#include <doctest.h>

#include <cmath>

#include "gsdde/error.hpp"
#include "gsdde/keyvalue.hpp"
#include "gsdde/model.hpp"
#include "gsdde/registry.hpp"
#include "gsdde/time_grid.hpp"

using namespace gsdde;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::IoError;
}

const TimeGrid kGrid{1.0, 1000};

}  // namespace

TEST_CASE("example model validates") {
  const auto r = example41(0.01);
  const auto v = validate_model(r.model, r.history, kGrid);
  CHECK(v.f(2.0, 1.0, 0.0) == -9.0);
  CHECK(v.h(0.0) == 0.5);
  CHECK(v.g_is_zero());
  CHECK(v.delta(0.3) == 0.01);
  CHECK(v.eta(0.0) == 2.0);
  CHECK(v.tau() == 0.01);
}

TEST_CASE("model validation errors") {
  auto base = example41(0.01);

  SUBCASE("variance ordering") {
    base.model.vol = {2.0, 1.0};
    CHECK(code_of([&] { validate_model(base.model, base.history, kGrid); }) ==
          Errc::VolatilityOrderViolation);
  }
  SUBCASE("non-positive lower variance") {
    base.model.vol = {0.0, 1.0};
    CHECK(code_of([&] { validate_model(base.model, base.history, kGrid); }) ==
          Errc::VolatilityOrderViolation);
  }
  SUBCASE("delay beyond tau") {
    base.model.delay.delta = parse_expr("0.02");
    CHECK(code_of([&] { validate_model(base.model, base.history, kGrid); }) ==
          Errc::DelayOutOfRange);
  }
  SUBCASE("negative delay") {
    base.model.delay.delta = parse_expr("-0.001");
    CHECK(code_of([&] { validate_model(base.model, base.history, kGrid); }) ==
          Errc::DelayOutOfRange);
  }
  SUBCASE("tau") {
    base.model.delay.tau = 0.0;
    base.history.tau = 0.0;
    CHECK(code_of([&] { validate_model(base.model, base.history, kGrid); }) ==
          Errc::NonPositiveTau);
  }
  SUBCASE("delta_bar must stay below one") {
    base.model.delay.delta_dot_bound = 1.0;
    CHECK(code_of([&] { validate_model(base.model, base.history, kGrid); }) ==
          Errc::DeltaDotBoundNotLessThanOne);
  }
  SUBCASE("declared rate is spot checked") {
    base.model.delay.tau = 1.0;
    base.history.tau = 1.0;
    base.model.delay.delta = parse_expr("0.5*t");
    base.model.delay.delta_dot_bound = 0.1;
    CHECK(code_of([&] { validate_model(base.model, base.history, kGrid); }) ==
          Errc::DelayRateExceedsBound);
    base.model.delay.delta_dot_bound = 0.5;
    CHECK_NOTHROW(validate_model(base.model, base.history, kGrid));
  }
  SUBCASE("h may only depend on t") {
    base.model.noise_h = parse_expr("x*exp(-t)");
    CHECK(code_of([&] { validate_model(base.model, base.history, kGrid); }) ==
          Errc::NonDeterministicH);
    base.model.noise_h = parse_expr("y");
    CHECK(code_of([&] { validate_model(base.model, base.history, kGrid); }) ==
          Errc::NonDeterministicH);
  }
  SUBCASE("f may not use u") {
    base.model.drift_f = parse_expr("u - x");
    CHECK(code_of([&] { validate_model(base.model, base.history, kGrid); }) ==
          Errc::VariableNotAllowed);
  }
  SUBCASE("history must be finite") {
    base.history.eta = parse_expr("1/u");
    CHECK(code_of([&] { validate_model(base.model, base.history, kGrid); }) ==
          Errc::NonFiniteHistory);
  }
}

TEST_CASE("validation is idempotent") {
  const auto r = example41(0.08);
  const auto v = validate_model(r.model, r.history, TimeGrid{20.0, 20000});
  const auto again = validate_model(v);
  CHECK(same_model(v, again));
  CHECK(again.checked_grid().steps == v.checked_grid().steps);
  CHECK(again.model().drift_f == v.model().drift_f);
}

TEST_CASE("validated delays stay inside the history window") {
  auto r = example41(0.5);
  r.model.delay.delta = parse_expr("0.25 + 0.25*sin(t)");
  r.model.delay.delta_dot_bound = 0.25;
  const TimeGrid grid{5.0, 5000};
  const auto v = validate_model(r.model, r.history, grid);
  for (std::size_t i = 0; i <= grid.steps; ++i) {
    const double t = grid.at(static_cast<std::ptrdiff_t>(i));
    const double d = v.delta(t);
    CHECK(d >= 0.0);
    CHECK(d <= v.tau());
    CHECK(t - d >= -v.tau());
  }
}

TEST_CASE("initial history extension") {
  const InitialHistory h{parse_expr("2 + sin(u)"), 1.0};
  CHECK(h.at(0.0) == 2.0);
  CHECK(h.at(-1.0) == 2.0 + std::sin(-1.0));
  CHECK(h.at(-1.5) == h.at(-1.0));
  CHECK(h.at(-2.0) == h.at(-1.0));
}

TEST_CASE("time grid") {
  const TimeGrid g{20.0, 20000};
  CHECK(g.dt() == 0.001);
  CHECK(g.points() == 20001);
  CHECK(g.history_steps(0.01) == 10);
  CHECK(g.history_steps(2.0) == 2000);
  CHECK(g.aligned_with(0.08));
  CHECK_FALSE(g.aligned_with(0.0015));
  CHECK_THROWS_AS(g.history_steps(0.0015), Error);

  const auto same = align_to_delay(g, 0.01);
  CHECK_FALSE(same.adjusted);
  CHECK(same.grid.steps == 20000);

  const auto adjusted = align_to_delay(TimeGrid{1.0, 10}, 0.3);
  CHECK_FALSE(adjusted.adjusted);
  const auto up = align_to_delay(TimeGrid{1.0, 7}, 0.25);
  CHECK(up.adjusted);
  CHECK(up.grid.steps == 8);

  CHECK(code_of([] { require_valid(TimeGrid{0.0, 10}); }) == Errc::InvalidParameter);
  CHECK(code_of([] { require_valid(TimeGrid{1.0, 0}); }) == Errc::InvalidParameter);
}

TEST_CASE("key value files") {
  const auto f = KeyValueFile::parse("# comment\n\nf = -x^3 - y  # trailing\n  tau=0.01\n",
                                     "model.conf");
  REQUIRE(f.find("f"));
  CHECK(f.find("f")->value == "-x^3 - y");
  CHECK(f.find("f")->line == 3);
  CHECK(f.find("tau")->value == "0.01");
  CHECK(f.where("tau") == "model.conf:4");
  CHECK(f.find("g") == nullptr);

  try {
    KeyValueFile::parse("a = 1\nb = 2\na = 3\n", "dup.conf");
    FAIL("expected duplicate error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ConfigError);
    CHECK(std::string(e.what()).find("dup.conf:3") != std::string::npos);
  }
  try {
    KeyValueFile::parse("a = 1\njunk\n", "bad.conf");
    FAIL("expected syntax error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("bad.conf:2") != std::string::npos);
  }
  CHECK_THROWS_AS(KeyValueFile::load("/nonexistent/file.conf"), Error);
}

TEST_CASE("registry") {
  CHECK(registry_names().size() == 2);
  CHECK(registry_model("example41").name == "example41");
  CHECK(registry_model("linear-ou").model.drift_f == parse_expr("-x"));
  CHECK(code_of([] { registry_model("nope"); }) == Errc::ConfigError);
  const auto ou = linear_ou();
  CHECK_NOTHROW(validate_model(ou.model, ou.history, TimeGrid{1.0, 1000}));
}
