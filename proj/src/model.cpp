#include "gsdde/model.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "gsdde/error.hpp"

namespace gsdde {

namespace {

constexpr std::uint8_t bit(Var v) {
  return static_cast<std::uint8_t>(1u << static_cast<unsigned>(v));
}

void require_variables(const Expr& e, std::uint8_t allowed, const char* role) {
  const std::uint8_t extra = e.variables() & ~allowed;
  if (extra == 0) return;
  std::string names;
  for (unsigned i = 0; i < kVarCount; ++i) {
    if (extra & (1u << i)) {
      if (!names.empty()) names += ", ";
      names += var_name(static_cast<Var>(i));
    }
  }
  throw Error(Errc::VariableNotAllowed, std::string(role) + " '" + e.source() +
                                            "' may not reference " + names);
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

ValidatedModel validate_model(const GsddeModel& model,
                              const InitialHistory& history,
                              const TimeGrid& grid) {
  require_valid(grid);
  const double tau = model.delay.tau;
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw Error(Errc::NonPositiveTau, "tau must be positive, got " + num(tau));
  }
  if (history.tau != tau) {
    throw Error(Errc::InvalidParameter,
                "initial history is defined on [-" + num(history.tau) +
                    ", 0] but the model delay horizon is " + num(tau));
  }
  const auto& vol = model.vol;
  if (!(vol.sigma_lower_sq > 0.0) || !std::isfinite(vol.sigma_upper_sq)) {
    throw Error(Errc::VolatilityOrderViolation,
                "volatility bounds must satisfy 0 < sigma_lower^2 <= sigma_upper^2 < inf");
  }
  if (vol.sigma_lower_sq > vol.sigma_upper_sq) {
    throw Error(Errc::VolatilityOrderViolation,
                "sigma_lower^2 = " + num(vol.sigma_lower_sq) +
                    " exceeds sigma_upper^2 = " + num(vol.sigma_upper_sq));
  }
  const double dbar = model.delay.delta_dot_bound;
  if (!(dbar < 1.0)) {
    throw Error(Errc::DeltaDotBoundNotLessThanOne,
                "delta_dot_bound must be < 1, got " + num(dbar));
  }
  if (!(model.growth_K > 0.0) || model.growth_q1 < 0.0 || model.growth_q2 < 0.0) {
    throw Error(Errc::InvalidParameter,
                "growth constants need K > 0 and q1, q2 >= 0");
  }

  const std::uint8_t xyt = bit(Var::X) | bit(Var::Y) | bit(Var::T);
  require_variables(model.drift_f, xyt, "f");
  require_variables(model.qv_coeff_g, xyt, "g");
  if (model.noise_h.uses(Var::X) || model.noise_h.uses(Var::Y)) {
    throw Error(Errc::NonDeterministicH,
                "h '" + model.noise_h.source() + "' must depend on t only");
  }
  require_variables(model.noise_h, bit(Var::T), "h");
  require_variables(model.delay.delta, bit(Var::T), "delta");
  require_variables(history.eta, bit(Var::U), "eta");

  const double dt = grid.dt();
  double prev = 0.0;
  for (std::size_t i = 0; i <= grid.steps; ++i) {
    const double t = grid.at(static_cast<std::ptrdiff_t>(i));
    const double d = model.delay.delta.eval(0.0, 0.0, t);
    if (!(d >= 0.0 && d <= tau)) {
      throw Error(Errc::DelayOutOfRange,
                  "delta(" + num(t) + ") = " + num(d) + " is outside [0, " +
                      num(tau) + "]");
    }
    if (i > 0) {
      const double rate = (d - prev) / dt;
      if (rate > dbar + kDeltaDotTolerance) {
        throw Error(Errc::DelayRateExceedsBound,
                    "finite-difference d(delta)/dt = " + num(rate) + " at t = " +
                        num(t) + " exceeds delta_dot_bound = " + num(dbar));
      }
    }
    prev = d;
  }

  const std::size_t hist_points =
      static_cast<std::size_t>(std::ceil(tau / dt - 1e-9)) + 1;
  for (std::size_t i = 0; i <= hist_points; ++i) {
    const double u = i == hist_points ? -tau : -static_cast<double>(i) * dt;
    const double v = history.eta.eval(0.0, 0.0, 0.0, u < -tau ? -tau : u);
    if (!std::isfinite(v)) {
      throw Error(Errc::NonFiniteHistory,
                  "eta(" + num(u) + ") is not finite");
    }
  }

  return ValidatedModel(model, history, grid);
}

ValidatedModel validate_model(const ValidatedModel& validated) {
  return validate_model(validated.model(), validated.history(),
                        validated.checked_grid());
}

bool same_model(const ValidatedModel& a, const ValidatedModel& b) {
  const auto& ma = a.model();
  const auto& mb = b.model();
  return ma.drift_f == mb.drift_f && ma.qv_coeff_g == mb.qv_coeff_g &&
         ma.noise_h == mb.noise_h && ma.delay.delta == mb.delay.delta &&
         ma.delay.tau == mb.delay.tau &&
         ma.delay.delta_dot_bound == mb.delay.delta_dot_bound &&
         ma.vol.sigma_lower_sq == mb.vol.sigma_lower_sq &&
         ma.vol.sigma_upper_sq == mb.vol.sigma_upper_sq &&
         ma.growth_K == mb.growth_K && ma.growth_q1 == mb.growth_q1 &&
         ma.growth_q2 == mb.growth_q2 &&
         a.history().eta == b.history().eta && a.history().tau == b.history().tau &&
         a.checked_grid().horizon == b.checked_grid().horizon &&
         a.checked_grid().steps == b.checked_grid().steps;
}

}  // namespace gsdde
