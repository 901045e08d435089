#include "gsdde/stability.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>

#include "gsdde/error.hpp"
#include "kernels/kernels.hpp"

namespace gsdde {

double g_generator(double alpha, const VolatilityBounds& vol) noexcept {
  const double pos = alpha > 0.0 ? alpha : 0.0;
  const double neg = alpha < 0.0 ? -alpha : 0.0;
  return 0.5 * (vol.sigma_upper_sq * pos - vol.sigma_lower_sq * neg);
}

BdgConstants bdg_constant(double p, double sigma_upper) {
  if (!(p > 0.0)) {
    throw Error(Errc::NonPositiveP, "BDG exponent p must be positive");
  }
  BdgConstants out;
  if (p < 2.0) {
    out.cp = std::pow(32.0 / p, p / 2.0);
  } else if (p == 2.0) {
    out.cp = 4.0;
  } else {
    out.cp = std::pow(std::pow(p, p + 1.0) / (2.0 * std::pow(p - 1.0, p - 1.0)),
                      p / 2.0);
  }
  out.c1 = std::pow(sigma_upper, p);
  out.c2 = out.cp * out.c1;
  return out;
}

DelayBound delay_bound(const DelayBoundInputs& in) {
  auto require_positive = [](double v, const char* name) {
    if (!(v > 0.0)) {
      throw Error(Errc::NonPositiveParameter,
                  std::string(name) + " must be positive");
    }
  };
  require_positive(in.beta1, "beta1");
  require_positive(in.beta2, "beta2");
  require_positive(in.beta3, "beta3");
  require_positive(in.beta4, "beta4");
  require_positive(in.varpi, "varpi");
  require_positive(in.sigma_upper, "sigma_upper");

  const double w2 = in.varpi * in.varpi;
  const double s2 = in.sigma_upper * in.sigma_upper;
  DelayBound out;
  out.drift_term = std::sqrt(4.0 * in.beta1 * in.beta2 / (3.0 * w2));
  out.qv_term = std::isinf(in.beta3)
                    ? kUnboundedBeta
                    : std::sqrt(4.0 * in.beta1 * in.beta3 / (3.0 * w2 * s2));
  out.noise_term = 4.0 * in.beta1 * in.beta4 / (3.0 * w2 * s2);
  out.value = std::fmin(out.drift_term, std::fmin(out.qv_term, out.noise_term));
  return out;
}

UDerivatives numeric_derivatives(const Expr& u, double x, double t) {
  const Bindings at = Bindings::xyt(x, 0.0, t);
  return {partial_derivative(u, Var::T, at), partial_derivative(u, Var::X, at),
          second_partial_derivative(u, Var::X, at)};
}

double lu_from_derivatives(const UDerivatives& d, const ValidatedModel& model,
                           double x, double y, double t) {
  const double h = model.h(t);
  const double g = model.g_is_zero() ? 0.0 : model.g(x, y, t);
  return d.u_t + d.u_x * model.f(x, x, t) +
         g_generator(2.0 * g * d.u_x + h * h * d.u_xx, model.model().vol);
}

double lbar_u_from_derivatives(const UDerivatives& d, const ValidatedModel& model,
                               double x, double y, double t) {
  const double h = model.h(t);
  const double g = model.g_is_zero() ? 0.0 : model.g(x, y, t);
  return d.u_t + d.u_x * model.f(x, y, t) +
         g_generator(2.0 * d.u_x * g + d.u_xx * h * h, model.model().vol);
}

double lyapunov_operator_LU(const LyapunovSpec& spec, const ValidatedModel& model,
                            double x, double y, double t) {
  return lu_from_derivatives(numeric_derivatives(spec.U, x, t), model, x, y, t);
}

double lyapunov_operator_LbarU(const LyapunovSpec& spec,
                               const ValidatedModel& model, double x, double y,
                               double t) {
  return lbar_u_from_derivatives(numeric_derivatives(spec.Ubar, x, t), model, x,
                                 y, t);
}

std::size_t Axis::count() const {
  if (!(step > 0.0) || !(max >= min) || !std::isfinite(min) || !std::isfinite(max)) {
    throw Error(Errc::InvalidParameter,
                "grid axis needs min <= max and a positive step");
  }
  return static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
}

CheckGrid default_check_grid() {
  return {{-5.0, 5.0, 0.05}, {-5.0, 5.0, 0.05}, {0.0, 10.0, 0.1}};
}

bool moment_exponent_condition(double p, double q1, double q2, double q) noexcept {
  return p >= 2.0 && std::fmax(p + q1 - 1.0, p + q2 - 1.0) <= q;
}

namespace {

using detail::SweepPoint;

std::vector<SweepPoint> run_sweep(std::size_t count, const kernels::SliceFn& fn,
                                  Backend backend) {
  return backend == Backend::Serial ? kernels::serial::sweep_slices(count, fn)
                                    : kernels::omp::sweep_slices(count, fn);
}

void require_finite(double v, const char* what, double x, double y, double t) {
  if (!std::isfinite(v)) {
    std::ostringstream msg;
    msg << what << " is not finite at (x, y, t) = (" << x << ", " << y << ", "
        << t << ")";
    throw Error(Errc::DomainError, msg.str());
  }
}

// Strict inequality lhs < rhs: equality counts as a violation, reported just
// above the tolerance so that satisfied == (max_violation <= tolerance).
double strict_violation(double lhs, double rhs, double tolerance) {
  const double v = lhs - rhs;
  if (v >= 0.0 && v <= tolerance) {
    return std::nextafter(tolerance, std::numeric_limits<double>::infinity());
  }
  return v;
}

CheckReport finish(std::string name, const std::vector<SweepPoint>& slices,
                   const std::vector<std::string>& inequality_names,
                   const CheckGrid& grid, double tolerance,
                   std::vector<SideCondition> sides,
                   const std::vector<double>& side_violations) {
  SweepPoint best = kernels::merge_slices(slices);
  CheckReport report;
  report.name = std::move(name);
  report.grid = grid;
  report.tolerance = tolerance;
  report.max_violation = best.violation;
  report.witness = best.witness;
  if (best.inequality >= 0) {
    report.inequality = inequality_names[static_cast<std::size_t>(best.inequality)];
  }
  for (std::size_t i = 0; i < sides.size(); ++i) {
    if (side_violations[i] > report.max_violation) {
      report.max_violation = side_violations[i];
      report.inequality = sides[i].name;
      report.witness = {};
    }
  }
  report.side_conditions = std::move(sides);
  report.satisfied = report.max_violation <= tolerance;
  return report;
}

SideCondition make_side(std::string name, double lhs, double rhs) {
  return {std::move(name), lhs, rhs, lhs < rhs};
}

}  // namespace

CheckReport check_stability_assumption(const LyapunovSpec& spec,
                                       const ValidatedModel& model,
                                       const CheckGrid& grid, double tolerance,
                                       Backend backend) {
  const bool g_zero = model.g_is_zero();
  if (std::isinf(spec.beta3) && !g_zero) {
    throw Error(Errc::InvalidParameter,
                "beta3 = inf is only allowed when g is identically zero");
  }
  if (!(spec.alpha1 > 0.0) || !(spec.alpha2 > 0.0)) {
    throw Error(Errc::NonPositiveParameter, "alpha1 and alpha2 must be positive");
  }
  const std::size_t nx = grid.x.count();
  const std::size_t ny = grid.y.count();
  const std::size_t nt = grid.t.count();
  const double beta3_term = g_zero ? 0.0 : spec.beta3;

  const kernels::SliceFn slice = [&](std::size_t ix) {
    SweepPoint best;
    const double x = grid.x.at(ix);
    for (std::size_t it = 0; it < nt; ++it) {
      const double t = grid.t.at(it);
      const UDerivatives d = numeric_derivatives(spec.U, x, t);
      const double h = model.h(t);
      const double shifted = t - model.delta(t);
      const double f_xx = model.f(x, x, t);
      const double u1_x = spec.U1.eval(x, 0.0, t);
      for (std::size_t iy = 0; iy < ny; ++iy) {
        const double y = grid.y.at(iy);
        const double f = model.f(x, y, t);
        const double g = g_zero ? 0.0 : model.g(x, y, t);
        const double lu = d.u_t + d.u_x * f_xx +
                          g_generator(2.0 * g * d.u_x + h * h * d.u_xx,
                                      model.model().vol);
        double lhs = lu + spec.beta1 * d.u_x * d.u_x + spec.beta2 * f * f +
                     spec.beta4 * h * h + spec.alpha1 * u1_x -
                     spec.alpha2 * spec.U1.eval(y, 0.0, shifted);
        if (!g_zero) lhs += beta3_term * g * g;
        require_finite(lhs, "stability assumption left-hand side", x, y, t);
        keep_worst(best, {lhs, {x, y, t}, 0});
      }
    }
    return best;
  };
  const auto slices = run_sweep(nx, slice, backend);

  const double dbar = model.model().delay.delta_dot_bound;
  std::vector<SideCondition> sides{
      make_side("alpha2 < alpha1 (1 - delta_bar)", spec.alpha2,
                spec.alpha1 * (1.0 - dbar))};
  std::vector<double> side_v{
      strict_violation(sides[0].lhs, sides[0].rhs, tolerance)};
  return finish("stability_assumption", slices,
                {"LU + b1|U_x|^2 + b2|f|^2 + b3|g|^2 + b4|h|^2 <= -a1 U1(x,t) + a2 U1(y,t-delta)"},
                grid, tolerance, std::move(sides), side_v);
}

CheckReport check_khasminskii(const LyapunovSpec& spec, const ValidatedModel& model,
                              const CheckGrid& grid, double tolerance,
                              Backend backend) {
  const std::size_t nx = grid.x.count();
  const std::size_t ny = grid.y.count();
  const std::size_t nt = grid.t.count();
  const double q = spec.q_effective();
  const bool g_zero = model.g_is_zero();

  const kernels::SliceFn slice = [&](std::size_t ix) {
    SweepPoint best;
    const double x = grid.x.at(ix);
    const double x_pow_q = std::pow(std::fabs(x), q);
    for (std::size_t it = 0; it < nt; ++it) {
      const double t = grid.t.at(it);
      const UDerivatives d = numeric_derivatives(spec.Ubar, x, t);
      const double ubar = spec.Ubar.eval(x, 0.0, t);
      const double h_xt = spec.H.eval(x, 0.0, t);
      const double h = model.h(t);
      const double shifted = t - model.delta(t);

      const double lower_gap = x_pow_q - ubar;
      require_finite(lower_gap, "|x|^q - Ubar", x, 0.0, t);
      keep_worst(best, {lower_gap, {x, 0.0, t}, 1});
      const double upper_gap = ubar - h_xt;
      require_finite(upper_gap, "Ubar - H", x, 0.0, t);
      keep_worst(best, {upper_gap, {x, 0.0, t}, 2});

      for (std::size_t iy = 0; iy < ny; ++iy) {
        const double y = grid.y.at(iy);
        const double g = g_zero ? 0.0 : model.g(x, y, t);
        const double lbar = d.u_t + d.u_x * model.f(x, y, t) +
                            g_generator(2.0 * d.u_x * g + d.u_xx * h * h,
                                        model.model().vol);
        const double rhs = spec.c1 - spec.c2 * h_xt +
                           spec.c3 * spec.H.eval(y, 0.0, shifted);
        const double v = lbar - rhs;
        require_finite(v, "Khasminskii drift condition", x, y, t);
        keep_worst(best, {v, {x, y, t}, 0});
      }
    }
    return best;
  };
  const auto slices = run_sweep(nx, slice, backend);

  const double dbar = model.model().delay.delta_dot_bound;
  std::vector<SideCondition> sides{
      make_side("c3 < c2 (1 - delta_bar)", spec.c3, spec.c2 * (1.0 - dbar))};
  std::vector<double> side_v{
      strict_violation(sides[0].lhs, sides[0].rhs, tolerance)};
  return finish("khasminskii", slices,
                {"LbarU <= c1 - c2 H(x,t) + c3 H(y,t-delta)", "|x|^q <= Ubar",
                 "Ubar <= H"},
                grid, tolerance, std::move(sides), side_v);
}

CheckReport check_delay_lipschitz(const ValidatedModel& model, double varpi,
                                  const CheckGrid& grid, double tolerance,
                                  Backend backend) {
  if (!(varpi > 0.0)) {
    throw Error(Errc::NonPositiveParameter, "varpi must be positive");
  }
  const std::size_t nx = grid.x.count();
  const std::size_t ny = grid.y.count();
  const std::size_t nt = grid.t.count();

  const kernels::SliceFn slice = [&](std::size_t ix) {
    SweepPoint best;
    const double x = grid.x.at(ix);
    for (std::size_t it = 0; it < nt; ++it) {
      const double t = grid.t.at(it);
      const double f_xx = model.f(x, x, t);
      for (std::size_t iy = 0; iy < ny; ++iy) {
        const double y = grid.y.at(iy);
        if (y == x) continue;
        const double ratio = std::fabs(f_xx - model.f(x, y, t)) / std::fabs(x - y);
        require_finite(ratio, "delay Lipschitz ratio", x, y, t);
        keep_worst(best, {ratio - varpi, {x, y, t}, 0});
      }
    }
    return best;
  };
  const auto slices = run_sweep(nx, slice, backend);
  return finish("delay_lipschitz", slices,
                {"|f(x,x,t) - f(x,y,t)| <= varpi |x - y|"}, grid, tolerance, {},
                {});
}

CheckReport check_polynomial_growth(const ValidatedModel& model, double K,
                                    double q1, double q2, const CheckGrid& grid,
                                    double tolerance, Backend backend) {
  if (!(K > 0.0)) throw Error(Errc::NonPositiveParameter, "K must be positive");
  const std::size_t nx = grid.x.count();
  const std::size_t ny = grid.y.count();
  const std::size_t nt = grid.t.count();

  const kernels::SliceFn slice = [&](std::size_t ix) {
    SweepPoint best;
    const double x = grid.x.at(ix);
    const double ax = std::fabs(x);
    for (std::size_t it = 0; it < nt; ++it) {
      const double t = grid.t.at(it);
      if (ix == 0) {
        const double hv = std::fabs(model.h(t)) - K;
        require_finite(hv, "|h(t)| - K", 0.0, 0.0, t);
        keep_worst(best, {hv, {0.0, 0.0, t}, 2});
      }
      for (std::size_t iy = 0; iy < ny; ++iy) {
        const double y = grid.y.at(iy);
        const double ay = std::fabs(y);
        const double fv = std::fabs(model.f(x, y, t)) -
                          K * (1.0 + std::pow(ax, q1) + std::pow(ay, q1));
        require_finite(fv, "|f| growth bound", x, y, t);
        keep_worst(best, {fv, {x, y, t}, 0});
        const double gv = std::fabs(model.g(x, y, t)) -
                          K * (1.0 + std::pow(ax, q2) + std::pow(ay, q2));
        require_finite(gv, "|g| growth bound", x, y, t);
        keep_worst(best, {gv, {x, y, t}, 1});
      }
    }
    return best;
  };
  const auto slices = run_sweep(nx, slice, backend);
  return finish("polynomial_growth", slices,
                {"|f| <= K(1 + |x|^q1 + |y|^q1)", "|g| <= K(1 + |x|^q2 + |y|^q2)",
                 "|h| <= K"},
                grid, tolerance, {}, {});
}

namespace {

nlohmann::ordered_json axis_json(const Axis& a) {
  return {{"min", a.min}, {"max", a.max}, {"step", a.step}};
}

// JSON has no infinities; report them as strings.
nlohmann::ordered_json number_json(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

std::string to_json(const CheckReport& r, int indent) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["satisfied"] = r.satisfied;
  j["max_violation"] = number_json(r.max_violation);
  j["witness"] = {{"x", r.witness.x}, {"y", r.witness.y}, {"t", r.witness.t}};
  j["inequality"] = r.inequality;
  j["grid"] = {{"x", axis_json(r.grid.x)},
               {"y", axis_json(r.grid.y)},
               {"t", axis_json(r.grid.t)}};
  j["tolerance"] = r.tolerance;
  auto sides = nlohmann::ordered_json::array();
  for (const auto& s : r.side_conditions) {
    sides.push_back({{"name", s.name},
                     {"lhs", number_json(s.lhs)},
                     {"rhs", number_json(s.rhs)},
                     {"satisfied", s.satisfied}});
  }
  j["side_conditions"] = sides;
  return j.dump(indent);
}

std::string to_text(const CheckReport& r) {
  std::ostringstream os;
  os.precision(6);
  os << r.name << ": " << (r.satisfied ? "satisfied" : "VIOLATED") << '\n'
     << "  max violation " << r.max_violation << " (tolerance " << r.tolerance
     << ")\n"
     << "  worst inequality: " << r.inequality << '\n'
     << "  witness (x, y, t) = (" << r.witness.x << ", " << r.witness.y << ", "
     << r.witness.t << ")\n"
     << "  grid x [" << r.grid.x.min << ", " << r.grid.x.max << "] step "
     << r.grid.x.step << ", y [" << r.grid.y.min << ", " << r.grid.y.max
     << "] step " << r.grid.y.step << ", t [" << r.grid.t.min << ", "
     << r.grid.t.max << "] step " << r.grid.t.step << '\n';
  for (const auto& s : r.side_conditions) {
    os << "  side condition " << s.name << ": " << s.lhs << " vs " << s.rhs
       << (s.satisfied ? " ok" : " FAILS") << '\n';
  }
  return os.str();
}

}  // namespace gsdde
