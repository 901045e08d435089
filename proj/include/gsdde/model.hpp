#pragma once

#include <cmath>
#include <string>

#include "gsdde/expr.hpp"
#include "gsdde/time_grid.hpp"

namespace gsdde {

/// Variance bounds [sigma_lower^2, sigma_upper^2] of the G-Brownian motion.
struct VolatilityBounds {
  double sigma_lower_sq = 1.0;
  double sigma_upper_sq = 1.0;

  double sigma_lower() const noexcept { return std::sqrt(sigma_lower_sq); }
  double sigma_upper() const noexcept { return std::sqrt(sigma_upper_sq); }
};

struct DelaySpec {
  double tau = 1.0;              // delay horizon
  Expr delta;                    // delta(t), in [0, tau]
  double delta_dot_bound = 0.0;  // declared bound on d(delta)/dt, < 1
};

/// dX = f(X, X(t - delta), t) dt + g(X, X(t - delta), t) d<B> + h(t) dB
struct GsddeModel {
  Expr drift_f;
  Expr qv_coeff_g;
  Expr noise_h;
  DelaySpec delay;
  VolatilityBounds vol;
  double growth_K = 1.0;
  double growth_q1 = 1.0;
  double growth_q2 = 1.0;
};

/// Deterministic initial segment eta on [-tau, 0]. Extended by the constant
/// eta(-tau) on [-2 tau, -tau).
struct InitialHistory {
  Expr eta;
  double tau = 1.0;

  double at(double s) const noexcept {
    const double arg = s < -tau ? -tau : s;
    return eta.eval(0.0, 0.0, 0.0, arg);
  }
};

/// A model whose invariants have been checked on a time grid. Immutable and
/// safe to share between threads.
class ValidatedModel {
 public:
  const GsddeModel& model() const noexcept { return model_; }
  const InitialHistory& history() const noexcept { return history_; }
  const TimeGrid& checked_grid() const noexcept { return grid_; }

  /// g is the literal 0: the d<B> term vanishes identically.
  bool g_is_zero() const noexcept { return model_.qv_coeff_g.is_zero_literal(); }

  double f(double x, double y, double t) const noexcept {
    return model_.drift_f.eval(x, y, t);
  }
  double g(double x, double y, double t) const noexcept {
    return model_.qv_coeff_g.eval(x, y, t);
  }
  double h(double t) const noexcept { return model_.noise_h.eval(0.0, 0.0, t); }
  double delta(double t) const noexcept {
    return model_.delay.delta.eval(0.0, 0.0, t);
  }
  double eta(double u) const noexcept { return history_.at(u); }
  double tau() const noexcept { return model_.delay.tau; }

 private:
  friend ValidatedModel validate_model(const GsddeModel&, const InitialHistory&,
                                       const TimeGrid&);
  ValidatedModel(GsddeModel m, InitialHistory h, TimeGrid g)
      : model_(std::move(m)), history_(std::move(h)), grid_(g) {}

  GsddeModel model_;
  InitialHistory history_;
  TimeGrid grid_;
};

/// Tolerance for the finite-difference spot check of delta_dot_bound.
inline constexpr double kDeltaDotTolerance = 1e-6;

/// Checks every model invariant, sampling delta(t) and eta(u) on `grid`
/// (and on its extension to [-tau, 0]).
///
/// Errors: NonPositiveTau, VolatilityOrderViolation, DelayOutOfRange,
/// DeltaDotBoundNotLessThanOne, DelayRateExceedsBound, NonDeterministicH,
/// VariableNotAllowed, NonFiniteHistory, InvalidParameter.
ValidatedModel validate_model(const GsddeModel& model,
                              const InitialHistory& history,
                              const TimeGrid& grid);

/// Re-validation of an already validated model; returns an equal value.
ValidatedModel validate_model(const ValidatedModel& validated);

bool same_model(const ValidatedModel& a, const ValidatedModel& b);

}  // namespace gsdde
