#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gsdde/expr.hpp"
#include "gsdde/model.hpp"
#include "gsdde/parallel.hpp"

namespace gsdde {

/// G(alpha) = 1/2 (sigma_upper^2 alpha^+ - sigma_lower^2 alpha^-).
double g_generator(double alpha, const VolatilityBounds& vol) noexcept;

/// Burkholder-Davis-Gundy constants for G-Ito integrals:
/// C1 = sigma^p, C2 = C_p sigma^p with
///   C_p = (32/p)^(p/2)                        0 < p < 2
///   C_p = 4                                    p = 2
///   C_p = (p^(p+1) / (2 (p-1)^(p-1)))^(p/2)    p > 2
struct BdgConstants {
  double cp = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
};

/// Errors: NonPositiveP.
BdgConstants bdg_constant(double p, double sigma_upper);

/// Stands in for beta_3 when g is identically zero.
inline constexpr double kUnboundedBeta = std::numeric_limits<double>::infinity();

struct DelayBoundInputs {
  double beta1 = 0.0;
  double beta2 = 0.0;
  double beta3 = kUnboundedBeta;
  double beta4 = 0.0;
  double varpi = 0.0;
  double sigma_upper = 1.0;
};

/// The three competing terms of the admissible delay and their minimum:
///   sqrt(4 b1 b2 / (3 w^2)),  sqrt(4 b1 b3 / (3 w^2 s^2)),  4 b1 b4 / (3 w^2 s^2)
struct DelayBound {
  double drift_term = 0.0;
  double qv_term = 0.0;
  double noise_term = 0.0;
  double value = 0.0;
};

/// Errors: NonPositiveParameter.
DelayBound delay_bound(const DelayBoundInputs& in);

/// Lyapunov candidates and constants for the assumption checkers.
struct LyapunovSpec {
  Expr U;     // (x, t)
  Expr U1;    // (x, t)
  Expr Ubar;  // (x, t)
  Expr H;     // (x, t)
  double beta1 = 0.0;
  double beta2 = 0.0;
  double beta3 = kUnboundedBeta;
  double beta4 = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double varpi = 0.0;
  double q1 = 1.0;
  double q2 = 1.0;
  std::optional<double> q;  // defaults to 2 max(q1, q2)
  double p = 2.0;

  double q_effective() const noexcept {
    return q ? *q : 2.0 * (q1 > q2 ? q1 : q2);
  }
};

struct UDerivatives {
  double u_t = 0.0;
  double u_x = 0.0;
  double u_xx = 0.0;
};

/// Finite-difference U_t, U_x, U_xx. Errors: DomainError.
UDerivatives numeric_derivatives(const Expr& u, double x, double t);

/// U_t + U_x f(x, x, t) + G(2 g(x, y, t) U_x + h(t)^2 U_xx)
double lu_from_derivatives(const UDerivatives& d, const ValidatedModel& model,
                           double x, double y, double t);

/// Ubar_t + Ubar_x f(x, y, t) + G(2 Ubar_x g(x, y, t) + Ubar_xx h(t)^2)
double lbar_u_from_derivatives(const UDerivatives& d, const ValidatedModel& model,
                               double x, double y, double t);

double lyapunov_operator_LU(const LyapunovSpec& spec, const ValidatedModel& model,
                            double x, double y, double t);
double lyapunov_operator_LbarU(const LyapunovSpec& spec,
                               const ValidatedModel& model, double x, double y,
                               double t);

struct Axis {
  double min = 0.0;
  double max = 0.0;
  double step = 1.0;

  std::size_t count() const;
  double at(std::size_t i) const noexcept {
    return min + static_cast<double>(i) * step;
  }
};

struct CheckGrid {
  Axis x;
  Axis y;
  Axis t;
};

/// x, y in [-5, 5] step 0.05; t in [0, 10] step 0.1.
CheckGrid default_check_grid();
inline constexpr double kDefaultCheckTolerance = 1e-9;

struct Witness {
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;
};

struct SideCondition {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
};

/// Outcome of a grid check. max_violation is the largest LHS - RHS found;
/// satisfied == (max_violation <= tolerance).
struct CheckReport {
  std::string name;
  bool satisfied = false;
  double max_violation = -std::numeric_limits<double>::infinity();
  Witness witness;
  std::string inequality;  // which inequality attains max_violation
  CheckGrid grid;
  double tolerance = kDefaultCheckTolerance;
  std::vector<SideCondition> side_conditions;
};

/// LU + b1 |U_x|^2 + b2 |f|^2 + b3 |g|^2 + b4 |h|^2 + a1 U1(x, t)
///   - a2 U1(y, t - delta(t)) <= 0, plus a2 < a1 (1 - delta_bar).
/// beta3 = kUnboundedBeta requires g == 0 and then contributes nothing.
CheckReport check_stability_assumption(const LyapunovSpec& spec,
                                       const ValidatedModel& model,
                                       const CheckGrid& grid,
                                       double tolerance = kDefaultCheckTolerance,
                                       Backend backend = Backend::OpenMP);

/// LbarU <= c1 - c2 H(x, t) + c3 H(y, t - delta(t)), |x|^q <= Ubar <= H,
/// plus c3 < c2 (1 - delta_bar).
CheckReport check_khasminskii(const LyapunovSpec& spec, const ValidatedModel& model,
                              const CheckGrid& grid,
                              double tolerance = kDefaultCheckTolerance,
                              Backend backend = Backend::OpenMP);

/// max over x != y of |f(x, x, t) - f(x, y, t)| / |x - y|, against varpi.
CheckReport check_delay_lipschitz(const ValidatedModel& model, double varpi,
                                  const CheckGrid& grid,
                                  double tolerance = kDefaultCheckTolerance,
                                  Backend backend = Backend::OpenMP);

/// |f| <= K (1 + |x|^q1 + |y|^q1), |g| <= K (1 + |x|^q2 + |y|^q2), |h| <= K.
CheckReport check_polynomial_growth(const ValidatedModel& model, double K,
                                    double q1, double q2, const CheckGrid& grid,
                                    double tolerance = kDefaultCheckTolerance,
                                    Backend backend = Backend::OpenMP);

/// p >= 2 and max(p + q1 - 1, p + q2 - 1) <= q.
bool moment_exponent_condition(double p, double q1, double q2, double q) noexcept;

std::string to_text(const CheckReport& report);
/// Fields: name, satisfied, max_violation, witness {x, y, t}, inequality,
/// grid, tolerance, side_conditions.
std::string to_json(const CheckReport& report, int indent = 2);

namespace detail {

/// Best (largest) violation found in one slice of a grid sweep.
struct SweepPoint {
  double violation = -std::numeric_limits<double>::infinity();
  Witness witness;
  int inequality = -1;
};

/// Keeps the first strictly larger violation, so the witness is the
/// lexicographically first grid node attaining the maximum.
inline void keep_worst(SweepPoint& best, const SweepPoint& candidate) {
  if (candidate.inequality >= 0 &&
      (best.inequality < 0 || candidate.violation > best.violation)) {
    best = candidate;
  }
}

}  // namespace detail

}  // namespace gsdde
