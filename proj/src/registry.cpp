#include "gsdde/registry.hpp"

#include <charconv>
#include <cmath>

#include "gsdde/error.hpp"

namespace gsdde {

namespace {

std::string number_text(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

RegistryModel example41(double delay) {
  RegistryModel r;
  r.name = "example41";
  auto& m = r.model;
  m.drift_f = parse_expr("-x^3 - y");
  m.qv_coeff_g = parse_expr("0");
  m.noise_h = parse_expr("0.5*exp(-t)");
  m.delay.tau = delay;
  m.delay.delta = parse_expr(number_text(delay));
  m.delay.delta_dot_bound = 0.1;
  m.vol = {0.5, 1.0};
  m.growth_K = 1.0;
  m.growth_q1 = 3.0;
  m.growth_q2 = 0.0;
  r.history = {parse_expr("2 + sin(u)"), delay};

  auto& l = r.lyapunov;
  l.U = parse_expr("exp(-t) + x^2 + x^4");
  l.U1 = parse_expr("0.5*exp(-t) + 0.1*x^2 + 4*x^4 + 2*x^6");
  l.Ubar = parse_expr("x^6");
  l.H = parse_expr("1 + 1.5*x^6 + 2.5*x^8");
  l.beta1 = 0.1;
  l.beta2 = 0.05;
  l.beta3 = kUnboundedBeta;
  l.beta4 = 1.0;
  l.alpha1 = 1.0;
  l.alpha2 = 0.5;
  l.c1 = 585.0;  // sup_x (1 + 4x^4 + 8x^6 - x^8) = 584.86...
  l.c2 = 2.0;
  l.c3 = 1.0;
  l.varpi = 1.0;
  l.q1 = 3.0;
  l.q2 = 0.0;
  l.q = 6.0;
  l.p = 4.0;

  r.exact_U = [](double x, double t) {
    return UDerivatives{-std::exp(-t), 2.0 * x + 4.0 * x * x * x,
                        2.0 + 12.0 * x * x};
  };
  r.exact_Ubar = [](double x, double) {
    const double x2 = x * x;
    return UDerivatives{0.0, 6.0 * x2 * x2 * x, 30.0 * x2 * x2};
  };
  return r;
}

RegistryModel linear_ou() {
  RegistryModel r;
  r.name = "linear-ou";
  auto& m = r.model;
  m.drift_f = parse_expr("-x");
  m.qv_coeff_g = parse_expr("0");
  m.noise_h = parse_expr("1");
  m.delay.tau = 0.001;
  m.delay.delta = parse_expr("0");
  m.delay.delta_dot_bound = 0.0;
  m.vol = {1.0, 1.0};
  m.growth_K = 1.0;
  m.growth_q1 = 1.0;
  m.growth_q2 = 0.0;
  r.history = {parse_expr("1"), 0.001};

  // U = x^2: LU = -2x^2 + sigma^2, so a1 U1 with U1 = x^2 fails near 0.
  auto& l = r.lyapunov;
  l.U = parse_expr("x^2");
  l.U1 = parse_expr("x^2");
  l.Ubar = parse_expr("x^2");
  l.H = parse_expr("1 + x^2");
  l.beta1 = 0.1;
  l.beta2 = 0.1;
  l.beta3 = kUnboundedBeta;
  l.beta4 = 0.1;
  l.alpha1 = 1.0;
  l.alpha2 = 0.5;
  l.c1 = 2.0;
  l.c2 = 1.0;
  l.c3 = 0.5;
  l.varpi = 1.0;
  l.q1 = 1.0;
  l.q2 = 0.0;
  l.q = 2.0;
  l.p = 2.0;

  r.exact_U = [](double x, double) { return UDerivatives{0.0, 2.0 * x, 2.0}; };
  r.exact_Ubar = r.exact_U;
  return r;
}

RegistryModel registry_model(std::string_view name) {
  if (name == "example41") return example41();
  if (name == "linear-ou") return linear_ou();
  throw Error(Errc::ConfigError, "unknown preset '" + std::string(name) +
                                     "' (known: example41, linear-ou)");
}

std::vector<std::string> registry_names() { return {"example41", "linear-ou"}; }

}  // namespace gsdde
