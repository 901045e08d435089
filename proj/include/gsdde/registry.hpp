#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "gsdde/model.hpp"
#include "gsdde/stability.hpp"

namespace gsdde {

/// Built-in model with a matching Lyapunov specification. Exact derivative
/// callbacks, when present, serve as oracles for the numeric ones.
struct RegistryModel {
  std::string name;
  GsddeModel model;
  InitialHistory history;
  LyapunovSpec lyapunov;
  std::function<UDerivatives(double x, double t)> exact_U;
  std::function<UDerivatives(double x, double t)> exact_Ubar;
};

/// f = -x^3 - y, g = 0, h = exp(-t)/2, sigma^2 in [0.5, 1], constant delay,
/// eta(u) = 2 + sin(u), delta_bar = 0.1.
///
/// Lyapunov data: U = exp(-t) + x^2 + x^4,
/// U1 = 0.5 exp(-t) + 0.1 x^2 + 4 x^4 + 2 x^6, Ubar = x^6,
/// H = 1 + 1.5 x^6 + 2.5 x^8, beta = (0.1, 0.05, inf, 1), alpha = (1, 0.5),
/// c = (585, 2, 1), varpi = 1, q1 = 3, q2 = 0, q = 6, p = 4.
///
/// H carries 2.5 x^8 and alpha2 = 0.5 because those are the coefficients
/// the hand bounds on LbarU and LU produce. The variants H = 1 + 1.5 x^6 + x^8
/// and alpha2 = 0.05 can be supplied through a config file instead.
RegistryModel example41(double delay = 0.01);

/// f = -x, g = 0, h = 1, sigma = 1, no delay (tau = 0.001), eta = 1.
RegistryModel linear_ou();

/// Errors: ConfigError for an unknown name.
RegistryModel registry_model(std::string_view name);
std::vector<std::string> registry_names();

}  // namespace gsdde
