#include "gsdde/sublinear.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

#include "gsdde/error.hpp"
#include "kernels/kernels.hpp"

namespace gsdde {

namespace detail {

void require_non_empty(std::size_t levels, std::size_t samples,
                       std::size_t data_size) {
  if (levels == 0 || samples == 0) {
    throw Error(Errc::EmptyEnsemble, "sample array has no rows or no columns");
  }
  if (data_size != levels * samples) {
    throw Error(Errc::InvalidParameter, "sample array size does not match m * n");
  }
}

void estimate_at(const PathEnsemble& ensemble, const Functional& phi,
                 std::size_t i, double& upper, double& lower,
                 std::size_t& excluded) {
  const std::size_t m = ensemble.levels();
  const std::size_t n = ensemble.samples();
  bool any = false;
  excluded = 0;
  for (std::size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    std::size_t used = 0;
    for (std::size_t k = 0; k < m; ++k) {
      const Path& p = ensemble.path(k, j);
      if (!p.valid_at(i)) continue;
      sum += phi(p.at(static_cast<std::ptrdiff_t>(i)));
      ++used;
    }
    const std::size_t lost = m - used;
    excluded += lost;
    if (static_cast<double>(lost) > kMaxExplodedFraction * static_cast<double>(m)) {
      throw Error(Errc::GroupExploded,
                  "column " + std::to_string(j) + " lost " + std::to_string(lost) +
                      " of " + std::to_string(m) + " paths by t index " +
                      std::to_string(i));
    }
    const double mean = sum / static_cast<double>(used);
    if (!any || mean > upper) upper = mean;
    if (!any || mean < lower) lower = mean;
    any = true;
  }
}

}  // namespace detail

Functional Functional::abs_power(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw Error(Errc::InvalidParameter, "functional exponent must be positive");
  }
  Functional f;
  f.exponent_ = p;
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, p);
  f.description_ = "|x|^" + std::string(buf, res.ptr);
  return f;
}

Functional Functional::expression(const Expr& e) {
  const std::uint8_t other = e.variables() & ~std::uint8_t{1};
  if (other != 0) {
    throw Error(Errc::VariableNotAllowed,
                "functional '" + e.source() + "' may only reference x");
  }
  Functional f;
  f.expr_ = e;
  f.description_ = e.source();
  return f;
}

double Functional::operator()(double x) const noexcept {
  if (expr_) return expr_->eval(x, 0.0, 0.0);
  const double a = std::fabs(x);
  return exponent_ == 1.0 ? a : std::pow(a, exponent_);
}

namespace {

std::vector<double> transformed(const SampleView<double>& values,
                                const Functional& phi) {
  detail::require_non_empty(values.levels, values.samples, values.data.size());
  std::vector<double> out(values.data.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = phi(values.data[i]);
  return out;
}

void require_binary(const SampleView<double>& v) {
  detail::require_non_empty(v.levels, v.samples, v.data.size());
  for (double x : v.data) {
    if (x != 0.0 && x != 1.0) {
      throw Error(Errc::InvalidParameter, "indicator values must be 0 or 1");
    }
  }
}

}  // namespace

double upper_expectation(const SampleView<double>& values, const Functional& phi) {
  const auto t = transformed(values, phi);
  return upper_mean(SampleView<double>{t, values.levels, values.samples});
}

double lower_expectation(const SampleView<double>& values, const Functional& phi) {
  const auto t = transformed(values, phi);
  return lower_mean(SampleView<double>{t, values.levels, values.samples});
}

double capacity_upper(const SampleView<double>& indicator) {
  require_binary(indicator);
  return upper_mean(indicator);
}

double capacity_lower(const SampleView<double>& indicator) {
  require_binary(indicator);
  return lower_mean(indicator);
}

EstimateSeries estimate_series(const PathEnsemble& ensemble, const Functional& phi,
                               Backend backend) {
  if (ensemble.levels() == 0 || ensemble.samples() == 0) {
    throw Error(Errc::EmptyEnsemble, "ensemble has no paths");
  }
  if (ensemble.exploded_count() == ensemble.paths().size()) {
    throw Error(Errc::AllPathsExploded, "every path in the ensemble exploded");
  }
  const TimeGrid& grid = ensemble.time();
  EstimateSeries series;
  series.functional = phi.description();
  series.times.resize(grid.points());
  for (std::size_t i = 0; i < grid.points(); ++i) {
    series.times[i] = grid.at(static_cast<std::ptrdiff_t>(i));
  }
  series.upper.resize(grid.points());
  series.lower.resize(grid.points());
  series.excluded.resize(grid.points());
  if (backend == Backend::Serial) {
    kernels::serial::reduce_series(ensemble, phi, series);
  } else {
    kernels::omp::reduce_series(ensemble, phi, series);
  }
  return series;
}

namespace {

void put_number(std::ostream& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, res.ptr - buf);
}

}  // namespace

void write_estimate_csv(std::ostream& out, const EstimateSeries& series,
                        CsvColumns columns) {
  out << 't';
  if (columns.upper) out << ",upper";
  if (columns.lower) out << ",lower";
  out << ",excluded_count\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    put_number(out, series.times[i]);
    if (columns.upper) {
      out << ',';
      put_number(out, series.upper[i]);
    }
    if (columns.lower) {
      out << ',';
      put_number(out, series.lower[i]);
    }
    out << ',' << series.excluded[i] << '\n';
  }
}

}  // namespace gsdde
