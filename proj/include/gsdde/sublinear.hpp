#pragma once

// phi-max-mean estimators of upper and lower sublinear expectations.
//
// Samples form an m x n array: column j collects one draw at every
// volatility level k. The upper estimate is max_j (1/m) sum_k phi(v[k][j]),
// the lower estimate the corresponding min.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gsdde/expr.hpp"
#include "gsdde/integrator.hpp"
#include "gsdde/parallel.hpp"

namespace gsdde {

/// Row-major view of an m x n sample array: at(k, j) = data[k * n + j].
template <class T>
struct SampleView {
  std::span<const T> data;
  std::size_t levels = 0;
  std::size_t samples = 0;

  const T& at(std::size_t k, std::size_t j) const {
    return data[k * samples + j];
  }
};

namespace detail {

void require_non_empty(std::size_t levels, std::size_t samples,
                       std::size_t data_size);

template <class T, class Select>
T max_mean_impl(const SampleView<T>& v, Select better) {
  require_non_empty(v.levels, v.samples, v.data.size());
  // Column sums share the divisor m, so compare sums and divide once.
  T best{};
  for (std::size_t j = 0; j < v.samples; ++j) {
    T sum = v.at(0, j);
    for (std::size_t k = 1; k < v.levels; ++k) sum += v.at(k, j);
    if (j == 0 || better(sum, best)) best = sum;
  }
  return best / T(static_cast<long>(v.levels));
}

}  // namespace detail

/// max_j mean_k v[k][j]. Generic over the scalar so the estimator can be
/// evaluated in exact arithmetic.
template <class T>
T upper_mean(const SampleView<T>& v) {
  return detail::max_mean_impl(v, [](const T& a, const T& b) { return a > b; });
}

template <class T>
T lower_mean(const SampleView<T>& v) {
  return detail::max_mean_impl(v, [](const T& a, const T& b) { return a < b; });
}

/// The functional phi applied pointwise before averaging.
class Functional {
 public:
  /// |x|^p, p > 0.
  static Functional abs_power(double p);
  /// An exprlang expression in x.
  static Functional expression(const Expr& e);

  double operator()(double x) const noexcept;
  const std::string& description() const noexcept { return description_; }

 private:
  Functional() = default;
  double exponent_ = 1.0;
  std::optional<Expr> expr_;
  std::string description_;
};

/// Errors: EmptyEnsemble.
double upper_expectation(const SampleView<double>& values, const Functional& phi);
double lower_expectation(const SampleView<double>& values, const Functional& phi);

/// Max-mean over a 0/1 indicator array. Errors: EmptyEnsemble,
/// InvalidParameter when a value is not 0 or 1.
double capacity_upper(const SampleView<double>& indicator);
double capacity_lower(const SampleView<double>& indicator);

struct EstimateSeries {
  std::vector<double> times;
  std::vector<double> upper;
  std::vector<double> lower;
  std::vector<std::size_t> excluded;  // exploded paths excluded at t_i
  std::string functional;

  std::size_t size() const noexcept { return times.size(); }
};

/// Fraction of a column that may explode before the estimate at that time
/// is rejected.
inline constexpr double kMaxExplodedFraction = 0.5;

/// Upper/lower estimates at every grid time. Exploded paths are dropped from
/// their column from the explosion index on. Errors: AllPathsExploded,
/// GroupExploded (more than half of a column lost at some time).
EstimateSeries estimate_series(const PathEnsemble& ensemble, const Functional& phi,
                               Backend backend = Backend::OpenMP);

struct CsvColumns {
  bool upper = true;
  bool lower = true;
};

/// Columns t, upper, lower, excluded_count (upper or lower may be omitted).
void write_estimate_csv(std::ostream& out, const EstimateSeries& series,
                        CsvColumns columns = {});

namespace detail {

/// Estimates at a single time index; used by both kernel backends.
void estimate_at(const PathEnsemble& ensemble, const Functional& phi,
                 std::size_t i, double& upper, double& lower,
                 std::size_t& excluded);

}  // namespace detail

}  // namespace gsdde
