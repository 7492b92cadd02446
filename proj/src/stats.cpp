#include "ctchoice/stats.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "ctchoice/errors.hpp"

namespace ct {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw numerical_error(errc::bad_domain,
                          "normal_quantile needs p in (0, 1)");
  }
  // Logistic first guess, then safeguarded Newton on the exact cdf.
  double x = -std::log(1.0 / p - 1.0) / 1.702;
  double lo = -40.0, hi = 40.0;
  for (int iter = 0; iter < 100; ++iter) {
    double f = normal_cdf(x) - p;
    if (f > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    double density = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    double step = density > 0.0 ? f / density : 0.0;
    double next = x - step;
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) < 1e-15 * (1.0 + std::abs(x))) return next;
    x = next;
  }
  return x;
}

double pearson_r(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw numerical_error(errc::insufficient_data,
                          "correlation inputs differ in length");
  }
  std::size_t n = xs.size();
  if (n < 3) {
    throw numerical_error(errc::insufficient_data,
                          "correlation needs at least 3 points, got " +
                              std::to_string(n));
  }
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = xs[i] - mean_x;
    double dy = ys[i] - mean_y;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw numerical_error(errc::zero_variance,
                          "correlation undefined for a constant vector");
  }
  double r = sxy / std::sqrt(sxx * syy);
  // Guard rounding just past the ends.
  if (r > 1.0) r = 1.0;
  if (r < -1.0) r = -1.0;
  return r;
}

std::pair<double, double> fisher_interval(double r, int n, double level) {
  if (!(std::abs(r) < 1.0)) {
    throw numerical_error(errc::bad_domain,
                          "fisher_interval needs |r| < 1");
  }
  if (n < 4) {
    throw numerical_error(errc::bad_domain,
                          "fisher_interval needs n >= 4");
  }
  if (!(level > 0.0) || !(level < 1.0)) {
    throw numerical_error(errc::bad_domain,
                          "confidence level must lie in (0, 1)");
  }
  double z = std::atanh(r);
  double q = normal_quantile(0.5 * (1.0 + level));
  double half = q / std::sqrt(static_cast<double>(n - 3));
  return {std::tanh(z - half), std::tanh(z + half)};
}

correlation_report correlate(std::span<const double> xs,
                             std::span<const double> ys, double level) {
  correlation_report report;
  report.r = pearson_r(xs, ys);
  report.n = static_cast<int>(xs.size());
  report.level = level;
  if (std::abs(report.r) < 1.0 && report.n >= 4) {
    auto [lo, hi] = fisher_interval(report.r, report.n, level);
    report.ci_low = lo;
    report.ci_high = hi;
  } else {
    report.ci_low = report.ci_high = report.r;
  }
  return report;
}

proportion_test_result two_proportion_test(int k1, int n1, int k2, int n2,
                                           tail tails,
                                           bool continuity_correction) {
  if (n1 < 1 || n2 < 1) {
    throw numerical_error(errc::bad_domain,
                          "both groups need at least one member");
  }
  if (k1 < 0 || k1 > n1 || k2 < 0 || k2 > n2) {
    throw numerical_error(errc::bad_domain, "counts must satisfy 0 <= k <= n");
  }
  proportion_test_result out;
  double p1 = static_cast<double>(k1) / n1;
  double p2 = static_cast<double>(k2) / n2;
  out.difference = p1 - p2;

  double pooled = static_cast<double>(k1 + k2) / (n1 + n2);
  double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2));
  double numerator = out.difference;
  if (continuity_correction) {
    double cc = 0.5 * (1.0 / n1 + 1.0 / n2);
    if (numerator > cc) {
      numerator -= cc;
    } else if (numerator < -cc) {
      numerator += cc;
    } else {
      numerator = 0.0;
    }
  }
  if (se == 0.0) {
    // Pooled variance vanishes only when both groups sit at 0 or 1 together,
    // where the difference is zero as well.
    out.z = 0.0;
  } else {
    out.z = numerator / se;
  }
  if (tails == tail::one_sided) {
    out.p_value = 1.0 - normal_cdf(out.z);  // direction: group 1 > group 2
  } else {
    out.p_value = 2.0 * (1.0 - normal_cdf(std::abs(out.z)));
  }
  return out;
}

}  // namespace ct
