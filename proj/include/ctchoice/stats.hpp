#pragma once

#include <span>
#include <utility>

namespace ct {

struct correlation_report {
  double r = 0.0;
  int n = 0;
  double ci_low = -1.0;
  double ci_high = 1.0;
  double level = 0.95;
};

// Product-moment correlation. Requires n >= 3 and nonzero variance in both
// vectors; throws numerical_error(insufficient_data / zero_variance).
double pearson_r(std::span<const double> xs, std::span<const double> ys);

// Confidence interval for a correlation via the z-transform:
// z = atanh(r), half-width q(level)/sqrt(n-3), bounds tanh(z -+ half).
// Requires |r| < 1 and n >= 4.
std::pair<double, double> fisher_interval(double r, int n, double level = 0.95);

// pearson_r plus its fisher_interval in one report. Degenerate |r| == 1
// collapses the interval to the point rather than throwing.
correlation_report correlate(std::span<const double> xs,
                             std::span<const double> ys, double level = 0.95);

enum class tail { one_sided, two_sided };

struct proportion_test_result {
  double difference = 0.0;  // k1/n1 - k2/n2
  double z = 0.0;           // pooled-variance statistic
  double p_value = 0.5;
};

// Pooled two-sample z-test for proportions. One-sided p is taken in the
// direction "group 1 exceeds group 2" (P(Z >= z)), so equal proportions give
// p = 0.5 and a deficit gives p > 0.5.
proportion_test_result two_proportion_test(int k1, int n1, int k2, int n2,
                                           tail tails = tail::one_sided,
                                           bool continuity_correction = false);

// Standard normal helpers used by the tests above.
double normal_cdf(double z);
double normal_quantile(double p);  // inverse of normal_cdf on (0, 1)

}  // namespace ct
