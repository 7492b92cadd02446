#pragma once

#include "ctchoice/core.hpp"
#include "ctchoice/errors.hpp"

namespace ct {

enum class tying_scheme { three_param, four_param, six_param };

// Probability transforms:
//   gonzalez_wu           w(p) = d*p^g / (d*p^g + (1-p)^g), two parameters
//   tversky_kahneman_1992 w(p) = p^g / (p^g + (1-p)^g)^(1/g), curvature only
//   identity              w(p) = p, parameter-free baseline
enum class weighting_form { gonzalez_wu, tversky_kahneman_1992, identity };

const char* tying_name(tying_scheme t);
const char* weighting_name(weighting_form f);
int free_parameter_count(tying_scheme t, weighting_form f);

// Value/weighting parameters with an explicit tying scheme. Tied fields are
// stored equal so the six slots can always be read directly.
struct param_set {
  double a0 = 1.0, a1 = 1.0;          // value exponents for |x0| and |x1|
  double gamma0 = 1.0, gamma1 = 1.0;  // weighting curvature
  double delta0 = 1.0, delta1 = 1.0;  // weighting elevation
  tying_scheme tying = tying_scheme::three_param;
  weighting_form form = weighting_form::gonzalez_wu;

  static param_set three(double a, double gamma, double delta,
                         weighting_form form = weighting_form::gonzalez_wu);
  static param_set four(double a0, double a1, double gamma, double delta,
                        weighting_form form = weighting_form::gonzalez_wu);
  static param_set six(double a0, double a1, double gamma0, double gamma1,
                       double delta0, double delta1,
                       weighting_form form = weighting_form::gonzalez_wu);
  static param_set identity_baseline();

  // All parameters strictly positive and tied fields equal; throws
  // validation_error(invalid_parameter) otherwise.
  void validate() const;

  bool operator==(const param_set&) const = default;
};

// x^a for x > 0; strictly increasing in x. Throws validation_error on x <= 0.
double power_value(double x, double a);

// Weighted probability on [0, 1] -> [0, 1]. Endpoints are handled by an
// explicit branch so w(0) == 0 and w(1) == 1 exactly for every gamma/delta.
// Throws validation_error for p outside [0, 1] or nonpositive parameters.
double weight(double p, double gamma, double delta, weighting_form form);

// Beyond this magnitude |x|^a is evaluated in log space to dodge overflow.
struct ci_options {
  double magnitude_threshold = 1e100;
};

// Challenge Index of a canonical problem:
//   CI = (|x0|^a0 / |x1|^a1) * (w0(p0) - w1(p1))
// One formula for gains and losses. Under tied weighting parameters the
// probability factor is strictly positive (w monotone, p0 > p1); under
// six_param a nonpositive gap throws numerical_error(non_positive_weight_gap).
double challenge_index(const binary_problem& p, const param_set& theta,
                       const ci_options& opts = {});

// The two factors of CI; their product equals challenge_index.
double ci_outcome_factor(const binary_problem& p, const param_set& theta,
                         const ci_options& opts = {});
double ci_probability_factor(const binary_problem& p, const param_set& theta);

// Search box for fitted parameters. Defaults cover every fitted value seen in
// practice with headroom; the tk92 curvature floor is raised to 0.28 because
// below that the one-parameter form stops being monotone, i.e. stops being an
// admissible weighting function.
struct param_bounds {
  double a_lo = 1e-4, a_hi = 5.0;
  double gamma_lo = 1e-4, gamma_hi = 3.0;
  double delta_lo = 1e-4, delta_hi = 10.0;

  static param_bounds defaults(weighting_form form);
  void validate() const;
  bool contains(const param_set& theta) const;
};

inline constexpr double tk92_monotone_gamma_floor = 0.28;

}  // namespace ct
