#include "ctchoice/model.hpp"

#include <cmath>
#include <string>

namespace ct {

const char* tying_name(tying_scheme t) {
  switch (t) {
    case tying_scheme::three_param: return "three";
    case tying_scheme::four_param: return "four";
    case tying_scheme::six_param: return "six";
  }
  return "?";
}

const char* weighting_name(weighting_form f) {
  switch (f) {
    case weighting_form::gonzalez_wu: return "gw";
    case weighting_form::tversky_kahneman_1992: return "tk92";
    case weighting_form::identity: return "identity";
  }
  return "?";
}

int free_parameter_count(tying_scheme t, weighting_form f) {
  if (f == weighting_form::identity) return 0;
  int value_params = t == tying_scheme::three_param ? 1 : 2;
  int weight_params_per_side =
      f == weighting_form::tversky_kahneman_1992 ? 1 : 2;
  int weight_sides = t == tying_scheme::six_param ? 2 : 1;
  return value_params + weight_params_per_side * weight_sides;
}

param_set param_set::three(double a, double gamma, double delta,
                           weighting_form form) {
  param_set p{a, a, gamma, gamma, delta, delta, tying_scheme::three_param,
              form};
  p.validate();
  return p;
}

param_set param_set::four(double a0, double a1, double gamma, double delta,
                          weighting_form form) {
  param_set p{a0, a1, gamma, gamma, delta, delta, tying_scheme::four_param,
              form};
  p.validate();
  return p;
}

param_set param_set::six(double a0, double a1, double gamma0, double gamma1,
                         double delta0, double delta1, weighting_form form) {
  param_set p{a0,     a1,     gamma0, gamma1,
              delta0, delta1, tying_scheme::six_param, form};
  p.validate();
  return p;
}

param_set param_set::identity_baseline() {
  param_set p;
  p.form = weighting_form::identity;
  return p;  // all slots at 1
}

void param_set::validate() const {
  for (double v : {a0, a1, gamma0, gamma1, delta0, delta1}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw validation_error(errc::invalid_parameter,
                             "parameters must be finite and positive");
    }
  }
  if (tying == tying_scheme::three_param && a0 != a1) {
    throw validation_error(errc::invalid_parameter,
                           "three-parameter tying requires a0 == a1");
  }
  if (tying != tying_scheme::six_param &&
      (gamma0 != gamma1 || delta0 != delta1)) {
    throw validation_error(
        errc::invalid_parameter,
        "tied weighting requires gamma0 == gamma1 and delta0 == delta1");
  }
  if (form == weighting_form::identity && (a0 != 1.0 || a1 != 1.0)) {
    throw validation_error(errc::invalid_parameter,
                           "the identity baseline fixes a0 = a1 = 1");
  }
}

double power_value(double x, double a) {
  if (!(x > 0.0)) {
    throw validation_error(errc::invalid_parameter,
                           "power_value needs a positive magnitude");
  }
  if (!(a > 0.0)) {
    throw validation_error(errc::invalid_parameter,
                           "power_value needs a positive exponent");
  }
  return std::pow(x, a);
}

double weight(double p, double gamma, double delta, weighting_form form) {
  if (!(p >= 0.0) || p > 1.0) {
    throw validation_error(errc::invalid_parameter,
                           "probability outside [0, 1]");
  }
  if (form == weighting_form::identity) return p;
  if (!(gamma > 0.0) || !(delta > 0.0)) {
    throw validation_error(errc::invalid_parameter,
                           "weighting parameters must be positive");
  }
  // Exact endpoints; the formulas hit 0^gamma indeterminacy at extreme gamma.
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;

  if (form == weighting_form::gonzalez_wu) {
    double pg = std::pow(p, gamma);
    double qg = std::pow(1.0 - p, gamma);
    return delta * pg / (delta * pg + qg);
  }
  // tversky_kahneman_1992, curvature only
  double pg = std::pow(p, gamma);
  double qg = std::pow(1.0 - p, gamma);
  return pg / std::pow(pg + qg, 1.0 / gamma);
}

namespace {

double weight_gap(const binary_problem& p, const param_set& theta) {
  double w0 = weight(p.p0, theta.gamma0, theta.delta0, theta.form);
  double w1 = weight(p.p1, theta.gamma1, theta.delta1, theta.form);
  return w0 - w1;
}

}  // namespace

double ci_outcome_factor(const binary_problem& p, const param_set& theta,
                         const ci_options& opts) {
  double m0 = p.x0.abs().value();
  double m1 = p.x1.abs().value();
  double log_threshold = std::log(opts.magnitude_threshold);
  double t0 = theta.a0 * std::log(m0);
  double t1 = theta.a1 * std::log(m1);
  if (t0 > log_threshold || t1 > log_threshold) {
    return std::exp(t0 - t1);
  }
  return power_value(m0, theta.a0) / power_value(m1, theta.a1);
}

double ci_probability_factor(const binary_problem& p, const param_set& theta) {
  return weight_gap(p, theta);
}

double challenge_index(const binary_problem& p, const param_set& theta,
                       const ci_options& opts) {
  double gap = weight_gap(p, theta);
  if (!(gap > 0.0)) {
    throw numerical_error(
        errc::non_positive_weight_gap,
        "problem '" + p.id +
            "': w0(p0) - w1(p1) <= 0; the parameters are outside the model");
  }
  return ci_outcome_factor(p, theta, opts) * gap;
}

param_bounds param_bounds::defaults(weighting_form form) {
  param_bounds b;
  if (form == weighting_form::tversky_kahneman_1992) {
    b.gamma_lo = tk92_monotone_gamma_floor;
  }
  return b;
}

void param_bounds::validate() const {
  auto check = [](double lo, double hi, const char* name) {
    if (!(lo > 0.0) || !(hi > lo)) {
      throw validation_error(errc::invalid_parameter,
                             std::string("bad bounds for ") + name);
    }
  };
  check(a_lo, a_hi, "a");
  check(gamma_lo, gamma_hi, "gamma");
  check(delta_lo, delta_hi, "delta");
}

bool param_bounds::contains(const param_set& theta) const {
  auto in = [](double v, double lo, double hi) { return v >= lo && v <= hi; };
  return in(theta.a0, a_lo, a_hi) && in(theta.a1, a_lo, a_hi) &&
         in(theta.gamma0, gamma_lo, gamma_hi) &&
         in(theta.gamma1, gamma_lo, gamma_hi) &&
         in(theta.delta0, delta_lo, delta_hi) &&
         in(theta.delta1, delta_lo, delta_hi);
}

}  // namespace ct
