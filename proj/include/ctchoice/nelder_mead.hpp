#pragma once

#include <functional>
#include <span>
#include <vector>

namespace ct {

// Box-constrained downhill simplex. Candidate points that step outside the
// box are folded back by reflection at the violated bound, so the objective
// is only ever evaluated inside [lo, hi].
struct nelder_mead_options {
  double tolerance = 1e-9;   // stop when the simplex diameter drops below this
  int max_evaluations = 2000;
  double initial_step = 0.05;  // first simplex spread, as a fraction of box width
};

struct nelder_mead_result {
  std::vector<double> x;
  double fx = 0.0;
  int evaluations = 0;
  bool converged = false;  // true if the diameter criterion fired
};

double reflect_into_box(double x, double lo, double hi);

nelder_mead_result nelder_mead(
    const std::function<double(std::span<const double>)>& objective,
    std::span<const double> start, std::span<const double> lo,
    std::span<const double> hi, const nelder_mead_options& options = {});

}  // namespace ct
