#include "ctchoice/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ct {

double reflect_into_box(double x, double lo, double hi) {
  double width = hi - lo;
  if (!(width > 0.0)) return lo;
  if (x >= lo && x <= hi) return x;
  // Fold the line onto [lo, hi] as a triangular wave with period 2*width.
  double t = std::fmod(x - lo, 2.0 * width);
  if (t < 0.0) t += 2.0 * width;
  return t <= width ? lo + t : hi - (t - width);
}

namespace {

struct vertex {
  std::vector<double> x;
  double f = 0.0;
};

double simplex_diameter(const std::vector<vertex>& simplex, std::size_t best) {
  double diameter = 0.0;
  for (std::size_t i = 0; i < simplex.size(); ++i) {
    if (i == best) continue;
    for (std::size_t j = 0; j < simplex[i].x.size(); ++j) {
      diameter = std::max(diameter,
                          std::abs(simplex[i].x[j] - simplex[best].x[j]));
    }
  }
  return diameter;
}

}  // namespace

nelder_mead_result nelder_mead(
    const std::function<double(std::span<const double>)>& objective,
    std::span<const double> start, std::span<const double> lo,
    std::span<const double> hi, const nelder_mead_options& options) {
  const std::size_t dims = start.size();
  nelder_mead_result result;
  result.x.assign(start.begin(), start.end());

  int evaluations = 0;
  auto eval = [&](std::span<const double> x) {
    ++evaluations;
    return objective(x);
  };

  std::vector<vertex> simplex(dims + 1);

  // Builds a fresh simplex around vertex 0: one step along each axis,
  // stepping backward when the fold would land on the anchor itself.
  auto spread_simplex = [&] {
    for (std::size_t i = 0; i < dims; ++i) {
      simplex[i + 1].x = simplex[0].x;
      double step = options.initial_step * (hi[i] - lo[i]);
      simplex[i + 1].x[i] =
          reflect_into_box(simplex[i + 1].x[i] + step, lo[i], hi[i]);
      if (simplex[i + 1].x[i] == simplex[0].x[i]) {
        simplex[i + 1].x[i] =
            reflect_into_box(simplex[0].x[i] - step, lo[i], hi[i]);
      }
      simplex[i + 1].f = eval(simplex[i + 1].x);
    }
  };

  simplex[0].x.assign(start.begin(), start.end());
  for (std::size_t j = 0; j < dims; ++j) {
    simplex[0].x[j] = reflect_into_box(simplex[0].x[j], lo[j], hi[j]);
  }
  simplex[0].f = eval(simplex[0].x);
  spread_simplex();

  std::vector<std::size_t> order(dims + 1);
  auto sort_order = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                     std::size_t b) {
      return simplex[a].f < simplex[b].f;
    });
  };

  std::vector<double> centroid(dims), candidate(dims);
  auto fold_candidate = [&] {
    for (std::size_t j = 0; j < dims; ++j) {
      candidate[j] = reflect_into_box(candidate[j], lo[j], hi[j]);
    }
  };

  // Folding can drop a candidate exactly onto a retained vertex; accepting it
  // would collapse the simplex short of the optimum.
  auto collides = [&](const std::vector<double>& x, std::size_t replaced) {
    for (std::size_t i = 0; i <= dims; ++i) {
      if (i != replaced && simplex[i].x == x) return true;
    }
    return false;
  };

  // Folding at the bounds can glue two vertices together and shrink the
  // diameter long before a minimum is reached, so a collapsed simplex is
  // respread around its best vertex and the search only stops once such a
  // restart no longer buys a material improvement.
  double f_at_restart = std::numeric_limits<double>::infinity();

  while (evaluations < options.max_evaluations) {
    sort_order();
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[order.size() - 2];

    if (simplex_diameter(simplex, best) < options.tolerance) {
      double improvement = f_at_restart - simplex[best].f;
      if (improvement <= 1e-12 * (1.0 + std::abs(simplex[best].f))) {
        result.converged = true;
        break;
      }
      f_at_restart = simplex[best].f;
      if (best != 0) std::swap(simplex[0], simplex[best]);
      spread_simplex();
      continue;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= dims; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < dims; ++j) centroid[j] += simplex[i].x[j];
    }
    for (std::size_t j = 0; j < dims; ++j) {
      centroid[j] /= static_cast<double>(dims);
    }

    // Reflection
    for (std::size_t j = 0; j < dims; ++j) {
      candidate[j] = centroid[j] + (centroid[j] - simplex[worst].x[j]);
    }
    fold_candidate();
    double f_reflect = eval(candidate);
    std::vector<double> reflect = candidate;
    bool reflect_collides = collides(reflect, worst);

    if (f_reflect < simplex[best].f && !reflect_collides) {
      // Expansion
      for (std::size_t j = 0; j < dims; ++j) {
        candidate[j] = centroid[j] + 2.0 * (centroid[j] - simplex[worst].x[j]);
      }
      fold_candidate();
      double f_expand = eval(candidate);
      if (f_expand < f_reflect && !collides(candidate, worst)) {
        simplex[worst].x = candidate;
        simplex[worst].f = f_expand;
      } else {
        simplex[worst].x = std::move(reflect);
        simplex[worst].f = f_reflect;
      }
      continue;
    }
    if (f_reflect < simplex[second_worst].f && !reflect_collides) {
      simplex[worst].x = std::move(reflect);
      simplex[worst].f = f_reflect;
      continue;
    }

    // Contraction: outside if the reflected point improved on the worst,
    // inside otherwise.
    bool outside = f_reflect < simplex[worst].f;
    double towards = outside ? 0.5 : -0.5;
    for (std::size_t j = 0; j < dims; ++j) {
      candidate[j] =
          centroid[j] + towards * (centroid[j] - simplex[worst].x[j]);
    }
    fold_candidate();
    double f_contract = eval(candidate);
    double gate = outside ? f_reflect : simplex[worst].f;
    if (f_contract <= gate && !collides(candidate, worst)) {
      simplex[worst].x = candidate;
      simplex[worst].f = f_contract;
      continue;
    }

    // Shrink toward the best vertex.
    for (std::size_t i = 0; i <= dims; ++i) {
      if (i == best) continue;
      for (std::size_t j = 0; j < dims; ++j) {
        simplex[i].x[j] = reflect_into_box(
            simplex[best].x[j] + 0.5 * (simplex[i].x[j] - simplex[best].x[j]),
            lo[j], hi[j]);
      }
      simplex[i].f = eval(simplex[i].x);
      if (evaluations >= options.max_evaluations) break;
    }
  }

  sort_order();
  result.x = simplex[order.front()].x;
  result.fx = simplex[order.front()].f;
  result.evaluations = evaluations;
  return result;
}

}  // namespace ct
