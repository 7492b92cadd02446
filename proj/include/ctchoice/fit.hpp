#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ctchoice/core.hpp"
#include "ctchoice/model.hpp"
#include "ctchoice/stats.hpp"

namespace ct {

// A problem together with the observed share of respondents picking its bold
// prospect.
struct problem_observation {
  binary_problem problem;
  double p_bold = 0.0;    // in [0, 1]
  int n_respondents = 0;  // respondents who answered this problem

  void validate() const;
};

struct search_config {
  int starts = 32;             // Latin-hypercube starts over the box
  std::uint64_t seed = 2024;
  int max_evaluations = 2000;  // per start
  double tolerance = 1e-9;     // simplex diameter
  int jobs = 1;                // concurrent starts
  std::optional<param_bounds> bounds;  // overrides the per-form default box
};

struct fit_result {
  param_set params;
  double r = 0.0;  // recomputed from ci_values and p_bold, never cached
  correlation_report report;
  std::vector<double> ci_values;  // aligned with the observation order
  long objective_evaluations = 0;
  int starts = 0;
  bool converged = false;  // best start stopped on the diameter criterion
};

// Per-problem bold-choice proportions. A respondent without a recorded choice
// on a problem is excluded from that problem's denominator only. A filtered
// problem with zero responses throws validation_error(empty_problem).
std::vector<problem_observation> bold_proportions(
    const choice_dataset& dataset,
    std::optional<domain_kind> domain_filter = std::nullopt);

// Searches the parameter box for the most negative correlation between CI and
// p_bold. Multi-start simplex: `starts` Latin-hypercube points, one neutral
// start at a = gamma = delta = 1, and for four/six tying one start at the
// best solution of the next-smaller scheme (fitted internally), which makes
// the achievable |r| monotone in model size. Deterministic under the seed;
// start count and evaluation totals cover the warm-up stages too.
fit_result fit_params(std::span<const problem_observation> observations,
                      tying_scheme tying, weighting_form form,
                      const search_config& config = {});

struct model_variant {
  tying_scheme tying = tying_scheme::three_param;
  weighting_form form = weighting_form::gonzalez_wu;
};

struct comparison_row {
  model_variant variant;
  int free_parameters = 0;
  fit_result result;
};

// One fit per variant on the same observations, sorted by |r| descending with
// ties broken toward fewer free parameters. The identity baseline is always
// present (appended if absent) and needs no optimizer evaluations.
std::vector<comparison_row> model_comparison(
    std::span<const problem_observation> observations,
    std::span<const model_variant> variants, const search_config& config = {});

}  // namespace ct
