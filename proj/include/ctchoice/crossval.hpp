#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ctchoice/fit.hpp"

namespace ct {

// One fold of respondent-level cross-validation: parameters are fitted on the
// training subsample's bold proportions and scored, frozen, on the test
// subsample's proportions.
struct fold_report {
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
  fit_result train_fit;
  double test_r = 0.0;
};

struct crossval_averages {
  double train_r = 0.0;
  double test_r = 0.0;
  param_set params;  // arithmetic mean of the per-fold parameters
};

struct crossval_report {
  domain_kind domain = domain_kind::gain;
  int k = 2;
  std::uint64_t seed = 0;
  std::vector<fold_report> folds;
  crossval_averages averages;
};

// Shuffles respondent ids deterministically under the seed and cuts them into
// k nearly equal parts (sizes differ by at most one, larger parts first).
// Requires at least 2k respondents.
std::vector<std::vector<std::string>> split_respondents(
    const choice_dataset& dataset, int k, std::uint64_t seed);

// Each part takes one turn as the training subsample; the rest of the sample
// is its test side. Bold proportions are recomputed inside each subsample, so
// nothing from the test respondents reaches the fit.
crossval_report cross_validate(const choice_dataset& dataset,
                               domain_kind domain, int k, std::uint64_t seed,
                               tying_scheme tying, weighting_form form,
                               const search_config& config = {});

// Same, with caller-supplied respondent partition (fold order is preserved).
crossval_report cross_validate_with_folds(
    const choice_dataset& dataset, domain_kind domain,
    const std::vector<std::vector<std::string>>& folds, tying_scheme tying,
    weighting_form form, const search_config& config = {});

}  // namespace ct
