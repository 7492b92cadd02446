#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ctchoice/fit.hpp"
#include "ctchoice/model.hpp"

namespace ct {

// Input row for the effects table: a labeled problem, optionally paired with
// its sign-mirrored loss problem and with observed bold shares.
struct effect_input {
  std::string label;
  binary_problem problem;                 // gain member when paired
  std::optional<binary_problem> mirror;   // must equal mirror_problem(problem)
  std::optional<double> p_bold;
  std::optional<double> p_bold_mirror;
};

struct effect_row {
  std::string label;
  binary_problem problem;
  std::optional<binary_problem> mirror;
  std::optional<double> p_bold;
  std::optional<double> p_bold_mirror;
  double ci_x100 = 0.0;                   // CI * 100 of `problem`
  std::optional<double> mirror_ci_x100;
  std::optional<double> delta_ci_x100;    // CI+ - CI-, pairs only
};

// CI is computed with the domain-appropriate parameter set. Paired rows whose
// loss member is not the exact mirror throw validation_error(mismatched_pair).
std::vector<effect_row> effects_report(std::span<const effect_input> inputs,
                                       const param_set& theta_gain,
                                       const param_set& theta_loss);

struct subgroup_row {
  std::string split_label;  // "gender" or "earnings"
  std::string group_a, group_b;
  int n_a = 0, n_b = 0;        // respondents per group
  int bold_a = 0, bold_b = 0;  // bold players per group
  double prop_a = 0.0, prop_b = 0.0;
  double difference = 0.0;  // prop_a - prop_b
  double p_value = 0.5;     // one-sided, direction "group a exceeds group b"
};

// A bold player in a domain is a respondent whose count of bold choices
// strictly exceeds the sample mean count. Respondents with no answered
// problem in the domain are left out of both the mean and the map.
struct bold_player_summary {
  domain_kind domain = domain_kind::gain;
  double threshold = 0.0;  // mean bold-choice count
  std::map<std::string, bool> per_respondent;
  std::vector<subgroup_row> subgroup_rows;
};

bold_player_summary classify_bold_players(const choice_dataset& dataset,
                                          domain_kind domain);

enum class split_attribute { gender, earnings_median };

// Bold-player proportions across a binary respondent split: male/female, or
// rich/poor at the sample median of hourly pay (strictly above the median is
// rich). Respondents missing the attribute are excluded; a group smaller than
// two throws validation_error(degenerate_group).
std::vector<subgroup_row> subgroup_analysis(const bold_player_summary& summary,
                                            const choice_dataset& dataset,
                                            split_attribute attribute);

}  // namespace ct
