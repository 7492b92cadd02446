#include "ctchoice/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ctchoice/stats.hpp"

namespace ct {

std::vector<effect_row> effects_report(std::span<const effect_input> inputs,
                                       const param_set& theta_gain,
                                       const param_set& theta_loss) {
  theta_gain.validate();
  theta_loss.validate();
  std::vector<effect_row> rows;
  rows.reserve(inputs.size());
  for (const auto& input : inputs) {
    effect_row row;
    row.label = input.label;
    row.problem = input.problem;
    row.mirror = input.mirror;
    row.p_bold = input.p_bold;
    row.p_bold_mirror = input.p_bold_mirror;

    const param_set& theta = input.problem.domain == domain_kind::gain
                                 ? theta_gain
                                 : theta_loss;
    row.ci_x100 = 100.0 * challenge_index(input.problem, theta);

    if (input.mirror) {
      // ids may differ between the pair members; the mirror must match on
      // everything else
      binary_problem expected = mirror_problem(input.problem);
      expected.id = input.mirror->id;
      if (input.problem.domain != domain_kind::gain ||
          *input.mirror != expected) {
        throw validation_error(errc::mismatched_pair,
                               "row '" + input.label +
                                   "': paired problem is not the mirror of "
                                   "its gain member");
      }
      row.mirror_ci_x100 = 100.0 * challenge_index(*input.mirror, theta_loss);
      row.delta_ci_x100 = row.ci_x100 - *row.mirror_ci_x100;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

bold_player_summary classify_bold_players(const choice_dataset& dataset,
                                          domain_kind domain) {
  bool any_problem = std::any_of(
      dataset.problems.begin(), dataset.problems.end(),
      [&](const binary_problem& p) { return p.domain == domain; });
  if (!any_problem) {
    throw validation_error(errc::empty_domain,
                           std::string("dataset has no ") +
                               domain_name(domain) + " problems");
  }

  bold_player_summary summary;
  summary.domain = domain;

  std::vector<std::pair<std::string, int>> counts;
  double total = 0.0;
  for (const auto& respondent : dataset.respondents) {
    int bold = 0, answered = 0;
    for (const auto& [problem_id, picked] : respondent.choices) {
      const binary_problem* problem = dataset.find_problem(problem_id);
      if (!problem || problem->domain != domain) continue;
      ++answered;
      if (picked == choice::bold_prospect) ++bold;
    }
    if (answered == 0) continue;  // nothing to classify on
    counts.emplace_back(respondent.respondent_id, bold);
    total += bold;
  }
  if (counts.empty()) {
    throw validation_error(errc::empty_domain,
                           std::string("no recorded choices in the ") +
                               domain_name(domain) + " domain");
  }
  summary.threshold = total / static_cast<double>(counts.size());
  for (const auto& [id, bold] : counts) {
    summary.per_respondent[id] = bold > summary.threshold;  // strict
  }
  return summary;
}

namespace {

struct group_tally {
  int members = 0;
  int bold_players = 0;
};

subgroup_row make_row(const std::string& split_label, const std::string& a,
                      const std::string& b, const group_tally& ga,
                      const group_tally& gb) {
  if (ga.members < 2 || gb.members < 2) {
    throw validation_error(errc::degenerate_group,
                           "split '" + split_label +
                               "' leaves a group with fewer than 2 members");
  }
  subgroup_row row;
  row.split_label = split_label;
  row.group_a = a;
  row.group_b = b;
  row.n_a = ga.members;
  row.n_b = gb.members;
  row.bold_a = ga.bold_players;
  row.bold_b = gb.bold_players;
  row.prop_a = static_cast<double>(ga.bold_players) / ga.members;
  row.prop_b = static_cast<double>(gb.bold_players) / gb.members;
  auto test = two_proportion_test(ga.bold_players, ga.members,
                                  gb.bold_players, gb.members);
  row.difference = test.difference;
  row.p_value = test.p_value;
  return row;
}

}  // namespace

std::vector<subgroup_row> subgroup_analysis(const bold_player_summary& summary,
                                            const choice_dataset& dataset,
                                            split_attribute attribute) {
  group_tally a, b;
  if (attribute == split_attribute::gender) {
    for (const auto& respondent : dataset.respondents) {
      auto it = summary.per_respondent.find(respondent.respondent_id);
      if (it == summary.per_respondent.end()) continue;
      if (!respondent.gender_id || *respondent.gender_id == gender::other) {
        continue;
      }
      group_tally& g = *respondent.gender_id == gender::male ? a : b;
      ++g.members;
      if (it->second) ++g.bold_players;
    }
    return {make_row("gender", "male", "female", a, b)};
  }

  // Earnings split at the sample median of hourly pay; sitting exactly on
  // the median counts as poor.
  std::vector<std::int64_t> pay;
  for (const auto& respondent : dataset.respondents) {
    if (summary.per_respondent.count(respondent.respondent_id) &&
        respondent.hourly_pay) {
      pay.push_back(respondent.hourly_pay->minor_units());
    }
  }
  if (pay.size() < 4) {
    throw validation_error(errc::degenerate_group,
                           "earnings split needs at least 4 respondents "
                           "with recorded pay");
  }
  std::sort(pay.begin(), pay.end());
  double median;
  std::size_t mid = pay.size() / 2;
  if (pay.size() % 2 == 1) {
    median = static_cast<double>(pay[mid]);
  } else {
    median = 0.5 * (static_cast<double>(pay[mid - 1]) +
                    static_cast<double>(pay[mid]));
  }

  for (const auto& respondent : dataset.respondents) {
    auto it = summary.per_respondent.find(respondent.respondent_id);
    if (it == summary.per_respondent.end() || !respondent.hourly_pay) continue;
    bool rich = static_cast<double>(respondent.hourly_pay->minor_units()) >
                median;
    group_tally& g = rich ? a : b;
    ++g.members;
    if (it->second) ++g.bold_players;
  }
  return {make_row("earnings", "rich", "poor", a, b)};
}

}  // namespace ct
