#include "ctchoice/crossval.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>

namespace ct {

namespace {

choice_dataset restrict_respondents(const choice_dataset& dataset,
                                    const std::vector<std::string>& ids) {
  std::set<std::string> keep(ids.begin(), ids.end());
  choice_dataset out;
  out.problems = dataset.problems;
  for (const auto& respondent : dataset.respondents) {
    if (keep.count(respondent.respondent_id)) out.respondents.push_back(respondent);
  }
  return out;
}

choice_dataset restrict_domain(const choice_dataset& dataset,
                               domain_kind domain) {
  choice_dataset out;
  for (const auto& p : dataset.problems) {
    if (p.domain == domain) out.problems.push_back(p);
  }
  out.respondents = dataset.respondents;
  return out;
}

}  // namespace

std::vector<std::vector<std::string>> split_respondents(
    const choice_dataset& dataset, int k, std::uint64_t seed) {
  if (k < 2) {
    throw validation_error(errc::invalid_parameter, "split needs k >= 2");
  }
  const int n = static_cast<int>(dataset.respondents.size());
  if (n < 2 * k) {
    throw validation_error(errc::too_few_respondents,
                           "splitting " + std::to_string(n) +
                               " respondents into " + std::to_string(k) +
                               " parts leaves fewer than 2 per part");
  }
  std::vector<std::string> ids;
  ids.reserve(n);
  for (const auto& r : dataset.respondents) ids.push_back(r.respondent_id);

  // Fisher-Yates with raw engine draws; std::shuffle's order is not pinned
  // down by the standard.
  std::mt19937_64 rng(seed);
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(ids[i], ids[j]);
  }

  std::vector<std::vector<std::string>> folds(k);
  int base = n / k, remainder = n % k;
  int cursor = 0;
  for (int f = 0; f < k; ++f) {
    int size = base + (f < remainder ? 1 : 0);
    folds[f].assign(ids.begin() + cursor, ids.begin() + cursor + size);
    cursor += size;
  }
  return folds;
}

crossval_report cross_validate_with_folds(
    const choice_dataset& dataset, domain_kind domain,
    const std::vector<std::vector<std::string>>& folds, tying_scheme tying,
    weighting_form form, const search_config& config) {
  crossval_report report;
  report.domain = domain;
  report.k = static_cast<int>(folds.size());
  report.seed = config.seed;

  choice_dataset domain_data = restrict_domain(dataset, domain);
  if (domain_data.problems.empty()) {
    throw validation_error(errc::empty_domain,
                           std::string("dataset has no ") +
                               domain_name(domain) + " problems");
  }

  std::set<std::string> all_ids;
  for (const auto& r : dataset.respondents) all_ids.insert(r.respondent_id);

  for (const auto& train_ids : folds) {
    fold_report fold;
    fold.train_ids = train_ids;
    std::set<std::string> in_fold(train_ids.begin(), train_ids.end());
    for (const auto& id : all_ids) {
      if (!in_fold.count(id)) fold.test_ids.push_back(id);
    }

    auto train_obs = bold_proportions(
        restrict_respondents(domain_data, fold.train_ids), std::nullopt);
    fold.train_fit = fit_params(train_obs, tying, form, config);

    auto test_obs = bold_proportions(
        restrict_respondents(domain_data, fold.test_ids), std::nullopt);
    std::vector<double> ci, p_bold;
    for (const auto& obs : test_obs) {
      ci.push_back(challenge_index(obs.problem, fold.train_fit.params));
      p_bold.push_back(obs.p_bold);
    }
    fold.test_r = pearson_r(ci, p_bold);
    report.folds.push_back(std::move(fold));
  }

  auto& avg = report.averages;
  avg.params = report.folds.front().train_fit.params;
  avg.params.a0 = avg.params.a1 = 0.0;
  avg.params.gamma0 = avg.params.gamma1 = 0.0;
  avg.params.delta0 = avg.params.delta1 = 0.0;
  for (const auto& fold : report.folds) {
    avg.train_r += fold.train_fit.r;
    avg.test_r += fold.test_r;
    const auto& p = fold.train_fit.params;
    avg.params.a0 += p.a0;
    avg.params.a1 += p.a1;
    avg.params.gamma0 += p.gamma0;
    avg.params.gamma1 += p.gamma1;
    avg.params.delta0 += p.delta0;
    avg.params.delta1 += p.delta1;
  }
  double count = static_cast<double>(report.folds.size());
  avg.train_r /= count;
  avg.test_r /= count;
  avg.params.a0 /= count;
  avg.params.a1 /= count;
  avg.params.gamma0 /= count;
  avg.params.gamma1 /= count;
  avg.params.delta0 /= count;
  avg.params.delta1 /= count;
  return report;
}

crossval_report cross_validate(const choice_dataset& dataset,
                               domain_kind domain, int k, std::uint64_t seed,
                               tying_scheme tying, weighting_form form,
                               const search_config& config) {
  auto folds = split_respondents(dataset, k, seed);
  search_config fold_config = config;
  fold_config.seed = seed;
  return cross_validate_with_folds(dataset, domain, folds, tying, form,
                                   fold_config);
}

}  // namespace ct
