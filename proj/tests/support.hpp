#pragma once

// Shared helpers for the test suites: problem builders, deterministic random
// draws, and the synthetic planted-model fixtures used by the fit,
// cross-validation and acceptance tests.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "ctchoice/core.hpp"
#include "ctchoice/fit.hpp"
#include "ctchoice/model.hpp"

namespace ct_test {

// Scratch directory removed on scope exit.
struct temp_dir {
  std::filesystem::path path;

  temp_dir() {
    static std::atomic<int> counter{0};
    path = std::filesystem::temp_directory_path() /
           ("ctchoice-test-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path);
  }
  ~temp_dir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }

  std::filesystem::path write(const std::string& name,
                              const std::string& content) const {
    auto file = path / name;
    std::ofstream out(file);
    out << content;
    return file;
  }
};

inline ct::binary_problem gain(std::string id, std::int64_t x0, double p0,
                               std::int64_t x1, double p1) {
  return ct::canonicalize_problem(
      ct::prospect(ct::money::from_units(x0), p0),
      ct::prospect(ct::money::from_units(x1), p1), std::move(id));
}

inline ct::binary_problem loss(std::string id, std::int64_t x0, double p0,
                               std::int64_t x1, double p1) {
  return ct::canonicalize_problem(
      ct::prospect(ct::money::from_units(x0), p0),
      ct::prospect(ct::money::from_units(x1), p1), std::move(id));
}

// Deterministic uniform draw independent of std distribution internals.
inline double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * unit_draw(rng);
}

// Gaussian via Box-Muller on the deterministic unit draws.
inline double gaussian(std::mt19937_64& rng) {
  double u1 = unit_draw(rng);
  while (u1 <= 0.0) u1 = unit_draw(rng);
  double u2 = unit_draw(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline ct::param_set table1_gain_params() {
  return ct::param_set::four(1.1936, 1.2285, 0.7336, 2.6245);
}

inline ct::param_set table1_loss_params() {
  return ct::param_set::four(1.3349, 1.4337, 0.6505, 3.5565);
}

// 22 gain problems spanning outcomes 30..9000 and probabilities 0.01..1,
// chosen so the planted bold share 0.9 - 8*CI(theta*) stays strictly inside
// (0.02, 0.98) under the reference gain parameters.
inline std::vector<ct::binary_problem> synthetic_gain_problems() {
  struct spec_row {
    std::int64_t x0;
    double p0;
    std::int64_t x1;
    double p1;
  };
  const spec_row rows[] = {
      {3000, 1.00, 4000, 0.80}, {3000, 0.25, 4000, 0.20},
      {3000, 0.90, 6000, 0.45}, {240, 1.00, 1000, 0.25},
      {3000, 0.02, 6000, 0.01}, {200, 0.80, 300, 0.60},
      {50, 1.00, 120, 0.70},    {400, 0.95, 900, 0.55},
      {1500, 0.85, 2500, 0.65}, {30, 0.50, 90, 0.30},
      {600, 0.75, 1200, 0.40},  {2000, 0.60, 2600, 0.45},
      {800, 1.00, 3200, 0.35},  {100, 0.30, 450, 0.12},
      {5000, 0.90, 9000, 0.60}, {700, 0.40, 1100, 0.28},
      {1200, 0.70, 1800, 0.50}, {250, 0.55, 600, 0.25},
      {4500, 0.15, 7500, 0.08}, {900, 0.65, 1300, 0.55},
      {60, 0.90, 150, 0.50},    {3500, 0.75, 5200, 0.58},
  };
  std::vector<ct::binary_problem> problems;
  int i = 0;
  for (const auto& row : rows) {
    problems.push_back(
        gain("syn-" + std::to_string(++i), row.x0, row.p0, row.x1, row.p1));
  }
  return problems;
}

inline double planted_p_bold(const ct::binary_problem& problem,
                             const ct::param_set& theta) {
  double p = 0.9 - 8.0 * ct::challenge_index(problem, theta);
  return std::clamp(p, 0.02, 0.98);
}

// Aggregated observations from the planted linear model, optionally with
// Gaussian noise on the proportions. Proportions are quantized to counts out
// of n_respondents so they stay genuine proportions.
inline std::vector<ct::problem_observation> planted_observations(
    const std::vector<ct::binary_problem>& problems,
    const ct::param_set& theta, double noise_sigma, std::uint64_t seed,
    int n_respondents = 126) {
  std::mt19937_64 rng(seed);
  std::vector<ct::problem_observation> out;
  for (const auto& problem : problems) {
    double p = planted_p_bold(problem, theta);
    if (noise_sigma > 0.0) p += noise_sigma * gaussian(rng);
    p = std::clamp(p, 0.0, 1.0);
    int count = static_cast<int>(std::lround(p * n_respondents));
    ct::problem_observation obs;
    obs.problem = problem;
    obs.p_bold = static_cast<double>(count) / n_respondents;
    obs.n_respondents = n_respondents;
    out.push_back(std::move(obs));
  }
  return out;
}

// Respondent-level dataset: each respondent answers every problem, choosing
// bold with the planted probability.
inline ct::choice_dataset planted_dataset(
    const std::vector<ct::binary_problem>& problems,
    const ct::param_set& theta, int n_respondents, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ct::choice_dataset dataset;
  dataset.problems = problems;
  for (int i = 0; i < n_respondents; ++i) {
    ct::respondent_record record;
    record.respondent_id = "r" + std::to_string(i + 1);
    for (const auto& problem : problems) {
      bool bold = unit_draw(rng) < planted_p_bold(problem, theta);
      record.choices[problem.id] = bold ? ct::choice::bold_prospect
                                        : ct::choice::default_prospect;
    }
    dataset.respondents.push_back(std::move(record));
  }
  return dataset;
}

struct two_fold_fixture {
  ct::choice_dataset dataset;
  std::vector<std::vector<std::string>> folds;  // two disjoint halves
};

// Two 63-respondent subsamples drawn from one planted model: within each
// fold, every problem's bold share equals the planted value plus Gaussian
// noise of the given sigma, realized exactly as a count of bold choosers.
inline two_fold_fixture homogeneous_two_fold_dataset(
    const std::vector<ct::binary_problem>& problems,
    const ct::param_set& theta, double noise_sigma, std::uint64_t seed,
    int fold_size = 63) {
  std::mt19937_64 rng(seed);
  two_fold_fixture fixture;
  fixture.dataset.problems = problems;
  fixture.folds.resize(2);

  for (int fold = 0; fold < 2; ++fold) {
    int offset = fold * fold_size;
    for (int i = 0; i < fold_size; ++i) {
      ct::respondent_record record;
      record.respondent_id = "r" + std::to_string(offset + i + 1);
      fixture.folds[fold].push_back(record.respondent_id);
      fixture.dataset.respondents.push_back(std::move(record));
    }
    for (const auto& problem : problems) {
      double p = planted_p_bold(problem, theta) + noise_sigma * gaussian(rng);
      p = std::clamp(p, 0.0, 1.0);
      int bold_count = static_cast<int>(std::lround(p * fold_size));
      for (int i = 0; i < fold_size; ++i) {
        fixture.dataset.respondents[offset + i].choices[problem.id] =
            i < bold_count ? ct::choice::bold_prospect
                           : ct::choice::default_prospect;
      }
    }
  }
  return fixture;
}

}  // namespace ct_test
