#include "ctchoice/fit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <string>
#include <thread>

#include "ctchoice/nelder_mead.hpp"

namespace ct {

void problem_observation::validate() const {
  if (!(p_bold >= 0.0) || p_bold > 1.0) {
    throw validation_error(errc::invalid_parameter,
                           "p_bold outside [0, 1] for problem '" +
                               problem.id + "'");
  }
  if (n_respondents < 1) {
    throw validation_error(errc::invalid_parameter,
                           "observation without respondents for problem '" +
                               problem.id + "'");
  }
}

std::vector<problem_observation> bold_proportions(
    const choice_dataset& dataset, std::optional<domain_kind> domain_filter) {
  std::vector<problem_observation> out;
  for (const auto& problem : dataset.problems) {
    if (domain_filter && problem.domain != *domain_filter) continue;
    int bold = 0, total = 0;
    for (const auto& respondent : dataset.respondents) {
      auto it = respondent.choices.find(problem.id);
      if (it == respondent.choices.end()) continue;  // missing cell
      ++total;
      if (it->second == choice::bold_prospect) ++bold;
    }
    if (total == 0) {
      throw validation_error(errc::empty_problem,
                             "problem '" + problem.id +
                                 "' has no recorded choices");
    }
    problem_observation obs;
    obs.problem = problem;
    obs.p_bold = static_cast<double>(bold) / total;
    obs.n_respondents = total;
    out.push_back(std::move(obs));
  }
  return out;
}

namespace {

constexpr double penalty_base = 1e3;

// Mapping between the free-parameter vector searched by the simplex and a
// full param_set. The tk92 form has no elevation parameter, so its delta
// slots stay pinned at 1.
struct param_layout {
  tying_scheme tying;
  weighting_form form;

  int dims() const { return free_parameter_count(tying, form); }

  void box(const param_bounds& bounds, std::vector<double>& lo,
           std::vector<double>& hi) const {
    lo.clear();
    hi.clear();
    auto push = [&](double l, double h) {
      lo.push_back(l);
      hi.push_back(h);
    };
    push(bounds.a_lo, bounds.a_hi);
    if (tying != tying_scheme::three_param) push(bounds.a_lo, bounds.a_hi);
    bool with_delta = form != weighting_form::tversky_kahneman_1992;
    int weight_sides = tying == tying_scheme::six_param ? 2 : 1;
    for (int side = 0; side < weight_sides; ++side) {
      push(bounds.gamma_lo, bounds.gamma_hi);
    }
    if (with_delta) {
      for (int side = 0; side < weight_sides; ++side) {
        push(bounds.delta_lo, bounds.delta_hi);
      }
    }
  }

  param_set decode(std::span<const double> x) const {
    param_set p;
    p.tying = tying;
    p.form = form;
    std::size_t i = 0;
    p.a0 = x[i++];
    p.a1 = tying == tying_scheme::three_param ? p.a0 : x[i++];
    bool with_delta = form != weighting_form::tversky_kahneman_1992;
    if (tying == tying_scheme::six_param) {
      p.gamma0 = x[i++];
      p.gamma1 = x[i++];
      if (with_delta) {
        p.delta0 = x[i++];
        p.delta1 = x[i++];
      }
    } else {
      p.gamma0 = p.gamma1 = x[i++];
      if (with_delta) p.delta0 = p.delta1 = x[i++];
    }
    return p;
  }

  std::vector<double> encode(const param_set& p) const {
    std::vector<double> x;
    x.push_back(p.a0);
    if (tying != tying_scheme::three_param) x.push_back(p.a1);
    bool with_delta = form != weighting_form::tversky_kahneman_1992;
    if (tying == tying_scheme::six_param) {
      x.push_back(p.gamma0);
      x.push_back(p.gamma1);
      if (with_delta) {
        x.push_back(p.delta0);
        x.push_back(p.delta1);
      }
    } else {
      x.push_back(p.gamma0);
      if (with_delta) x.push_back(p.delta0);
    }
    return x;
  }
};

double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Latin hypercube over the box: one stratum per start and dimension, strata
// permuted independently per dimension. Hand-rolled draws keep the sequence
// identical across standard library implementations.
std::vector<std::vector<double>> latin_hypercube(int n,
                                                 std::span<const double> lo,
                                                 std::span<const double> hi,
                                                 std::mt19937_64& rng) {
  std::size_t dims = lo.size();
  std::vector<std::vector<double>> points(n, std::vector<double>(dims));
  std::vector<int> strata(n);
  for (std::size_t j = 0; j < dims; ++j) {
    for (int i = 0; i < n; ++i) strata[i] = i;
    for (int i = n - 1; i > 0; --i) {
      int k = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
      std::swap(strata[i], strata[k]);
    }
    double width = (hi[j] - lo[j]) / n;
    for (int i = 0; i < n; ++i) {
      points[i][j] = lo[j] + (strata[i] + unit_draw(rng)) * width;
    }
  }
  return points;
}

struct objective_context {
  std::span<const problem_observation> observations;
  param_layout layout;
  std::vector<double> p_bold;

  // Objective value at x: the correlation r itself (to be minimized), or a
  // penalty above any reachable r when the parameters break the model.
  double operator()(std::span<const double> x,
                    std::vector<double>* ci_out = nullptr) const {
    param_set theta = layout.decode(x);
    std::vector<double> ci(observations.size());
    double violation = 0.0;
    for (std::size_t i = 0; i < observations.size(); ++i) {
      const auto& problem = observations[i].problem;
      double gap = ci_probability_factor(problem, theta);
      if (!(gap > 0.0)) {
        violation += 1.0 - gap;
        continue;
      }
      ci[i] = ci_outcome_factor(problem, theta) * gap;
    }
    if (violation > 0.0) return penalty_base + violation;
    double r;
    try {
      r = pearson_r(ci, p_bold);
    } catch (const numerical_error&) {
      return penalty_base;  // constant CI vector
    }
    if (ci_out) *ci_out = std::move(ci);
    return r;
  }
};

struct stage_best {
  std::vector<double> x;
  double f = penalty_base;
  bool converged = false;
};

bool better(const stage_best& a, const stage_best& b) {
  if (a.f != b.f) return a.f < b.f;
  return a.x < b.x;  // lexicographic tie-break keeps merging order-free
}

struct fit_accumulator {
  long evaluations = 0;
  int starts = 0;
};

stage_best run_stage(const objective_context& context,
                     const param_bounds& bounds, const search_config& config,
                     std::span<const param_set> warm_starts,
                     fit_accumulator& accumulator) {
  std::vector<double> lo, hi;
  context.layout.box(bounds, lo, hi);

  std::mt19937_64 rng(config.seed);
  auto starts = latin_hypercube(std::max(config.starts, 1), lo, hi, rng);

  param_set neutral;  // a = gamma = delta = 1
  neutral.tying = context.layout.tying;
  neutral.form = context.layout.form;
  auto neutral_x = context.layout.encode(neutral);
  for (std::size_t j = 0; j < neutral_x.size(); ++j) {
    neutral_x[j] = std::clamp(neutral_x[j], lo[j], hi[j]);
  }
  starts.push_back(std::move(neutral_x));
  for (const auto& warm : warm_starts) {
    starts.push_back(context.layout.encode(warm));
  }

  nelder_mead_options nm_options;
  nm_options.tolerance = config.tolerance;
  nm_options.max_evaluations = config.max_evaluations;

  const int n_starts = static_cast<int>(starts.size());
  std::vector<stage_best> bests(n_starts);
  std::vector<int> eval_counts(n_starts, 0);

  auto run_one = [&](int i) {
    auto nm = nelder_mead(
        [&context](std::span<const double> x) { return context(x); },
        starts[i], lo, hi, nm_options);
    bests[i] = stage_best{std::move(nm.x), nm.fx, nm.converged};
    eval_counts[i] = nm.evaluations;
  };

  int jobs = std::clamp(config.jobs, 1, n_starts);
  if (jobs <= 1) {
    for (int i = 0; i < n_starts; ++i) run_one(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (int t = 0; t < jobs; ++t) {
      workers.emplace_back([&] {
        for (int i = next.fetch_add(1); i < n_starts;
             i = next.fetch_add(1)) {
          run_one(i);
        }
      });
    }
    for (auto& w : workers) w.join();
  }

  stage_best best = bests[0];
  for (int i = 1; i < n_starts; ++i) {
    if (better(bests[i], best)) best = bests[i];
  }
  for (int c : eval_counts) accumulator.evaluations += c;
  accumulator.starts += n_starts;
  return best;
}

fit_result identity_fit(std::span<const problem_observation> observations) {
  fit_result result;
  result.params = param_set::identity_baseline();
  result.ci_values.reserve(observations.size());
  std::vector<double> p_bold;
  for (const auto& obs : observations) {
    result.ci_values.push_back(challenge_index(obs.problem, result.params));
    p_bold.push_back(obs.p_bold);
  }
  result.report = correlate(result.ci_values, p_bold);
  result.r = result.report.r;
  result.converged = true;
  return result;
}

}  // namespace

fit_result fit_params(std::span<const problem_observation> observations,
                      tying_scheme tying, weighting_form form,
                      const search_config& config) {
  if (observations.size() < 4) {
    throw validation_error(errc::too_few_problems,
                           "fitting needs at least 4 observations, got " +
                               std::to_string(observations.size()));
  }
  for (const auto& obs : observations) obs.validate();

  if (form == weighting_form::identity) return identity_fit(observations);

  param_bounds bounds = config.bounds.value_or(param_bounds::defaults(form));
  bounds.validate();

  objective_context context;
  context.observations = observations;
  context.p_bold.reserve(observations.size());
  for (const auto& obs : observations) context.p_bold.push_back(obs.p_bold);

  fit_accumulator accumulator;
  std::vector<param_set> warm;

  auto stage = [&](tying_scheme stage_tying) {
    context.layout = param_layout{stage_tying, form};
    auto best =
        run_stage(context, bounds, config, warm, accumulator);
    return std::pair{context.layout.decode(best.x), best};
  };

  // Smaller schemes are fitted first and their optima seed the larger search,
  // so the best reachable |r| can only grow with the parameter count.
  stage_best final_best;
  if (tying == tying_scheme::three_param) {
    final_best = stage(tying_scheme::three_param).second;
  } else if (tying == tying_scheme::four_param) {
    warm = {stage(tying_scheme::three_param).first};
    final_best = stage(tying_scheme::four_param).second;
  } else {
    param_set theta3 = stage(tying_scheme::three_param).first;
    warm = {theta3};
    param_set theta4 = stage(tying_scheme::four_param).first;
    warm = {theta4, theta3};
    final_best = stage(tying_scheme::six_param).second;
  }

  if (final_best.f >= penalty_base) {
    throw numerical_error(errc::degenerate_objective,
                          "no parameter candidate produced a usable "
                          "correlation");
  }

  param_layout layout{tying, form};
  fit_result result;
  result.params = layout.decode(final_best.x);
  result.params.validate();

  // Recompute the correlation from scratch; nothing is trusted from the
  // optimizer internals.
  context.layout = layout;
  std::vector<double> ci;
  double r = context(final_best.x, &ci);
  result.ci_values = std::move(ci);
  result.r = r;
  result.report = correlate(result.ci_values, context.p_bold);
  result.objective_evaluations = accumulator.evaluations;
  result.starts = accumulator.starts;
  result.converged = final_best.converged;
  return result;
}

std::vector<comparison_row> model_comparison(
    std::span<const problem_observation> observations,
    std::span<const model_variant> variants, const search_config& config) {
  std::vector<comparison_row> rows;
  bool has_identity = false;
  for (const auto& variant : variants) {
    comparison_row row;
    row.variant = variant;
    row.free_parameters = free_parameter_count(variant.tying, variant.form);
    row.result = fit_params(observations, variant.tying, variant.form, config);
    if (variant.form == weighting_form::identity) has_identity = true;
    rows.push_back(std::move(row));
  }
  if (!has_identity) {
    comparison_row row;
    row.variant = {tying_scheme::three_param, weighting_form::identity};
    row.free_parameters = 0;
    row.result = fit_params(observations, row.variant.tying, row.variant.form,
                            config);
    rows.push_back(std::move(row));
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const comparison_row& a, const comparison_row& b) {
                     double fa = std::abs(a.result.r);
                     double fb = std::abs(b.result.r);
                     if (fa != fb) return fa > fb;
                     return a.free_parameters < b.free_parameters;
                   });
  return rows;
}

}  // namespace ct
