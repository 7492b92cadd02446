#include "ctchoice/core.hpp"

#include <set>
#include <utility>

namespace ct {

const char* domain_name(domain_kind d) {
  return d == domain_kind::gain ? "gain" : "loss";
}

const char* errc_name(errc code) {
  switch (code) {
    case errc::mixed_sign: return "mixed_sign";
    case errc::dominance: return "dominance";
    case errc::degenerate_tie: return "degenerate_tie";
    case errc::non_positive_weight_gap: return "non_positive_weight_gap";
    case errc::insufficient_data: return "insufficient_data";
    case errc::zero_variance: return "zero_variance";
    case errc::bad_domain: return "bad_domain";
    case errc::too_few_problems: return "too_few_problems";
    case errc::degenerate_objective: return "degenerate_objective";
    case errc::empty_problem: return "empty_problem";
    case errc::too_few_respondents: return "too_few_respondents";
    case errc::mismatched_pair: return "mismatched_pair";
    case errc::empty_domain: return "empty_domain";
    case errc::degenerate_group: return "degenerate_group";
    case errc::malformed_input: return "malformed_input";
    case errc::duplicate_id: return "duplicate_id";
    case errc::unknown_problem_id: return "unknown_problem_id";
    case errc::duplicate_cell: return "duplicate_cell";
    case errc::unknown_attribute: return "unknown_attribute";
    case errc::inconsistent_attribute: return "inconsistent_attribute";
    case errc::invalid_parameter: return "invalid_parameter";
  }
  return "unknown";
}

prospect::prospect(money outcome, double probability)
    : outcome(outcome), probability(probability) {
  if (outcome.is_zero()) {
    throw validation_error(errc::invalid_parameter,
                           "prospect outcome must be nonzero");
  }
  if (!(probability > 0.0) || probability > 1.0) {
    throw validation_error(errc::invalid_parameter,
                           "prospect probability must lie in (0, 1]");
  }
}

prospect binary_problem::prospect_of(prospect_role role) const {
  return role == prospect_role::p0 ? prospect(x0, p0) : prospect(x1, p1);
}

binary_problem canonicalize_problem(const prospect& a, const prospect& b,
                                    std::string id) {
  if (a.outcome.is_positive() != b.outcome.is_positive()) {
    throw validation_error(errc::mixed_sign,
                           "problem '" + id +
                               "': outcomes mix gain and loss; mixed gambles "
                               "are out of model");
  }
  if (a.probability == b.probability) {
    throw validation_error(errc::degenerate_tie,
                           "problem '" + id + "': equal probabilities");
  }
  if (a.outcome.abs() == b.outcome.abs()) {
    throw validation_error(errc::degenerate_tie,
                           "problem '" + id + "': equal outcome magnitudes");
  }

  // Canonical slot 0 holds the higher-probability prospect.
  const prospect& hi = a.probability > b.probability ? a : b;
  const prospect& lo = a.probability > b.probability ? b : a;

  // A genuine tradeoff requires the surer prospect to carry the smaller
  // magnitude. Otherwise one prospect is better on both coordinates: in
  // gains the bigger amount with the bigger probability dominates, in losses
  // the smaller loss with the smaller probability does.
  if (hi.outcome.abs() > lo.outcome.abs()) {
    throw validation_error(
        errc::dominance,
        "problem '" + id +
            "': the higher-probability prospect also has the larger "
            "magnitude; one option dominates");
  }

  binary_problem p;
  p.id = std::move(id);
  p.x0 = hi.outcome;
  p.p0 = hi.probability;
  p.x1 = lo.outcome;
  p.p1 = lo.probability;
  p.domain =
      hi.outcome.is_positive() ? domain_kind::gain : domain_kind::loss;
  if (p.domain == domain_kind::gain) {
    p.default_role = prospect_role::p0;
    p.bold_role = prospect_role::p1;
  } else {
    p.default_role = prospect_role::p1;
    p.bold_role = prospect_role::p0;
  }
  return p;
}

binary_problem mirror_problem(const binary_problem& p) {
  prospect a(p.x0.negated(), p.p0);
  prospect b(p.x1.negated(), p.p1);
  return canonicalize_problem(a, b, p.id);
}

bool is_bold_choice(const binary_problem& p, prospect_role chosen) {
  return chosen == p.bold_role;
}

const binary_problem* choice_dataset::find_problem(
    const std::string& id) const {
  for (const auto& p : problems) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

void choice_dataset::validate() const {
  std::set<std::string> problem_ids;
  for (const auto& p : problems) {
    if (!problem_ids.insert(p.id).second) {
      throw validation_error(errc::duplicate_id,
                             "duplicate problem id '" + p.id + "'");
    }
  }
  std::set<std::string> respondent_ids;
  for (const auto& r : respondents) {
    if (!respondent_ids.insert(r.respondent_id).second) {
      throw validation_error(
          errc::duplicate_id,
          "duplicate respondent id '" + r.respondent_id + "'");
    }
    for (const auto& [problem_id, unused] : r.choices) {
      if (problem_ids.count(problem_id) == 0) {
        throw validation_error(errc::unknown_problem_id,
                               "respondent '" + r.respondent_id +
                                   "' answered unknown problem '" +
                                   problem_id + "'");
      }
    }
    if (r.hourly_pay && r.hourly_pay->is_negative()) {
      throw validation_error(errc::invalid_parameter,
                             "respondent '" + r.respondent_id +
                                 "' has negative hourly pay");
    }
  }
}

}  // namespace ct
