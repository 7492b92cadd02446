#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ctchoice/errors.hpp"
#include "ctchoice/money.hpp"

namespace ct {

enum class domain_kind { gain, loss };
enum class prospect_role { p0, p1 };
enum class choice { default_prospect, bold_prospect };
enum class gender { male, female, other };

const char* domain_name(domain_kind d);

// One branch of a gamble: a nonzero amount won (or lost) with probability p,
// nothing otherwise.
struct prospect {
  money outcome;
  double probability = 0.0;

  prospect() = default;
  prospect(money outcome, double probability);

  bool operator==(const prospect&) const = default;
};

// A canonicalized binary choice problem. Construction goes through
// canonicalize_problem so the invariants always hold:
//   p0 > p1, both in (0, 1]; |x0| < |x1|; outcomes share one sign.
// In gains the higher-probability prospect (x0, p0) is the default and the
// larger-outcome prospect (x1, p1) is the bold one; in losses the roles
// reverse: the surer small loss (x0, p0) is bold, the unlikely big loss
// (x1, p1) is the default.
struct binary_problem {
  std::string id;
  money x0;
  double p0 = 0.0;
  money x1;
  double p1 = 0.0;
  domain_kind domain = domain_kind::gain;
  prospect_role default_role = prospect_role::p0;
  prospect_role bold_role = prospect_role::p1;

  prospect prospect_of(prospect_role role) const;
  prospect default_prospect() const { return prospect_of(default_role); }
  prospect bold_prospect() const { return prospect_of(bold_role); }

  bool operator==(const binary_problem&) const = default;
};

// Validates and orders a pair of prospects into canonical default/bold form.
// Throws validation_error with code:
//   mixed_sign     one gain outcome and one loss outcome
//   degenerate_tie equal probabilities or equal |outcomes|
//   dominance      the larger |outcome| also carries the (weakly) favorable
//                  probability, so no genuine tradeoff exists
binary_problem canonicalize_problem(const prospect& a, const prospect& b,
                                    std::string id);

// Negates both outcomes, keeps probabilities, flips the domain and reassigns
// roles. An involution: mirror_problem(mirror_problem(p)) == p.
binary_problem mirror_problem(const binary_problem& p);

// True iff the chosen role is the problem's bold role.
bool is_bold_choice(const binary_problem& p, prospect_role chosen);

struct respondent_record {
  std::string respondent_id;
  std::map<std::string, choice> choices;  // problem id -> recorded choice
  std::optional<gender> gender_id;
  std::optional<money> hourly_pay;  // nonnegative when present
};

struct choice_dataset {
  std::vector<binary_problem> problems;
  std::vector<respondent_record> respondents;

  const binary_problem* find_problem(const std::string& id) const;

  // Checks id uniqueness and that every recorded choice references a known
  // problem; throws validation_error otherwise.
  void validate() const;
};

}  // namespace ct
