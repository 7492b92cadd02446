#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ctchoice/core.hpp"
#include "ctchoice/model.hpp"
#include "ctchoice/stats.hpp"

namespace ct {

inline constexpr const char* fixtures_version = "fixtures-v1";

// Reference values transcribed verbatim from the source study's printed
// tables. `published_ci_x100` is the value as printed there; where it
// disagrees with direct evaluation the discrepancy is a known misprint and is
// noted on the fixture.
struct fixture_problem {
  binary_problem problem;
  std::optional<double> p_bold;            // observed share choosing bold
  std::optional<double> published_ci_x100;
  std::string citation;
  std::string note;  // nonempty where the printed value is inconsistent
};

struct fixture_pair {
  std::string label;
  fixture_problem gain;
  fixture_problem loss;  // the sign-mirrored problem
  double published_delta_ci_x100 = 0.0;
};

struct fixture_params {
  std::string name;
  param_set params;
  std::string citation;
};

struct fixture_correlation {
  std::string name;
  correlation_report report;  // bounds as printed
  int published_n = 0;        // as printed; may disagree with report.n
  std::string citation;
  std::string note;
};

struct fixture_set {
  std::vector<fixture_pair> table5;          // five mirrored gain/loss pairs
  std::vector<fixture_problem> table4;       // the effects-table problems
  std::vector<fixture_params> params;        // params_gains/losses/all/kt
  std::vector<fixture_correlation> correlations;
  std::vector<binary_problem> primer;        // the two introductory examples

  const fixture_params& params_named(std::string_view name) const;
  const fixture_correlation& correlation_named(std::string_view name) const;
};

const fixture_set& builtin_fixtures();

// Problems of a named fixture ("table5", "table4", "primer") in table order.
std::vector<binary_problem> fixture_problems(std::string_view name);

}  // namespace ct
