#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ct {

// Specific failure kinds, shared by the three exception categories below.
enum class errc {
  // problem construction
  mixed_sign,
  dominance,
  degenerate_tie,
  // model evaluation
  non_positive_weight_gap,
  // statistics
  insufficient_data,
  zero_variance,
  bad_domain,
  // fitting
  too_few_problems,
  degenerate_objective,
  empty_problem,
  // cross-validation
  too_few_respondents,
  // analysis
  mismatched_pair,
  empty_domain,
  degenerate_group,
  // file handling
  malformed_input,
  duplicate_id,
  unknown_problem_id,
  duplicate_cell,
  unknown_attribute,
  inconsistent_attribute,
  // parameters / config
  invalid_parameter,
};

const char* errc_name(errc code);

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

// Malformed input file; exit code 2 in the CLI. Row numbers are 1-based and
// count physical lines including the header.
class parse_error : public error {
 public:
  parse_error(const std::string& what, std::size_t row = 0)
      : error(errc::malformed_input, what), row_(row) {}

  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

// Well-formed input that violates a domain rule; exit code 3 in the CLI.
class validation_error : public error {
 public:
  using error::error;
};

// Numerical failure (degenerate objective, weight-gap violation, ...);
// exit code 4 in the CLI.
class numerical_error : public error {
 public:
  using error::error;
};

}  // namespace ct
