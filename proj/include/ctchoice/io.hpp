#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ctchoice/core.hpp"

namespace ct {

enum class file_format { csv, json };

// Formats guessed from the extension; anything unknown falls back to csv.
file_format format_from_path(const std::filesystem::path& path);

// Fixed-precision decimal rendering ("%.4f" style), locale-independent.
std::string format_number(double x, int precision);

// A problem file row before canonicalization. Prospects are presented as
// labels A and B; default/bold is always derived from the canonical form, so
// a file cannot contradict the role assignment.
struct problem_file_row {
  std::string id;
  prospect a;
  prospect b;
};

struct problem_table {
  std::vector<problem_file_row> rows;       // presentation order, as loaded
  std::vector<binary_problem> problems;     // canonical, same order

  const binary_problem* find(const std::string& id) const;

  // Maps a presented label ('A' or 'B') to the canonical role it landed on.
  prospect_role role_of_label(const std::string& problem_id, char label) const;
};

// Problems file. CSV header: id,x_a,p_a,x_b,p_b. JSON: array of objects with
// the same keys. Malformed rows throw parse_error with the row number;
// canonicalization failures and duplicate ids throw validation_error.
problem_table load_problems(const std::filesystem::path& path,
                            std::optional<file_format> format = std::nullopt);
problem_table read_problems(std::istream& in, file_format format);
void write_problems(std::ostream& out, const problem_table& table,
                    file_format format);

// Responses file. CSV header: respondent_id,problem_id,choice,gender,hourly_pay
// (the two attribute columns are optional). choice is the presented label A/B
// and is mapped to default/bold through the problem's canonical roles.
choice_dataset load_responses(const std::filesystem::path& path,
                              const problem_table& problems,
                              std::optional<file_format> format = std::nullopt);
choice_dataset read_responses(std::istream& in, const problem_table& problems,
                              file_format format);

// Tabular report with a reproducibility preamble. CSV renders meta as
// leading "# key: value" lines; JSON as a "meta" object next to "rows".
struct table_cell {
  enum class kind { text, number, integer, empty } k = kind::empty;
  std::string text;
  double number = 0.0;
  long long integer = 0;

  static table_cell of(std::string v);
  static table_cell of(double v);
  static table_cell of(long long v);
  static table_cell of(int v) { return of(static_cast<long long>(v)); }
  static table_cell none();
};

struct report_table {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<table_cell>> rows;
};

void write_report(std::ostream& out, const report_table& report,
                  file_format format, int precision);

}  // namespace ct
