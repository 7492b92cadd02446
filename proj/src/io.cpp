#include "ctchoice/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace ct {

file_format format_from_path(const std::filesystem::path& path) {
  return path.extension() == ".json" ? file_format::json : file_format::csv;
}

std::string format_number(double x, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, x);
  return buf;
}

namespace {

std::string shortest_double(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, end);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

double parse_probability(const std::string& field, std::size_t row) {
  double p = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, p);
  if (ec != std::errc() || ptr != last) {
    throw parse_error("row " + std::to_string(row) + ": probability '" +
                          field + "' is not a number",
                      row);
  }
  if (!(p > 0.0) || p > 1.0) {
    throw parse_error("row " + std::to_string(row) + ": probability " +
                          field + " outside (0, 1]",
                      row);
  }
  return p;
}

money parse_amount(const std::string& field, std::size_t row) {
  money m;
  try {
    m = money::parse(field);
  } catch (const parse_error& e) {
    throw parse_error("row " + std::to_string(row) + ": " + e.what(), row);
  }
  if (m.is_zero()) {
    throw parse_error("row " + std::to_string(row) +
                          ": outcome must be nonzero",
                      row);
  }
  return m;
}

void append_problem_row(problem_table& table, problem_file_row row,
                        std::size_t row_number,
                        std::map<std::string, std::size_t>& first_row_of_id) {
  auto [it, inserted] = first_row_of_id.emplace(row.id, row_number);
  if (!inserted) {
    throw validation_error(errc::duplicate_id,
                           "duplicate problem id '" + row.id + "' (rows " +
                               std::to_string(it->second) + " and " +
                               std::to_string(row_number) + ")");
  }
  try {
    table.problems.push_back(canonicalize_problem(row.a, row.b, row.id));
  } catch (const validation_error& e) {
    throw validation_error(e.code(), "row " + std::to_string(row_number) +
                                         ": " + e.what());
  }
  table.rows.push_back(std::move(row));
}

problem_table read_problems_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw parse_error("problems file is empty", 1);
  }
  auto header = split_csv_line(strip_cr(line));
  const std::vector<std::string> expected = {"id", "x_a", "p_a", "x_b", "p_b"};
  if (header != expected) {
    throw parse_error("problems header must be id,x_a,p_a,x_b,p_b", 1);
  }

  problem_table table;
  std::map<std::string, std::size_t> first_row_of_id;
  std::size_t row_number = 1;
  while (std::getline(in, line)) {
    ++row_number;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != 5) {
      throw parse_error("row " + std::to_string(row_number) +
                            ": expected 5 fields, got " +
                            std::to_string(fields.size()),
                        row_number);
    }
    problem_file_row row;
    row.id = fields[0];
    if (row.id.empty()) {
      throw parse_error("row " + std::to_string(row_number) + ": empty id",
                        row_number);
    }
    row.a.outcome = parse_amount(fields[1], row_number);
    row.a.probability = parse_probability(fields[2], row_number);
    row.b.outcome = parse_amount(fields[3], row_number);
    row.b.probability = parse_probability(fields[4], row_number);
    append_problem_row(table, std::move(row), row_number, first_row_of_id);
  }
  if (table.rows.empty()) {
    throw parse_error("problems file contains no rows", row_number);
  }
  return table;
}

std::string json_field_as_text(const nlohmann::json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) {
    return std::to_string(value.get<long long>());
  }
  if (value.is_number_float()) return shortest_double(value.get<double>());
  return value.dump();
}

problem_table read_problems_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_array() || doc.empty()) {
    throw parse_error("problems JSON must be a nonempty array");
  }
  problem_table table;
  std::map<std::string, std::size_t> first_row_of_id;
  std::size_t row_number = 0;
  for (const auto& entry : doc) {
    ++row_number;
    if (!entry.is_object()) {
      throw parse_error("entry " + std::to_string(row_number) +
                            " is not an object",
                        row_number);
    }
    for (const char* key : {"id", "x_a", "p_a", "x_b", "p_b"}) {
      if (!entry.contains(key)) {
        throw parse_error("entry " + std::to_string(row_number) +
                              " is missing '" + key + "'",
                          row_number);
      }
    }
    problem_file_row row;
    row.id = entry["id"].is_string() ? entry["id"].get<std::string>()
                                     : json_field_as_text(entry["id"]);
    row.a.outcome = parse_amount(json_field_as_text(entry["x_a"]), row_number);
    row.a.probability =
        parse_probability(json_field_as_text(entry["p_a"]), row_number);
    row.b.outcome = parse_amount(json_field_as_text(entry["x_b"]), row_number);
    row.b.probability =
        parse_probability(json_field_as_text(entry["p_b"]), row_number);
    append_problem_row(table, std::move(row), row_number, first_row_of_id);
  }
  return table;
}

std::optional<gender> parse_gender(std::string token, std::size_t row) {
  std::transform(token.begin(), token.end(), token.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (token.empty() || token == "unknown" || token == "na") return std::nullopt;
  if (token == "m" || token == "male") return gender::male;
  if (token == "f" || token == "female") return gender::female;
  if (token == "other" || token == "o") return gender::other;
  throw validation_error(errc::unknown_attribute,
                         "row " + std::to_string(row) +
                             ": unknown gender token '" + token + "'");
}

struct response_row {
  std::string respondent_id;
  std::string problem_id;
  char label = 'A';
  std::optional<gender> gender_id;
  bool has_gender_field = false;
  std::optional<money> hourly_pay;
  bool has_pay_field = false;
  std::size_t row_number = 0;
};

choice_dataset assemble_dataset(const std::vector<response_row>& rows,
                                const problem_table& problems) {
  choice_dataset dataset;
  dataset.problems = problems.problems;

  std::map<std::string, std::size_t> respondent_index;
  std::map<std::pair<std::string, std::string>, std::size_t> seen_cells;

  for (const auto& row : rows) {
    const binary_problem* problem = problems.find(row.problem_id);
    if (!problem) {
      throw validation_error(errc::unknown_problem_id,
                             "row " + std::to_string(row.row_number) +
                                 ": unknown problem id '" + row.problem_id +
                                 "'");
    }
    auto cell_key = std::make_pair(row.respondent_id, row.problem_id);
    auto [cell_it, fresh] = seen_cells.emplace(cell_key, row.row_number);
    if (!fresh) {
      throw validation_error(
          errc::duplicate_cell,
          "respondent '" + row.respondent_id + "' answered problem '" +
              row.problem_id + "' twice (rows " +
              std::to_string(cell_it->second) + " and " +
              std::to_string(row.row_number) + ")");
    }

    auto [it, inserted] =
        respondent_index.emplace(row.respondent_id, dataset.respondents.size());
    if (inserted) {
      respondent_record record;
      record.respondent_id = row.respondent_id;
      dataset.respondents.push_back(std::move(record));
    }
    respondent_record& record = dataset.respondents[it->second];

    prospect_role role = problems.role_of_label(row.problem_id, row.label);
    record.choices[row.problem_id] = is_bold_choice(*problem, role)
                                         ? choice::bold_prospect
                                         : choice::default_prospect;

    if (row.has_gender_field && row.gender_id) {
      if (record.gender_id && record.gender_id != row.gender_id) {
        throw validation_error(errc::inconsistent_attribute,
                               "respondent '" + row.respondent_id +
                                   "' has conflicting gender values");
      }
      record.gender_id = row.gender_id;
    }
    if (row.has_pay_field && row.hourly_pay) {
      if (record.hourly_pay && record.hourly_pay != row.hourly_pay) {
        throw validation_error(errc::inconsistent_attribute,
                               "respondent '" + row.respondent_id +
                                   "' has conflicting hourly pay values");
      }
      record.hourly_pay = row.hourly_pay;
    }
  }
  dataset.validate();
  return dataset;
}

char parse_choice_label(const std::string& token, std::size_t row) {
  if (token == "A" || token == "a") return 'A';
  if (token == "B" || token == "b") return 'B';
  throw parse_error("row " + std::to_string(row) + ": choice must be A or B",
                    row);
}

std::optional<money> parse_pay(const std::string& token, std::size_t row) {
  if (token.empty()) return std::nullopt;
  money pay;
  try {
    pay = money::parse(token);
  } catch (const parse_error& e) {
    throw parse_error("row " + std::to_string(row) + ": " + e.what(), row);
  }
  if (pay.is_negative()) {
    throw validation_error(errc::invalid_parameter,
                           "row " + std::to_string(row) +
                               ": hourly pay must be nonnegative");
  }
  return pay;
}

choice_dataset read_responses_csv(std::istream& in,
                                  const problem_table& problems) {
  std::string line;
  if (!std::getline(in, line)) {
    throw parse_error("responses file is empty", 1);
  }
  auto header = split_csv_line(strip_cr(line));
  const std::vector<std::string> full = {"respondent_id", "problem_id",
                                         "choice", "gender", "hourly_pay"};
  if (header.size() < 3 || header.size() > 5 ||
      !std::equal(header.begin(), header.end(), full.begin())) {
    throw parse_error(
        "responses header must be respondent_id,problem_id,choice"
        "[,gender[,hourly_pay]]",
        1);
  }

  std::vector<response_row> rows;
  std::size_t row_number = 1;
  while (std::getline(in, line)) {
    ++row_number;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw parse_error("row " + std::to_string(row_number) + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()),
                        row_number);
    }
    response_row row;
    row.row_number = row_number;
    row.respondent_id = fields[0];
    row.problem_id = fields[1];
    if (row.respondent_id.empty() || row.problem_id.empty()) {
      throw parse_error("row " + std::to_string(row_number) + ": empty id",
                        row_number);
    }
    row.label = parse_choice_label(fields[2], row_number);
    if (fields.size() >= 4) {
      row.has_gender_field = true;
      row.gender_id = parse_gender(fields[3], row_number);
    }
    if (fields.size() >= 5) {
      row.has_pay_field = true;
      row.hourly_pay = parse_pay(fields[4], row_number);
    }
    rows.push_back(std::move(row));
  }
  return assemble_dataset(rows, problems);
}

choice_dataset read_responses_json(std::istream& in,
                                   const problem_table& problems) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_array()) {
    throw parse_error("responses JSON must be an array");
  }
  std::vector<response_row> rows;
  std::size_t row_number = 0;
  for (const auto& entry : doc) {
    ++row_number;
    for (const char* key : {"respondent_id", "problem_id", "choice"}) {
      if (!entry.is_object() || !entry.contains(key)) {
        throw parse_error("entry " + std::to_string(row_number) +
                              " is missing '" + key + "'",
                          row_number);
      }
    }
    response_row row;
    row.row_number = row_number;
    row.respondent_id = json_field_as_text(entry["respondent_id"]);
    row.problem_id = json_field_as_text(entry["problem_id"]);
    row.label =
        parse_choice_label(json_field_as_text(entry["choice"]), row_number);
    if (entry.contains("gender") && !entry["gender"].is_null()) {
      row.has_gender_field = true;
      row.gender_id =
          parse_gender(json_field_as_text(entry["gender"]), row_number);
    }
    if (entry.contains("hourly_pay") && !entry["hourly_pay"].is_null()) {
      row.has_pay_field = true;
      row.hourly_pay =
          parse_pay(json_field_as_text(entry["hourly_pay"]), row_number);
    }
    rows.push_back(std::move(row));
  }
  return assemble_dataset(rows, problems);
}

}  // namespace

const binary_problem* problem_table::find(const std::string& id) const {
  for (const auto& p : problems) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

prospect_role problem_table::role_of_label(const std::string& problem_id,
                                           char label) const {
  for (const auto& row : rows) {
    if (row.id != problem_id) continue;
    bool a_is_p0 = row.a.probability > row.b.probability;
    bool ask_a = label == 'A' || label == 'a';
    return (ask_a == a_is_p0) ? prospect_role::p0 : prospect_role::p1;
  }
  throw validation_error(errc::unknown_problem_id,
                         "unknown problem id '" + problem_id + "'");
}

problem_table load_problems(const std::filesystem::path& path,
                            std::optional<file_format> format) {
  std::ifstream in(path);
  if (!in) {
    throw parse_error("cannot open '" + path.string() + "'");
  }
  return read_problems(in, format.value_or(format_from_path(path)));
}

problem_table read_problems(std::istream& in, file_format format) {
  return format == file_format::csv ? read_problems_csv(in)
                                    : read_problems_json(in);
}

void write_problems(std::ostream& out, const problem_table& table,
                    file_format format) {
  if (format == file_format::csv) {
    out << "id,x_a,p_a,x_b,p_b\n";
    for (const auto& row : table.rows) {
      out << csv_escape(row.id) << ',' << row.a.outcome.str() << ','
          << shortest_double(row.a.probability) << ',' << row.b.outcome.str()
          << ',' << shortest_double(row.b.probability) << '\n';
    }
    return;
  }
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json entry;
    entry["id"] = row.id;
    entry["x_a"] = row.a.outcome.str();
    entry["p_a"] = row.a.probability;
    entry["x_b"] = row.b.outcome.str();
    entry["p_b"] = row.b.probability;
    doc.push_back(std::move(entry));
  }
  out << doc.dump(2) << '\n';
}

choice_dataset load_responses(const std::filesystem::path& path,
                              const problem_table& problems,
                              std::optional<file_format> format) {
  std::ifstream in(path);
  if (!in) {
    throw parse_error("cannot open '" + path.string() + "'");
  }
  return read_responses(in, problems, format.value_or(format_from_path(path)));
}

choice_dataset read_responses(std::istream& in, const problem_table& problems,
                              file_format format) {
  return format == file_format::csv ? read_responses_csv(in, problems)
                                    : read_responses_json(in, problems);
}

table_cell table_cell::of(std::string v) {
  table_cell c;
  c.k = kind::text;
  c.text = std::move(v);
  return c;
}

table_cell table_cell::of(double v) {
  table_cell c;
  c.k = kind::number;
  c.number = v;
  return c;
}

table_cell table_cell::of(long long v) {
  table_cell c;
  c.k = kind::integer;
  c.integer = v;
  return c;
}

table_cell table_cell::none() { return table_cell{}; }

void write_report(std::ostream& out, const report_table& report,
                  file_format format, int precision) {
  if (format == file_format::csv) {
    for (const auto& [key, value] : report.meta) {
      out << "# " << key << ": " << value << '\n';
    }
    for (std::size_t i = 0; i < report.columns.size(); ++i) {
      if (i) out << ',';
      out << csv_escape(report.columns[i]);
    }
    out << '\n';
    for (const auto& row : report.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        switch (row[i].k) {
          case table_cell::kind::text:
            out << csv_escape(row[i].text);
            break;
          case table_cell::kind::number:
            out << format_number(row[i].number, precision);
            break;
          case table_cell::kind::integer:
            out << row[i].integer;
            break;
          case table_cell::kind::empty:
            break;
        }
      }
      out << '\n';
    }
    return;
  }

  nlohmann::ordered_json doc;
  nlohmann::ordered_json meta;
  for (const auto& [key, value] : report.meta) meta[key] = value;
  doc["meta"] = std::move(meta);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json entry;
    for (std::size_t i = 0; i < row.size() && i < report.columns.size(); ++i) {
      switch (row[i].k) {
        case table_cell::kind::text:
          entry[report.columns[i]] = row[i].text;
          break;
        case table_cell::kind::number:
          entry[report.columns[i]] =
              std::stod(format_number(row[i].number, precision));
          break;
        case table_cell::kind::integer:
          entry[report.columns[i]] = row[i].integer;
          break;
        case table_cell::kind::empty:
          entry[report.columns[i]] = nullptr;
          break;
      }
    }
    rows.push_back(std::move(entry));
  }
  doc["rows"] = std::move(rows);
  out << doc.dump(2) << '\n';
}

}  // namespace ct
