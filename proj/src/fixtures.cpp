#include "ctchoice/fixtures.hpp"

#include <stdexcept>

namespace ct {

namespace {

binary_problem make_problem(std::string id, std::int64_t x_a, double p_a,
                            std::int64_t x_b, double p_b) {
  return canonicalize_problem(prospect(money::from_units(x_a), p_a),
                              prospect(money::from_units(x_b), p_b),
                              std::move(id));
}

fixture_problem make_fixture(binary_problem problem, double p_bold,
                             double published_ci, std::string citation,
                             std::string note = {}) {
  fixture_problem f;
  f.problem = std::move(problem);
  f.p_bold = p_bold;
  f.published_ci_x100 = published_ci;
  f.citation = std::move(citation);
  f.note = std::move(note);
  return f;
}

const char* misprint_note =
    "published CI*100 of 6.64 disagrees with direct evaluation (~6.43) and "
    "with the published pair difference (3.36 + 3.08 = 6.44); treated as a "
    "misprint";

fixture_set build_fixtures() {
  fixture_set fx;

  auto pair = [](std::string label, fixture_problem gain, fixture_problem loss,
                 double delta) {
    fixture_pair p;
    p.label = std::move(label);
    p.gain = std::move(gain);
    p.loss = std::move(loss);
    p.published_delta_ci_x100 = delta;
    return p;
  };

  fx.table5.push_back(pair(
      "certainty",
      make_fixture(make_problem("t5-1g", 3000, 1.00, 4000, 0.80), 0.32, 6.64,
                   "source study, Table 5, illustration 1", misprint_note),
      make_fixture(make_problem("t5-1l", -4000, 0.80, -3000, 1.00), 0.40, 3.08,
                   "source study, Table 5, illustration 1"),
      3.36));
  fx.table5.push_back(pair(
      "scaled-probabilities",
      make_fixture(make_problem("t5-2g", 3000, 0.25, 4000, 0.20), 0.57, 2.80,
                   "source study, Table 5, illustration 2"),
      make_fixture(make_problem("t5-2l", -4000, 0.20, -3000, 0.25), 0.68, 1.33,
                   "source study, Table 5, illustration 2"),
      1.47));
  fx.table5.push_back(pair(
      "half-probability",
      make_fixture(make_problem("t5-3g", 3000, 0.90, 6000, 0.45), 0.09, 7.61,
                   "source study, Table 5, illustration 3"),
      make_fixture(make_problem("t5-3l", -6000, 0.45, -3000, 0.90), 0.36, 3.01,
                   "source study, Table 5, illustration 3"),
      4.59));
  fx.table5.push_back(pair(
      "sure-small",
      make_fixture(make_problem("t5-4g", 240, 1.00, 1000, 0.25), 0.23, 6.59,
                   "source study, Table 5, illustration 4"),
      make_fixture(make_problem("t5-4l", -1000, 0.25, -240, 1.00), 0.38, 2.74,
                   "source study, Table 5, illustration 4"),
      3.84));
  fx.table5.push_back(pair(
      "low-probabilities",
      make_fixture(make_problem("t5-5g", 3000, 0.02, 6000, 0.01), 0.65, 1.57,
                   "source study, Table 5, illustration 5"),
      make_fixture(make_problem("t5-5l", -6000, 0.01, -3000, 0.02), 0.55, 1.15,
                   "source study, Table 5, illustration 5"),
      0.41));

  fx.table4.push_back(
      make_fixture(make_problem("t4-certainty", 3000, 1.00, 4000, 0.80), 0.32,
                   6.64, "source study, Table 4, row 1", misprint_note));
  fx.table4.push_back(
      make_fixture(make_problem("t4-allais", 3000, 0.25, 4000, 0.20), 0.57,
                   2.80, "source study, Table 4, row 1"));
  fx.table4.push_back(
      make_fixture(make_problem("t4-reflection", -4000, 0.80, -3000, 1.00),
                   0.40, 3.08, "source study, Table 4, row 2"));
  fx.table4.push_back(
      make_fixture(make_problem("t4-low-prob", 3000, 0.02, 6000, 0.01), 0.65,
                   1.57, "source study, Table 4, row 3"));

  fx.params.push_back({"params_gains",
                       param_set::four(1.1936, 1.2285, 0.7336, 2.6245),
                       "source study, Table 1, gains row"});
  fx.params.push_back({"params_losses",
                       param_set::four(1.3349, 1.4337, 0.6505, 3.5565),
                       "source study, Table 1, losses row"});
  fx.params.push_back({"params_all",
                       param_set::four(1.5392, 1.4806, 0.7633, 2.9011),
                       "source study, Table 2, pooled row"});
  fx.params.push_back({"params_kt",
                       param_set::four(3.0, 0.6145, 0.5599, 2.7184),
                       "source study, Table 2, reanalysis row"});

  auto corr = [](std::string name, double r, int n, double lo, double hi,
                 int published_n, std::string citation, std::string note) {
    fixture_correlation c;
    c.name = std::move(name);
    c.report = correlation_report{r, n, lo, hi, 0.95};
    c.published_n = published_n;
    c.citation = std::move(citation);
    c.note = std::move(note);
    return c;
  };
  fx.correlations.push_back(corr("table1_gains", -0.919, 22, -0.966, -0.813,
                                 22, "source study, Table 1, gains row", ""));
  fx.correlations.push_back(corr("table1_losses", -0.931, 22, -0.971, -0.839,
                                 22, "source study, Table 1, losses row", ""));
  fx.correlations.push_back(corr("table2_all", -0.877, 44, -0.929, -0.780, 44,
                                 "source study, Table 2, pooled row", ""));
  fx.correlations.push_back(
      corr("table2_kt", -0.989, 11, -0.997, -0.956, 10,
           "source study, Table 2, reanalysis row",
           "printed as n=10, but the accompanying text counts eleven "
           "problems and the printed interval matches n=11"));

  fx.primer.push_back(make_problem("intro-gain", 200, 0.80, 300, 0.60));
  fx.primer.push_back(make_problem("intro-loss", -300, 0.60, -200, 0.80));

  return fx;
}

}  // namespace

const fixture_params& fixture_set::params_named(std::string_view name) const {
  for (const auto& p : params) {
    if (p.name == name) return p;
  }
  throw validation_error(errc::invalid_parameter,
                         "unknown parameter fixture '" + std::string(name) +
                             "'");
}

const fixture_correlation& fixture_set::correlation_named(
    std::string_view name) const {
  for (const auto& c : correlations) {
    if (c.name == name) return c;
  }
  throw validation_error(errc::invalid_parameter,
                         "unknown correlation fixture '" + std::string(name) +
                             "'");
}

const fixture_set& builtin_fixtures() {
  static const fixture_set fx = build_fixtures();
  return fx;
}

std::vector<binary_problem> fixture_problems(std::string_view name) {
  const auto& fx = builtin_fixtures();
  std::vector<binary_problem> out;
  if (name == "table5") {
    for (const auto& pair : fx.table5) {
      out.push_back(pair.gain.problem);
      out.push_back(pair.loss.problem);
    }
  } else if (name == "table4") {
    for (const auto& f : fx.table4) out.push_back(f.problem);
  } else if (name == "primer") {
    out = fx.primer;
  } else {
    throw validation_error(errc::invalid_parameter,
                           "unknown problem fixture '" + std::string(name) +
                               "'");
  }
  return out;
}

}  // namespace ct
