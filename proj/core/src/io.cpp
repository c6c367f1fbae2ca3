#include "locrad/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "locrad/error.hpp"

namespace locrad {
namespace {

using nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::optional<double> try_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

double number(std::string_view s, std::string_view what) {
  const auto v = try_number(s);
  if (!v) throw ConfigurationError("expected a number for " + std::string(what) + ", got '" + std::string(s) + "'");
  return *v;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    const auto stop = end == std::string_view::npos ? text.size() : end;
    out.push_back(text.substr(start, stop - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

ordered_json named(const NamedValues& values) {
  ordered_json out = ordered_json::object();
  for (const auto& [k, v] : values) out[k] = v;
  return out;
}

ordered_json bound_json(const BoundReport& r) {
  return {{"theorem_id", r.theorem_id},   {"inputs", named(r.inputs)},
          {"constants", named(r.constants)}, {"bound_value", r.bound_value},
          {"confidence", r.confidence},   {"confidence_k", r.confidence_k},
          {"formula_text", r.formula_text}};
}

ordered_json fixed_point_json(const FixedPointResult& r) {
  return {{"r_star", r.r_star}, {"iterations", r.iterations}, {"epsilon", r.epsilon},
          {"converged", r.converged}, {"trace", r.trace}};
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

// Malformed input files surface as configuration errors.
template <class Fn>
auto from_input(const std::string& what, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigurationError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigurationError(what + ": " + e.what());
  }
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigurationError("cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigurationError("cannot write '" + path.string() + "'");
  out << content;
}

std::optional<SampleSet> InstanceFile::sample() const {
  if (sample_ids.empty()) return std::nullopt;
  std::vector<std::size_t> idx;
  idx.reserve(sample_ids.size());
  for (const auto& id : sample_ids) idx.push_back(dist.index_of(id));
  return SampleSet(std::move(idx), dist.size());
}

Instance InstanceFile::instance(std::string name) const {
  return {std::move(name), dist, cls, targets};
}

InstanceFile parse_instance(std::string_view text) {
  std::optional<std::pair<double, double>> range;
  std::vector<std::string> ids;
  std::vector<double> masses;
  std::vector<int> labels;
  std::vector<std::string> names;
  std::vector<std::vector<double>> rows;
  std::vector<double> targets;
  std::vector<std::string> sample_ids;
  std::size_t line_no = 0;
  for (std::string_view raw : lines_of(text)) {
    ++line_no;
    const auto hash = raw.find('#');
    const auto tokens = split_ws(trim(raw.substr(0, hash)));
    if (tokens.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    const std::string_view key = tokens[0];
    if (key == "range") {
      if (tokens.size() != 3) throw ConfigurationError(where + ": range takes two values");
      range = {number(tokens[1], where), number(tokens[2], where)};
    } else if (key == "point") {
      if (tokens.size() != 3 && tokens.size() != 4)
        throw ConfigurationError(where + ": point takes an id, a mass and an optional label");
      ids.emplace_back(tokens[1]);
      masses.push_back(number(tokens[2], where));
      if (tokens.size() == 4) labels.push_back(static_cast<int>(number(tokens[3], where)));
    } else if (key == "function") {
      if (tokens.size() < 2) throw ConfigurationError(where + ": function needs a name");
      names.emplace_back(tokens[1]);
      std::vector<double> row;
      for (std::size_t i = 2; i < tokens.size(); ++i) row.push_back(number(tokens[i], where));
      rows.push_back(std::move(row));
    } else if (key == "target") {
      for (std::size_t i = 1; i < tokens.size(); ++i) targets.push_back(number(tokens[i], where));
    } else if (key == "sample") {
      for (std::size_t i = 1; i < tokens.size(); ++i) sample_ids.emplace_back(tokens[i]);
    } else {
      throw ConfigurationError(where + ": unknown directive '" + std::string(key) + "'");
    }
  }
  if (ids.empty()) throw ConfigurationError("instance has no points");
  if (rows.empty()) throw ConfigurationError("instance has no functions");
  if (!labels.empty() && labels.size() != ids.size())
    throw ConfigurationError("either every point or no point carries a label");
  for (const auto& row : rows)
    if (row.size() != ids.size())
      throw ConfigurationError("every function needs one value per point");
  if (!targets.empty() && targets.size() != ids.size())
    throw ConfigurationError("target needs one value per point");
  if (!range) {
    double lo = rows[0][0], hi = rows[0][0];
    for (const auto& row : rows)
      for (double v : row) lo = std::min(lo, v), hi = std::max(hi, v);
    range = {lo, hi};
  }
  std::optional<std::vector<int>> lab;
  if (!labels.empty()) lab = labels;
  return from_input("instance", [&] {
    InstanceFile out{DiscreteDistribution(ids, masses, lab),
                     TabulatedClass::from_rows(rows, range->first, range->second, names),
                     std::move(targets), std::move(sample_ids)};
    for (const auto& id : out.sample_ids) out.dist.index_of(id);
    return out;
  });
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  bool header = true;
  for (std::string_view raw : lines_of(text)) {
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      cells.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (header) {
      table.header = std::move(cells);
      header = false;
    } else {
      if (cells.size() != table.header.size())
        throw ConfigurationError("CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                                 std::to_string(table.header.size()));
      table.rows.push_back(std::move(cells));
    }
  }
  if (header) throw ConfigurationError("CSV input is empty (a header row is required)");
  return table;
}

LabeledSample labeled_sample_from_csv(const CsvTable& table) {
  if (table.header.size() != 2) throw ConfigurationError("labeled sample CSV needs columns x,label");
  std::vector<std::string> xs;
  std::vector<double> features;
  std::vector<int> ys;
  bool numeric = true;
  for (const auto& row : table.rows) {
    xs.push_back(row[0]);
    const auto v = try_number(row[0]);
    if (v) features.push_back(*v);
    else numeric = false;
    ys.push_back(static_cast<int>(number(row[1], "label")));
  }
  return from_input("labeled sample", [&] {
    if (numeric && !features.empty()) return LabeledSample::from_features(std::move(features), std::move(ys));
    return LabeledSample(std::move(xs), std::move(ys));
  });
}

std::vector<double> spectrum_from_csv(const CsvTable& table) {
  if (table.header.size() != 1) throw ConfigurationError("spectrum CSV needs one column");
  std::vector<double> out;
  for (const auto& row : table.rows) out.push_back(number(row[0], "eigenvalue"));
  return out;
}

GramMatrix gram_from_csv(const CsvTable& table) {
  const std::size_t n = table.header.size();
  if (table.rows.size() != n) throw ConfigurationError("Gram CSV must have n rows of n entries");
  std::vector<double> entries;
  entries.reserve(n * n);
  for (const auto& row : table.rows)
    for (const auto& cell : row) entries.push_back(number(cell, "Gram entry"));
  return from_input("Gram CSV", [&] { return GramMatrix(n, std::move(entries)); });
}

std::pair<std::vector<double>, std::vector<double>> curve_from_csv(const CsvTable& table) {
  if (table.header.size() != 2) throw ConfigurationError("curve CSV needs columns r,psi");
  std::vector<double> grid, values;
  for (const auto& row : table.rows) {
    grid.push_back(number(row[0], "r"));
    values.push_back(number(row[1], "psi"));
  }
  return {std::move(grid), std::move(values)};
}

std::vector<std::vector<double>> features_from_csv(const CsvTable& table) {
  std::vector<std::vector<double>> out;
  for (const auto& row : table.rows) {
    std::vector<double> v;
    for (const auto& cell : row) v.push_back(number(cell, "feature"));
    out.push_back(std::move(v));
  }
  return out;
}

std::map<std::string, std::string> parse_config(std::string_view text) {
  std::map<std::string, std::string> out;
  std::size_t line_no = 0;
  for (std::string_view raw : lines_of(text)) {
    ++line_no;
    const auto line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigurationError("config line " + std::to_string(line_no) + ": expected key = value");
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigurationError("config line " + std::to_string(line_no) + ": empty key");
    out[std::string(key)] = std::string(trim(line.substr(eq + 1)));
  }
  return out;
}

std::string to_json(const BoundReport& report) { return dump(bound_json(report)); }

std::string to_json(const TrialReport& r, bool include_margins) {
  ordered_json j = {{"claim_id", r.claim_id},
                    {"trials", r.trials},
                    {"violations", r.violations},
                    {"violation_rate", r.violation_rate},
                    {"claimed_rate", r.claimed_rate},
                    {"slack_limit", r.slack_limit},
                    {"within_slack", r.within_slack},
                    {"skipped", r.skipped},
                    {"precondition_met", r.precondition_met},
                    {"mean_margin", r.mean_margin},
                    {"min_margin", r.min_margin},
                    {"max_margin", r.max_margin},
                    {"details", named(r.details)},
                    {"notes", r.notes}};
  if (include_margins) j["margins"] = r.margins;
  return dump(j);
}

std::string to_json(const FixedPointResult& result) { return dump(fixed_point_json(result)); }

std::string to_json(const RademacherEstimate& e) {
  return dump({{"value", e.value},
               {"std_error", e.std_error},
               {"method", to_string(e.method)},
               {"num_sigma_draws", e.num_sigma_draws},
               {"num_data_draws", e.num_data_draws},
               {"seed", e.seed}});
}

std::string to_json(const KernelPipelineResult& r) {
  ordered_json j = {{"n", r.gram.n()},
                    {"trace", r.trace},
                    {"envelope", r.envelope},
                    {"eigenvalues", r.spectrum.eigenvalues},
                    {"cor67", {{"r_bound", r.cor67.r_bound}, {"h", r.cor67.h}}},
                    {"fixed_point", fixed_point_json(r.fixed_point)},
                    {"excess_risk", bound_json(r.excess_risk)}};
  if (r.lemma66_at_r) j["lemma66"] = *r.lemma66_at_r;
  return dump(j);
}

std::string to_json(const Cor62Result& r) {
  return dump({{"report", bound_json(r.report)},
               {"fixed_point", fixed_point_json(r.fixed_point)},
               {"loss_complexity_factor", r.loss_complexity_factor}});
}

std::string to_json(const Thm63Result& r, double radius, double x) {
  return dump({{"r", radius},
               {"x", x},
               {"value", r.value},
               {"complexity", r.complexity},
               {"std_error", r.std_error},
               {"best_alpha", r.best_alpha},
               {"method", to_string(r.method)},
               {"num_sigma", r.num_sigma}});
}

std::string margins_csv(const TrialReport& report) {
  std::string out = "trial,margin\n";
  for (std::size_t t = 0; t < report.margins.size(); ++t)
    out += std::to_string(t) + "," + fmt(report.margins[t]) + "\n";
  return out;
}

std::string curve_csv(const std::vector<double>& grid, const std::vector<double>& values) {
  if (grid.size() != values.size()) throw DimensionError("grid and values differ in length");
  std::string out = "r,psi\n";
  for (std::size_t i = 0; i < grid.size(); ++i) out += fmt(grid[i]) + "," + fmt(values[i]) + "\n";
  return out;
}

std::string trace_csv(const FixedPointResult& result) {
  std::string out = "iteration,r\n";
  for (std::size_t i = 0; i < result.trace.size(); ++i)
    out += std::to_string(i) + "," + fmt(result.trace[i]) + "\n";
  return out;
}

std::string named_values_csv(const NamedValues& values) {
  std::string out = "name,value\n";
  for (const auto& [k, v] : values) out += k + "," + fmt(v) + "\n";
  return out;
}

}  // namespace locrad
