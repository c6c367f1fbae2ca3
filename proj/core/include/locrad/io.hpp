#pragma once

// Text formats: instance files, CSV inputs, flat key=value configs, and the
// JSON/CSV documents emitted by the command-line tool.
//
// Instance file, one directive per line, '#' starts a comment:
//   range <lo> <hi>
//   point <id> <mass> [label]
//   function <name> <v_1> ... <v_N>     (one value per point, in point order)
//   target <y_1> ... <y_N>              (optional, regression targets)
//   sample <id> <id> ...                (optional, may repeat; appends)

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "locrad/bounds.hpp"
#include "locrad/classification.hpp"
#include "locrad/empirical.hpp"
#include "locrad/harness.hpp"
#include "locrad/kernel.hpp"
#include "locrad/rademacher.hpp"
#include "locrad/subroot.hpp"

namespace locrad {

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

struct InstanceFile {
  DiscreteDistribution dist;
  TabulatedClass cls;
  std::vector<double> targets;
  std::vector<std::string> sample_ids;

  /// The listed sample, if any.
  std::optional<SampleSet> sample() const;
  Instance instance(std::string name = "file") const;
};

InstanceFile parse_instance(std::string_view text);

/// Rows of a CSV with a header row; cells are trimmed.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable parse_csv(std::string_view text);

/// Columns (x, label): numeric x become 1-D features, anything else ids.
LabeledSample labeled_sample_from_csv(const CsvTable& table);
/// Single column of eigenvalues.
std::vector<double> spectrum_from_csv(const CsvTable& table);
/// n rows of n entries (already divided by n).
GramMatrix gram_from_csv(const CsvTable& table);
/// Columns (r, psi).
std::pair<std::vector<double>, std::vector<double>> curve_from_csv(const CsvTable& table);
/// Every column numeric; one feature vector per row.
std::vector<std::vector<double>> features_from_csv(const CsvTable& table);

/// Flat `key = value` lines; '#' comments and blank lines ignored.
std::map<std::string, std::string> parse_config(std::string_view text);

std::string to_json(const BoundReport& report);
std::string to_json(const TrialReport& report, bool include_margins = false);
std::string to_json(const FixedPointResult& result);
std::string to_json(const RademacherEstimate& estimate);
std::string to_json(const KernelPipelineResult& result);
std::string to_json(const Cor62Result& result);
std::string to_json(const Thm63Result& result, double r, double x);

std::string margins_csv(const TrialReport& report);
std::string curve_csv(const std::vector<double>& grid, const std::vector<double>& values);
std::string trace_csv(const FixedPointResult& result);
std::string named_values_csv(const NamedValues& values);

}  // namespace locrad
