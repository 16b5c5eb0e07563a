#pragma once

// Experiment reports: a canonical JSON body plus flat tables (CSV) and
// two-column series (PLOTDATA).

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace depthlab::report {

using Json = nlohmann::json;

/// v rounded to `digits` significant decimal digits.
double round_sig(double v, int digits = 12);
/// JSON number rounded to 12 significant digits; NaN and infinities become null.
Json number(double v);

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
  bool operator==(const Table&) const = default;
};

struct Series {
  std::string name;
  std::string x_label;
  std::string y_label;
  std::vector<std::pair<double, double>> points;
  bool operator==(const Series&) const = default;
};

struct ExperimentReport {
  /// tool, machine, experiment, config, results, summary, constants.
  Json body = Json::object();
  std::vector<Table> tables;
  std::vector<Series> series;
  /// Extra files (name, content) written next to the report, e.g. a table dump.
  std::vector<std::pair<std::string, std::string>> attachments;
  bool operator==(const ExperimentReport&) const = default;
};

enum class Format { Json, Csv, Plotdata };

/// Sorted keys, two-space indent, trailing newline. No timestamps.
std::string canonical_json(const ExperimentReport& report);
ExperimentReport report_from_json(const std::string& text);

std::string table_to_csv(const Table& table);
std::string series_to_plotdata(const Series& series);

/// Writes report.json, <table>.csv and <series>.dat under dir, then the
/// attachments. Returns the paths written, in order.
std::vector<std::string> emit_report(const ExperimentReport& report, const std::string& dir,
                                     const std::vector<Format>& formats);

}  // namespace depthlab::report
