#include "depthlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "depthlab/error.hpp"

namespace depthlab::report {

namespace {

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  const std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string plot_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace

double round_sig(double v, int digits) {
  if (!std::isfinite(v) || v == 0) return v == 0 ? 0.0 : v;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return std::strtod(buf, nullptr);
}

Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round_sig(v);
}

std::string canonical_json(const ExperimentReport& report) {
  Json doc = report.body;
  Json tables = Json::array();
  for (const auto& t : report.tables) {
    Json rows = Json::array();
    for (const auto& r : t.rows) rows.push_back(r);
    tables.push_back({{"name", t.name}, {"columns", t.columns}, {"rows", rows}});
  }
  Json series = Json::array();
  for (const auto& s : report.series) {
    Json pts = Json::array();
    for (const auto& [x, y] : s.points) pts.push_back({number(x), number(y)});
    series.push_back({{"name", s.name}, {"x", s.x_label}, {"y", s.y_label}, {"points", pts}});
  }
  doc["tables"] = tables;
  doc["series"] = series;
  return doc.dump(2) + "\n";
}

ExperimentReport report_from_json(const std::string& text) {
  Json doc = Json::parse(text);
  ExperimentReport r;
  for (const auto& t : doc.at("tables")) {
    Table table{t.at("name"), t.at("columns"), {}};
    for (const auto& row : t.at("rows")) table.rows.push_back(row.get<std::vector<Json>>());
    r.tables.push_back(std::move(table));
  }
  for (const auto& s : doc.at("series")) {
    Series series{s.at("name"), s.at("x"), s.at("y"), {}};
    for (const auto& p : s.at("points")) series.points.emplace_back(p.at(0), p.at(1));
    r.series.push_back(std::move(series));
  }
  doc.erase("tables");
  doc.erase("series");
  r.body = std::move(doc);
  return r;
}

std::string table_to_csv(const Table& table) {
  std::ostringstream os;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    os << (i ? "," : "") << csv_cell(table.columns[i]);
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << '\n';
  }
  return os.str();
}

std::string series_to_plotdata(const Series& series) {
  std::ostringstream os;
  os << "# " << series.x_label << ' ' << series.y_label << '\n';
  for (const auto& [x, y] : series.points) os << plot_number(x) << ' ' << plot_number(y) << '\n';
  return os.str();
}

std::vector<std::string> emit_report(const ExperimentReport& report, const std::string& dir,
                                     const std::vector<Format>& formats) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir + ": " + ec.message());
  std::vector<std::string> written;
  for (Format f : formats) {
    switch (f) {
      case Format::Json: {
        const fs::path p = fs::path(dir) / "report.json";
        write_file(p, canonical_json(report));
        written.push_back(p.string());
        break;
      }
      case Format::Csv:
        for (const auto& t : report.tables) {
          const fs::path p = fs::path(dir) / (t.name + ".csv");
          write_file(p, table_to_csv(t));
          written.push_back(p.string());
        }
        break;
      case Format::Plotdata:
        for (const auto& s : report.series) {
          const fs::path p = fs::path(dir) / (s.name + ".dat");
          write_file(p, series_to_plotdata(s));
          written.push_back(p.string());
        }
        break;
    }
  }
  for (const auto& [name, content] : report.attachments) {
    const fs::path p = fs::path(dir) / name;
    write_file(p, content);
    written.push_back(p.string());
  }
  return written;
}

}  // namespace depthlab::report
