#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "polya/experiment.hpp"

namespace polya {

using nlohmann::json;

namespace {

// %.17g round-trips doubles; non-finite values get fixed spellings so the
// output does not depend on the C library's choice of "-nan".
std::string number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string index_cell(int v) { return v < 0 ? std::string() : std::to_string(v); }

json json_number(double v) {
  if (std::isfinite(v)) return v;
  return number(v);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

int parse_index(const std::string& cell, int line_no) {
  if (cell.empty()) return -1;
  std::size_t used = 0;
  const int v = std::stoi(cell, &used);
  if (used != cell.size()) throw std::invalid_argument("csv line " + std::to_string(line_no) + ": bad index '" + cell + "'");
  return v;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace

bool CsvRecord::operator==(const CsvRecord& o) const {
  const bool same_value = value == o.value || (std::isnan(value) && std::isnan(o.value));
  return experiment_id == o.experiment_id && seed == o.seed && series == o.series && s == o.s && i == o.i && j == o.j &&
         metric == o.metric && same_value;
}

std::string to_csv(const Report& report) {
  std::string out = std::string(csv_header) + "\n";
  const std::string prefix = report.config.id + "," + std::to_string(report.config.seed) + ",";
  for (const auto& row : report.rows) {
    out += prefix;
    out += row.series + "," + index_cell(row.s) + "," + index_cell(row.i) + "," + index_cell(row.j) + ",";
    out += row.metric + "," + number(row.value) + "\n";
  }
  return out;
}

std::vector<CsvRecord> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != csv_header) throw std::invalid_argument("csv: missing or unexpected header");
  std::vector<CsvRecord> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 8) throw std::invalid_argument("csv line " + std::to_string(line_no) + ": expected 8 cells");
    CsvRecord r;
    r.experiment_id = cells[0];
    r.seed = std::stoull(cells[1]);
    r.series = cells[2];
    r.s = parse_index(cells[3], line_no);
    r.i = parse_index(cells[4], line_no);
    r.j = parse_index(cells[5], line_no);
    r.metric = cells[6];
    r.value = std::strtod(cells[7].c_str(), nullptr);
    out.push_back(std::move(r));
  }
  return out;
}

json to_json(const Report& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    json r = {{"series", row.series}, {"metric", row.metric}, {"value", json_number(row.value)}, {"wall_ms", row.wall_ms}};
    if (row.s >= 0) r["s"] = row.s;
    if (row.i >= 0) r["i"] = row.i;
    if (row.j >= 0) r["j"] = row.j;
    rows.push_back(std::move(r));
  }
  json summary = json::object();
  for (const auto& [key, value] : report.summary) summary[key] = json_number(value);
  return {{"schema_version", config_schema_version},
          {"experiment_id", report.config.id},
          {"seed", report.config.seed},
          {"config", to_json(report.config)},
          {"status", report.flagged() ? "flagged" : "pass"},
          {"flags", report.flags},
          {"summary", summary},
          {"wall_ms", report.wall_ms},
          {"rows", rows}};
}

std::vector<std::string> emit(const Report& report, const std::string& dir, OutputFormat format) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir + "': " + ec.message());
  std::vector<std::string> written;
  if (format != OutputFormat::Json) {
    const auto path = fs::path(dir) / (report.config.id + ".csv");
    write_file(path, to_csv(report));
    written.push_back(path.string());
  }
  if (format != OutputFormat::Csv) {
    const auto path = fs::path(dir) / (report.config.id + ".json");
    write_file(path, to_json(report).dump(2) + "\n");
    written.push_back(path.string());
  }
  return written;
}

}  // namespace polya
