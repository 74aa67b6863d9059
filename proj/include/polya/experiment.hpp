#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "polya/domains.hpp"
#include "polya/measures.hpp"
#include "polya/vandermonde.hpp"

namespace polya {

inline constexpr int config_schema_version = 1;

enum class ExperimentKind { TDiam, Fekete, Hankel, PolyaCheck, Sharpness, Stability, BmRatio, ZsCheck };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

/// Coefficient source for Hankel-type experiments.
struct GermSpec {
  enum class Kind { Measure, PointMass, Geometric, Exponential, Contour };
  Kind kind = Kind::Measure;
  std::optional<polya::Measure> measure;
  Point c;
  /// Contour only: the germ sampled on the torus.
  std::string builtin = "geometric";
  double radius = 2.0;
  int order = 64;

  int dimension() const;
  bool is_real() const;
};

struct FamilySpec {
  CompactFamily::Direction direction = CompactFamily::Direction::Outer;
  int j_min = 1;
  int j_max = 64;
};

enum class Precision { Auto, Double, High };
enum class OutputFormat { Csv, Json, Both };

std::string to_string(Precision p);
std::string to_string(OutputFormat f);
OutputFormat output_format_from_string(const std::string& name);

struct ExperimentConfig {
  int schema_version = config_schema_version;
  std::string id = "experiment";
  ExperimentKind kind = ExperimentKind::TDiam;
  std::optional<CompactSet> compact;
  std::optional<Measure> measure;
  std::optional<GermSpec> germ;
  std::optional<FamilySpec> family;
  std::vector<int> degrees;
  /// Configuration size for `fekete`, i_max for `hankel`.
  int size = 0;
  FeketeStrategy search;
  /// Above this degree d_s of an interval comes from its closed-form Fekete
  /// points; other sets are refused.
  int max_search_degree = 30;
  std::uint64_t seed = 1;
  double slack = 0.05;
  std::int64_t samples = 100000;
  int bm_grid = 4096;
  /// Auto means extended precision for sharpness runs and double elsewhere.
  Precision precision = Precision::Auto;
  double identity_tolerance = 1e-10;
  std::string output_dir = "out";
  OutputFormat format = OutputFormat::Both;
};

/// Throws std::invalid_argument with the offending key on malformed input.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::string& path);

CompactSet compact_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CompactSet& K);
Measure measure_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Measure& mu);
GermSpec germ_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GermSpec& g);

/// One long-format record. Index columns that do not apply are -1 and are
/// written as empty CSV cells.
struct ReportRow {
  std::string series;
  int s = -1;
  int i = -1;
  int j = -1;
  std::string metric;
  double value = 0.0;
  double wall_ms = 0.0;
};

struct Report {
  ExperimentConfig config;
  std::vector<ReportRow> rows;
  std::vector<std::string> flags;
  std::map<std::string, double> summary;
  double wall_ms = 0.0;

  bool flagged() const { return !flags.empty(); }
  /// Values of `metric` in `series`, in row order.
  std::vector<double> column(const std::string& series, const std::string& metric) const;
};

struct RunOptions {
  int workers = 1;
};

Report run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});

Report run_tdiam(const ExperimentConfig& cfg, const RunOptions& options = {});
Report run_fekete(const ExperimentConfig& cfg, const RunOptions& options = {});
Report run_hankel(const ExperimentConfig& cfg, const RunOptions& options = {});
Report run_polya_check(const ExperimentConfig& cfg, const RunOptions& options = {});
Report run_sharpness(const ExperimentConfig& cfg, const RunOptions& options = {});
Report run_stability(const ExperimentConfig& cfg, const RunOptions& options = {});
Report run_bm_ratio(const ExperimentConfig& cfg, const RunOptions& options = {});
Report run_zs_check(const ExperimentConfig& cfg, const RunOptions& options = {});

/// d_s used by the drivers: Fekete search up to max_search_degree, closed
/// form for intervals beyond it. `method` receives "search" or "closed-form".
DiameterEstimate diameter_for(const ExperimentConfig& cfg, const CompactSet& K, int s, int workers, std::string* method = nullptr);

/// Record in the CSV layout (no wall-clock column).
struct CsvRecord {
  std::string experiment_id;
  std::uint64_t seed = 0;
  std::string series;
  int s = -1;
  int i = -1;
  int j = -1;
  std::string metric;
  double value = 0.0;

  bool operator==(const CsvRecord&) const;
};

inline constexpr const char* csv_header = "experiment_id,seed,series,s,i,j,metric,value";

std::string to_csv(const Report& report);
std::vector<CsvRecord> parse_csv(const std::string& text);
nlohmann::json to_json(const Report& report);

/// Writes <dir>/<id>.csv and/or <dir>/<id>.json; returns the paths written.
/// I/O failures throw std::runtime_error naming the path.
std::vector<std::string> emit(const Report& report, const std::string& dir, OutputFormat format);

}  // namespace polya
