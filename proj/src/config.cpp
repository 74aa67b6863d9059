#include <fstream>
#include <set>
#include <sstream>

#include "polya/experiment.hpp"

namespace polya {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw std::invalid_argument(where + ": unknown key '" + key + "'");
}

template <class T>
T required(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw std::invalid_argument(where + ": missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(where + ": bad value for '" + key + "': " + e.what());
  }
}

template <class T>
T optional_value(const json& j, const std::string& key, T fallback, const std::string& where) {
  return j.contains(key) ? required<T>(j, key, where) : fallback;
}

Complex complex_from(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  throw std::invalid_argument(where + ": expected a number or [re, im]");
}

json complex_to(Complex z) {
  if (z.imag() == 0.0) return z.real();
  return json::array({z.real(), z.imag()});
}

Point point_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument(where + ": a point is a non-empty array of coordinates");
  Point p(static_cast<Eigen::Index>(j.size()));
  for (std::size_t nu = 0; nu < j.size(); ++nu) p(static_cast<Eigen::Index>(nu)) = complex_from(j[nu], where);
  return p;
}

json point_to(const Point& p) {
  json out = json::array();
  for (Eigen::Index nu = 0; nu < p.size(); ++nu) out.push_back(complex_to(p(nu)));
  return out;
}

Complex center_of(const json& j, const std::string& where) {
  return j.contains("center") ? complex_from(j["center"], where + ".center") : Complex{};
}

Factor factor_from(const json& j, const std::string& where) {
  const auto kind = required<std::string>(j, "kind", where);
  if (kind == "interval") {
    check_keys(j, {"kind", "a", "b"}, where);
    return Factor::interval(required<double>(j, "a", where), required<double>(j, "b", where));
  }
  check_keys(j, {"kind", "radius", "center"}, where);
  const double r = required<double>(j, "radius", where);
  if (kind == "circle") return Factor::circle(r, center_of(j, where));
  if (kind == "disk") return Factor::disk(r, center_of(j, where));
  throw std::invalid_argument(where + ": unknown factor kind '" + kind + "'");
}

json factor_to(const Factor& f) {
  switch (f.kind) {
    case Factor::Kind::Interval:
      return {{"kind", "interval"}, {"a", f.lo}, {"b", f.hi}};
    case Factor::Kind::Circle:
      return {{"kind", "circle"}, {"radius", f.radius}, {"center", complex_to(f.center)}};
    case Factor::Kind::Disk:
      return {{"kind", "disk"}, {"radius", f.radius}, {"center", complex_to(f.center)}};
  }
  return {};
}

std::string direction_name(CompactFamily::Direction d) { return to_string(d); }

CompactFamily::Direction direction_from(const std::string& s, const std::string& where) {
  for (auto d : {CompactFamily::Direction::Outer, CompactFamily::Direction::Inner, CompactFamily::Direction::Constant})
    if (to_string(d) == s) return d;
  throw std::invalid_argument(where + ": unknown direction '" + s + "'");
}

Precision precision_from(const std::string& s) {
  for (auto p : {Precision::Auto, Precision::Double, Precision::High})
    if (to_string(p) == s) return p;
  throw std::invalid_argument("precision: expected auto, double or high, got '" + s + "'");
}

std::vector<int> degrees_from(const json& j) {
  std::vector<int> out;
  if (j.is_array()) {
    for (const auto& d : j) {
      if (!d.is_number_integer()) throw std::invalid_argument("degrees: entries must be integers");
      out.push_back(d.get<int>());
    }
  } else if (j.is_object()) {
    check_keys(j, {"min", "max"}, "degrees");
    const int lo = required<int>(j, "min", "degrees"), hi = required<int>(j, "max", "degrees");
    if (lo > hi) throw std::invalid_argument("degrees: min exceeds max");
    for (int s = lo; s <= hi; ++s) out.push_back(s);
  } else {
    throw std::invalid_argument("degrees: expected a list or {min, max}");
  }
  for (int s : out)
    if (s < 0) throw std::invalid_argument("degrees: entries must be >= 0");
  return out;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::TDiam: return "tdiam";
    case ExperimentKind::Fekete: return "fekete";
    case ExperimentKind::Hankel: return "hankel";
    case ExperimentKind::PolyaCheck: return "polya-check";
    case ExperimentKind::Sharpness: return "sharpness";
    case ExperimentKind::Stability: return "stability";
    case ExperimentKind::BmRatio: return "bm-ratio";
    case ExperimentKind::ZsCheck: return "zs-check";
  }
  return "?";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  for (auto k : {ExperimentKind::TDiam, ExperimentKind::Fekete, ExperimentKind::Hankel, ExperimentKind::PolyaCheck,
                 ExperimentKind::Sharpness, ExperimentKind::Stability, ExperimentKind::BmRatio, ExperimentKind::ZsCheck})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("experiment: unknown kind '" + name + "'");
}

std::string to_string(Precision p) {
  switch (p) {
    case Precision::Auto: return "auto";
    case Precision::Double: return "double";
    case Precision::High: return "high";
  }
  return "?";
}

std::string to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Json: return "json";
    case OutputFormat::Both: return "both";
  }
  return "?";
}

OutputFormat output_format_from_string(const std::string& name) {
  for (auto f : {OutputFormat::Csv, OutputFormat::Json, OutputFormat::Both})
    if (to_string(f) == name) return f;
  throw std::invalid_argument("format: expected csv, json or both, got '" + name + "'");
}

CompactSet compact_from_json(const json& j) {
  const std::string where = "compact";
  const auto kind = required<std::string>(j, "kind", where);
  const double tol = optional_value<double>(j, "tolerance", CompactSet::default_tolerance, where);
  auto finish = [tol](CompactSet K) { return K.with_tolerance(tol); };

  if (kind == "interval") {
    check_keys(j, {"kind", "a", "b", "tolerance"}, where);
    return finish(CompactSet::interval(required<double>(j, "a", where), required<double>(j, "b", where)));
  }
  if (kind == "circle" || kind == "disk") {
    check_keys(j, {"kind", "radius", "center", "tolerance"}, where);
    const double r = required<double>(j, "radius", where);
    return finish(kind == "circle" ? CompactSet::circle(r, center_of(j, where)) : CompactSet::disk(r, center_of(j, where)));
  }
  if (kind == "box") {
    check_keys(j, {"kind", "sides", "tolerance"}, where);
    std::vector<std::pair<double, double>> sides;
    for (const auto& side : required<json>(j, "sides", where)) {
      if (!side.is_array() || side.size() != 2) throw std::invalid_argument("compact.sides: each side is [a, b]");
      sides.emplace_back(side[0].get<double>(), side[1].get<double>());
    }
    return finish(CompactSet::box(sides));
  }
  if (kind == "polydisk") {
    check_keys(j, {"kind", "radii", "centers", "tolerance"}, where);
    std::vector<Complex> centers;
    if (j.contains("centers"))
      for (const auto& c : j["centers"]) centers.push_back(complex_from(c, "compact.centers"));
    return finish(CompactSet::polydisk(required<std::vector<double>>(j, "radii", where), centers));
  }
  if (kind == "product") {
    check_keys(j, {"kind", "factors", "tolerance"}, where);
    std::vector<Factor> factors;
    for (const auto& f : required<json>(j, "factors", where)) factors.push_back(factor_from(f, "compact.factors"));
    return finish(CompactSet::product(std::move(factors)));
  }
  if (kind == "finite") {
    check_keys(j, {"kind", "points", "tolerance"}, where);
    std::vector<Point> points;
    for (const auto& p : required<json>(j, "points", where)) points.push_back(point_from(p, "compact.points"));
    return finish(CompactSet::finite(std::move(points)));
  }
  throw std::invalid_argument("compact: unknown kind '" + kind + "'");
}

json to_json(const CompactSet& K) {
  json j;
  const auto& f = K.factors();
  switch (K.kind()) {
    case SetKind::Interval:
      j = {{"kind", "interval"}, {"a", f[0].lo}, {"b", f[0].hi}};
      break;
    case SetKind::Circle:
    case SetKind::Disk:
      j = {{"kind", to_string(K.kind())}, {"radius", f[0].radius}, {"center", complex_to(f[0].center)}};
      break;
    case SetKind::Box: {
      json sides = json::array();
      for (const auto& x : f) sides.push_back({x.lo, x.hi});
      j = {{"kind", "box"}, {"sides", sides}};
      break;
    }
    case SetKind::Polydisk: {
      json radii = json::array(), centers = json::array();
      for (const auto& x : f) {
        radii.push_back(x.radius);
        centers.push_back(complex_to(x.center));
      }
      j = {{"kind", "polydisk"}, {"radii", radii}, {"centers", centers}};
      break;
    }
    case SetKind::Product: {
      json factors = json::array();
      for (const auto& x : f) factors.push_back(factor_to(x));
      j = {{"kind", "product"}, {"factors", factors}};
      break;
    }
    case SetKind::Finite: {
      json points = json::array();
      for (const auto& p : K.points()) points.push_back(point_to(p));
      j = {{"kind", "finite"}, {"points", points}};
      break;
    }
  }
  j["tolerance"] = K.tolerance();
  return j;
}

Measure measure_from_json(const json& j) {
  const std::string where = "measure";
  const auto kind = required<std::string>(j, "kind", where);
  Measure mu;
  if (kind == "arcsine" || kind == "uniform-interval") {
    check_keys(j, {"kind", "a", "b", "mass"}, where);
    const double a = required<double>(j, "a", where), b = required<double>(j, "b", where);
    mu = kind == "arcsine" ? Measure::arcsine(a, b) : Measure::uniform_interval(a, b);
  } else if (kind == "uniform-circle" || kind == "uniform-disk") {
    check_keys(j, {"kind", "radius", "center", "mass"}, where);
    const double r = required<double>(j, "radius", where);
    mu = kind == "uniform-circle" ? Measure::uniform_circle(r, center_of(j, where)) : Measure::uniform_disk(r, center_of(j, where));
  } else if (kind == "product") {
    check_keys(j, {"kind", "factors", "mass"}, where);
    std::vector<Measure> factors;
    for (const auto& f : required<json>(j, "factors", where)) factors.push_back(measure_from_json(f));
    mu = Measure::product(std::move(factors));
  } else if (kind == "discrete") {
    check_keys(j, {"kind", "atoms", "weights"}, where);
    std::vector<Point> atoms;
    for (const auto& p : required<json>(j, "atoms", where)) atoms.push_back(point_from(p, "measure.atoms"));
    return Measure::discrete(std::move(atoms), required<std::vector<double>>(j, "weights", where));
  } else {
    throw std::invalid_argument("measure: unknown kind '" + kind + "'");
  }
  if (j.contains("mass")) mu = mu.with_mass(required<double>(j, "mass", where));
  return mu;
}

json to_json(const Measure& mu) {
  switch (mu.kind()) {
    case MeasureKind::Arcsine:
    case MeasureKind::UniformInterval:
      return {{"kind", to_string(mu.kind())}, {"a", mu.lo()}, {"b", mu.hi()}, {"mass", mu.mass()}};
    case MeasureKind::UniformCircle:
    case MeasureKind::UniformDisk:
      return {{"kind", to_string(mu.kind())}, {"radius", mu.radius()}, {"center", complex_to(mu.center())}, {"mass", mu.mass()}};
    case MeasureKind::Product: {
      json factors = json::array();
      for (const auto& f : mu.factors()) factors.push_back(to_json(f));
      return {{"kind", "product"}, {"factors", factors}, {"mass", mu.mass()}};
    }
    case MeasureKind::Discrete: {
      json atoms = json::array();
      for (const auto& p : mu.atoms()) atoms.push_back(point_to(p));
      return {{"kind", "discrete"}, {"atoms", atoms}, {"weights", mu.weights()}};
    }
  }
  return {};
}

int GermSpec::dimension() const { return kind == Kind::Measure ? measure->dimension() : static_cast<int>(c.size()); }

bool GermSpec::is_real() const {
  if (kind == Kind::Contour) return false;
  if (kind == Kind::Measure) return measure->is_real();
  return (c.imag().array() == 0.0).all();
}

GermSpec germ_from_json(const json& j) {
  const std::string where = "germ";
  const auto kind = required<std::string>(j, "kind", where);
  GermSpec g;
  if (kind == "measure") {
    check_keys(j, {"kind", "measure"}, where);
    g.kind = GermSpec::Kind::Measure;
    g.measure = measure_from_json(required<json>(j, "measure", where));
    return g;
  }
  if (kind == "point-mass" || kind == "geometric" || kind == "exponential") {
    check_keys(j, {"kind", "c"}, where);
    g.kind = kind == "point-mass" ? GermSpec::Kind::PointMass : kind == "geometric" ? GermSpec::Kind::Geometric : GermSpec::Kind::Exponential;
    g.c = point_from(required<json>(j, "c", where), "germ.c");
    return g;
  }
  if (kind == "contour") {
    check_keys(j, {"kind", "builtin", "c", "radius", "order"}, where);
    g.kind = GermSpec::Kind::Contour;
    g.builtin = required<std::string>(j, "builtin", where);
    if (g.builtin != "geometric" && g.builtin != "exponential" && g.builtin != "inverse-product")
      throw std::invalid_argument("germ.builtin: expected geometric, exponential or inverse-product");
    g.c = point_from(required<json>(j, "c", where), "germ.c");
    g.radius = required<double>(j, "radius", where);
    g.order = required<int>(j, "order", where);
    if (!(g.radius > 0)) throw std::invalid_argument("germ.radius must be > 0");
    if (g.order < 4) throw std::invalid_argument("germ.order must be >= 4");
    return g;
  }
  throw std::invalid_argument("germ: unknown kind '" + kind + "'");
}

json to_json(const GermSpec& g) {
  switch (g.kind) {
    case GermSpec::Kind::Measure:
      return {{"kind", "measure"}, {"measure", to_json(*g.measure)}};
    case GermSpec::Kind::PointMass:
      return {{"kind", "point-mass"}, {"c", point_to(g.c)}};
    case GermSpec::Kind::Geometric:
      return {{"kind", "geometric"}, {"c", point_to(g.c)}};
    case GermSpec::Kind::Exponential:
      return {{"kind", "exponential"}, {"c", point_to(g.c)}};
    case GermSpec::Kind::Contour:
      return {{"kind", "contour"}, {"builtin", g.builtin}, {"c", point_to(g.c)}, {"radius", g.radius}, {"order", g.order}};
  }
  return {};
}

ExperimentConfig config_from_json(const json& j) {
  const std::string where = "config";
  check_keys(j, {"schema_version", "id", "experiment", "compact", "measure", "germ", "family", "degrees", "size", "search",
                 "seed", "slack", "samples", "bm_grid", "precision", "identity_tolerance", "output"},
             where);
  ExperimentConfig cfg;
  cfg.schema_version = optional_value<int>(j, "schema_version", config_schema_version, where);
  if (cfg.schema_version != config_schema_version)
    throw std::invalid_argument("config: unsupported schema_version " + std::to_string(cfg.schema_version));
  cfg.id = required<std::string>(j, "id", where);
  if (cfg.id.empty() || cfg.id.find_first_of("/\\,\"\n") != std::string::npos)
    throw std::invalid_argument("config: id must be non-empty and free of separators");
  cfg.kind = experiment_kind_from_string(required<std::string>(j, "experiment", where));
  if (j.contains("compact")) cfg.compact = compact_from_json(j["compact"]);
  if (j.contains("measure")) cfg.measure = measure_from_json(j["measure"]);
  if (j.contains("germ")) cfg.germ = germ_from_json(j["germ"]);
  if (j.contains("family")) {
    const auto& f = j["family"];
    check_keys(f, {"direction", "j_min", "j_max"}, "family");
    FamilySpec fam;
    fam.direction = direction_from(required<std::string>(f, "direction", "family"), "family");
    fam.j_min = optional_value<int>(f, "j_min", fam.j_min, "family");
    fam.j_max = optional_value<int>(f, "j_max", fam.j_max, "family");
    if (fam.j_min < 1 || fam.j_max < fam.j_min) throw std::invalid_argument("family: need 1 <= j_min <= j_max");
    cfg.family = fam;
  }
  if (j.contains("degrees")) cfg.degrees = degrees_from(j["degrees"]);
  cfg.size = optional_value<int>(j, "size", cfg.size, where);
  if (j.contains("search")) {
    const auto& s = j["search"];
    check_keys(s, {"pool_size", "restarts", "max_passes", "tolerance", "greedy_leja", "max_search_degree"}, "search");
    cfg.search.pool_size = optional_value<int>(s, "pool_size", cfg.search.pool_size, "search");
    cfg.search.restarts = optional_value<int>(s, "restarts", cfg.search.restarts, "search");
    cfg.search.max_passes = optional_value<int>(s, "max_passes", cfg.search.max_passes, "search");
    cfg.search.tolerance = optional_value<double>(s, "tolerance", cfg.search.tolerance, "search");
    cfg.search.greedy_leja = optional_value<bool>(s, "greedy_leja", cfg.search.greedy_leja, "search");
    cfg.max_search_degree = optional_value<int>(s, "max_search_degree", cfg.max_search_degree, "search");
    if (cfg.search.pool_size < 1 || cfg.search.restarts < 1 || cfg.search.max_passes < 0)
      throw std::invalid_argument("search: pool_size and restarts must be >= 1, max_passes >= 0");
  }
  cfg.seed = optional_value<std::uint64_t>(j, "seed", cfg.seed, where);
  cfg.slack = optional_value<double>(j, "slack", cfg.slack, where);
  cfg.samples = optional_value<std::int64_t>(j, "samples", cfg.samples, where);
  cfg.bm_grid = optional_value<int>(j, "bm_grid", cfg.bm_grid, where);
  cfg.precision = precision_from(optional_value<std::string>(j, "precision", "auto", where));
  cfg.identity_tolerance = optional_value<double>(j, "identity_tolerance", cfg.identity_tolerance, where);
  if (cfg.samples < 2) throw std::invalid_argument("config: samples must be >= 2");
  if (cfg.bm_grid < 2) throw std::invalid_argument("config: bm_grid must be >= 2");
  if (j.contains("output")) {
    const auto& o = j["output"];
    check_keys(o, {"dir", "format"}, "output");
    cfg.output_dir = optional_value<std::string>(o, "dir", cfg.output_dir, "output");
    cfg.format = output_format_from_string(optional_value<std::string>(o, "format", "both", "output"));
  }
  return cfg;
}

json to_json(const ExperimentConfig& cfg) {
  json j;
  j["schema_version"] = cfg.schema_version;
  j["id"] = cfg.id;
  j["experiment"] = to_string(cfg.kind);
  if (cfg.compact) j["compact"] = to_json(*cfg.compact);
  if (cfg.measure) j["measure"] = to_json(*cfg.measure);
  if (cfg.germ) j["germ"] = to_json(*cfg.germ);
  if (cfg.family)
    j["family"] = {{"direction", direction_name(cfg.family->direction)}, {"j_min", cfg.family->j_min}, {"j_max", cfg.family->j_max}};
  j["degrees"] = cfg.degrees;
  j["size"] = cfg.size;
  j["search"] = {{"pool_size", cfg.search.pool_size},   {"restarts", cfg.search.restarts},
                 {"max_passes", cfg.search.max_passes}, {"tolerance", cfg.search.tolerance},
                 {"greedy_leja", cfg.search.greedy_leja}, {"max_search_degree", cfg.max_search_degree}};
  j["seed"] = cfg.seed;
  j["slack"] = cfg.slack;
  j["samples"] = cfg.samples;
  j["bm_grid"] = cfg.bm_grid;
  j["precision"] = to_string(cfg.precision);
  j["identity_tolerance"] = cfg.identity_tolerance;
  j["output"] = {{"dir", cfg.output_dir}, {"format", to_string(cfg.format)}};
  return j;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

}  // namespace polya
