#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "polya/experiment.hpp"

using namespace polya;
using nlohmann::json;

namespace {

std::vector<std::string> shipped_configs() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(POLYA_CONFIG_DIR))
    if (e.path().extension() == ".json") out.push_back(e.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

ExperimentConfig parse(const char* text) { return config_from_json(json::parse(text)); }

std::string csv_body(const Report& r) {
  const auto text = to_csv(r);
  return text.substr(text.find('\n') + 1);
}

}  // namespace

TEST_CASE("shipped configs round-trip losslessly") {
  const auto paths = shipped_configs();
  CHECK(paths.size() >= 12);
  for (const auto& p : paths) {
    CAPTURE(p);
    const auto cfg = load_config(p);
    const json once = to_json(cfg);
    const json twice = to_json(config_from_json(once));
    CHECK(once == twice);
    CHECK(json::parse(once.dump()) == once);
  }
}

TEST_CASE("every descriptor kind round-trips") {
  const auto cfg = parse(R"({
    "id": "all-kinds", "experiment": "hankel",
    "compact": {"kind": "product", "factors": [{"kind": "interval", "a": 0, "b": 1},
                                               {"kind": "disk", "radius": 2, "center": [0.5, -1]}],
                "tolerance": 1e-7},
    "germ": {"kind": "contour", "builtin": "exponential", "c": [[0.1, 0.2], 0.3], "radius": 1.5, "order": 32},
    "measure": {"kind": "product", "factors": [{"kind": "uniform-interval", "a": 0, "b": 1},
                                               {"kind": "uniform-disk", "radius": 2, "center": [0.5, -1]}],
                "mass": 3.5},
    "family": {"direction": "inner", "j_min": 3, "j_max": 9},
    "degrees": {"min": 2, "max": 5}, "size": 7, "precision": "double",
    "search": {"pool_size": 64, "restarts": 3, "max_passes": 10, "tolerance": 1e-9, "greedy_leja": false},
    "output": {"dir": "x", "format": "csv"}
  })");
  CHECK(cfg.degrees == std::vector<int>{2, 3, 4, 5});
  CHECK(cfg.compact->tolerance() == 1e-7);
  CHECK(cfg.measure->mass() == 3.5);
  CHECK(cfg.germ->c(0) == Complex(0.1, 0.2));
  CHECK_FALSE(cfg.search.greedy_leja);
  CHECK(cfg.format == OutputFormat::Csv);
  CHECK(to_json(config_from_json(to_json(cfg))) == to_json(cfg));

  for (const char* compact : {R"({"kind": "circle", "radius": 2, "center": [1, 1]})", R"({"kind": "polydisk", "radii": [1, 2]})",
                              R"({"kind": "finite", "points": [[0, [0, 1]], [1, 2]]})", R"({"kind": "box", "sides": [[0, 1], [2, 3]]})"}) {
    const auto K = compact_from_json(json::parse(compact));
    CHECK(to_json(compact_from_json(to_json(K))) == to_json(K));
  }
  for (const char* measure : {R"({"kind": "discrete", "atoms": [[0], [[0, 1]]], "weights": [0.25, 2]})",
                              R"({"kind": "uniform-circle", "radius": 1, "mass": 2})", R"({"kind": "arcsine", "a": -2, "b": 0.5})"}) {
    const auto mu = measure_from_json(json::parse(measure));
    CHECK(to_json(measure_from_json(to_json(mu))) == to_json(mu));
  }
}

TEST_CASE("malformed configs are rejected with the key named") {
  CHECK_THROWS_WITH_AS(parse(R"({"id": "x", "experiment": "tdiam", "bogus": 1})"), doctest::Contains("bogus"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse(R"({"id": "x", "experiment": "nope"})"), doctest::Contains("nope"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse(R"({"id": "x", "experiment": "tdiam", "compact": {"kind": "interval", "a": 0}})"),
                       doctest::Contains("'b'"), std::invalid_argument);
  CHECK_THROWS_AS(parse(R"({"id": "x", "experiment": "tdiam", "schema_version": 99})"), std::invalid_argument);
  CHECK_THROWS_AS(parse(R"({"id": "a,b", "experiment": "tdiam"})"), std::invalid_argument);
  CHECK_THROWS_AS(parse(R"({"id": "x", "experiment": "tdiam", "degrees": {"min": 4, "max": 2}})"), std::invalid_argument);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), std::runtime_error);
}

TEST_CASE("CSV re-parses to the same rows") {
  auto cfg = parse(R"({"id": "csv", "experiment": "hankel", "size": 6,
                       "germ": {"kind": "measure", "measure": {"kind": "arcsine", "a": -1, "b": 1}}})");
  const auto r = run_experiment(cfg);
  const auto records = parse_csv(to_csv(r));
  REQUIRE(records.size() == r.rows.size());
  for (std::size_t k = 0; k < records.size(); ++k) {
    const auto& row = r.rows[k];
    const CsvRecord expected{cfg.id, cfg.seed, row.series, row.s, row.i, row.j, row.metric, row.value};
    CHECK(records[k] == expected);
  }
  // D_1 is NaN and survives the round trip.
  CHECK(std::isnan(r.column("hankel", "D").front()));
  CHECK(to_csv(r).rfind(csv_header, 0) == 0);
  CHECK_THROWS_AS(parse_csv("wrong header\n"), std::invalid_argument);
}

TEST_CASE("reports do not depend on the worker count") {
  for (const char* text : {
           R"({"id": "det-zs", "experiment": "zs-check", "degrees": [1, 2], "samples": 20000,
               "measure": {"kind": "product", "factors": [{"kind": "arcsine", "a": -1, "b": 1}, {"kind": "arcsine", "a": -1, "b": 1}]}})",
           R"({"id": "det-polya", "experiment": "polya-check", "degrees": [3], "compact": {"kind": "disk", "radius": 1},
               "germ": {"kind": "measure", "measure": {"kind": "uniform-disk", "radius": 1}}, "search": {"restarts": 3, "pool_size": 128}})",
           R"({"id": "det-stab", "experiment": "stability", "degrees": [4], "compact": {"kind": "interval", "a": 0, "b": 2},
               "family": {"direction": "outer", "j_min": 1, "j_max": 6}, "search": {"restarts": 2, "pool_size": 128}})",
       }) {
    const auto cfg = parse(text);
    CHECK(csv_body(run_experiment(cfg, {1})) == csv_body(run_experiment(cfg, {4})));
  }
}

TEST_CASE("polya-check examples") {
  auto cfg = parse(R"({"id": "pc", "experiment": "polya-check", "degrees": [6], "compact": {"kind": "interval", "a": -1, "b": 1},
                       "germ": {"kind": "measure", "measure": {"kind": "arcsine", "a": -1, "b": 1}}, "search": {"restarts": 2}})");
  auto r = run_polya_check(cfg);
  CHECK_FALSE(r.flagged());
  CHECK(r.summary.at("max_D_minus_d_s") < 0.05);

  cfg.germ = germ_from_json(json::parse(R"({"kind": "point-mass", "c": [0]})"));
  r = run_polya_check(cfg);
  CHECK_FALSE(r.flagged());
  const auto d = r.column("hankel", "D");
  for (std::size_t k = 1; k < d.size(); ++k) CHECK(d[k] == 0.0);

  // A germ with its singularity far outside K breaks the inequality and is flagged.
  cfg.germ = germ_from_json(json::parse(R"({"kind": "measure", "measure": {"kind": "arcsine", "a": -5, "b": 5}})"));
  CHECK(run_polya_check(cfg).flagged());
}

TEST_CASE("sharpness examples") {
  auto cfg = parse(R"({"id": "sh", "experiment": "sharpness", "degrees": [3], "compact": {"kind": "interval", "a": -1, "b": 1},
                       "measure": {"kind": "arcsine", "a": -1, "b": 1}})");
  auto r = run_sharpness(cfg);
  CHECK_FALSE(r.flagged());
  CHECK(r.column("sharpness", "identity_error").front() <= 1e-10);

  cfg = parse(R"({"id": "sh2", "experiment": "sharpness", "degrees": [2], "compact": {"kind": "box", "sides": [[-1, 1], [-1, 1]]},
                  "measure": {"kind": "product", "factors": [{"kind": "arcsine", "a": -1, "b": 1}, {"kind": "arcsine", "a": -1, "b": 1}]},
                  "search": {"restarts": 2}})");
  r = run_sharpness(cfg);
  CHECK_FALSE(r.flagged());
  CHECK(r.column("sharpness", "identity_error").front() <= 1e-10);

  cfg = parse(R"({"id": "sh3", "experiment": "sharpness", "degrees": [1], "compact": {"kind": "circle", "radius": 1},
                  "measure": {"kind": "uniform-circle", "radius": 1}})");
  CHECK_THROWS_WITH_AS(run_sharpness(cfg), doctest::Contains("real compact set"), std::invalid_argument);
}

TEST_CASE("stability: constant family rows are equal") {
  const auto cfg = parse(R"({"id": "st", "experiment": "stability", "degrees": [3], "compact": {"kind": "interval", "a": -1, "b": 1},
                             "family": {"direction": "constant", "j_min": 1, "j_max": 4}, "search": {"restarts": 2}})");
  const auto r = run_stability(cfg);
  CHECK_FALSE(r.flagged());
  const auto base = r.column("base", "d_s").front();
  for (double v : r.column("member", "d_s")) CHECK(v == base);
}

TEST_CASE("stability: inner family increases toward the base") {
  const auto cfg = parse(R"({"id": "st", "experiment": "stability", "degrees": [5], "compact": {"kind": "interval", "a": -1, "b": 1},
                             "family": {"direction": "inner", "j_min": 1, "j_max": 12}, "search": {"restarts": 2}})");
  const auto r = run_stability(cfg);
  CHECK_FALSE(r.flagged());
  const auto d = r.column("member", "d_s");
  CHECK(d.size() == 11);
  for (std::size_t k = 1; k < d.size(); ++k) CHECK(d[k] > d[k - 1]);
  CHECK(r.column("limit", "gap_to_base").front() < 1e-9);
}

TEST_CASE("zs-check examples") {
  auto cfg = parse(R"({"id": "zs", "experiment": "zs-check", "degrees": [1], "samples": 100000,
                       "measure": {"kind": "uniform-circle", "radius": 1}})");
  auto r = run_zs_check(cfg);
  CHECK_FALSE(r.flagged());
  CHECK(r.column("zs", "z_gram").front() == doctest::Approx(2.0));
  cfg.measure = measure_from_json(json::parse(R"({"kind": "discrete", "atoms": [[0.5]], "weights": [1]})"));
  r = run_zs_check(cfg);
  CHECK_FALSE(r.flagged());
  CHECK(r.column("zs", "z_mc").front() == 0.0);
  CHECK(std::isinf(r.column("zs", "log_z_gram").front()));
}

TEST_CASE("d_s above the search limit") {
  auto cfg = parse(R"({"id": "t", "experiment": "tdiam", "degrees": [40], "compact": {"kind": "interval", "a": -1, "b": 1}})");
  const auto r = run_tdiam(cfg);
  CHECK(r.column("closed-form", "d_s").front() == doctest::Approx(0.5585452176).epsilon(1e-8));
  cfg.compact = CompactSet::circle(1);
  CHECK_THROWS_AS(run_tdiam(cfg), std::invalid_argument);
}

TEST_CASE("missing inputs are configuration errors") {
  CHECK_THROWS_AS(run_experiment(parse(R"({"id": "x", "experiment": "tdiam", "degrees": [1]})")), std::invalid_argument);
  CHECK_THROWS_AS(run_experiment(parse(R"({"id": "x", "experiment": "hankel"})")), std::invalid_argument);
  CHECK_THROWS_AS(run_experiment(parse(R"({"id": "x", "experiment": "hankel", "size": 3, "precision": "high",
                                           "germ": {"kind": "geometric", "c": [[0, 1]]}})")),
                  std::invalid_argument);
}

TEST_CASE("emit writes both formats and reports path context on failure") {
  const auto cfg = parse(R"({"id": "emit", "experiment": "bm-ratio", "degrees": [0, 1, 2],
                             "measure": {"kind": "uniform-circle", "radius": 1}})");
  const auto r = run_experiment(cfg);
  const auto dir = std::filesystem::temp_directory_path() / "polya-emit-test";
  const auto written = emit(r, dir.string(), OutputFormat::Both);
  CHECK(written.size() == 2);
  std::ifstream in(written[1]);
  const json j = json::parse(in);
  CHECK(j.at("schema_version") == config_schema_version);
  CHECK(j.at("config") == to_json(cfg));
  CHECK(j.at("status") == "pass");
  CHECK(j.at("rows").size() == r.rows.size());
  CHECK_THROWS_WITH_AS(emit(r, "/proc/forbidden/dir", OutputFormat::Csv), doctest::Contains("/proc/forbidden"), std::runtime_error);
}
