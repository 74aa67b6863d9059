#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "polya/experiment.hpp"
#include "polya/functionals.hpp"
#include "polya/parallel.hpp"

namespace polya {

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

class Stopwatch {
 public:
  double ms() const { return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void add(Report& r, std::string series, int s, int i, int j, std::string metric, double value, double ms) {
  r.rows.push_back({std::move(series), s, i, j, std::move(metric), value, ms});
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

const CompactSet& need_compact(const ExperimentConfig& cfg) {
  if (!cfg.compact) throw std::invalid_argument(to_string(cfg.kind) + ": config needs a 'compact' entry");
  return *cfg.compact;
}

const Measure& need_measure(const ExperimentConfig& cfg) {
  if (!cfg.measure) throw std::invalid_argument(to_string(cfg.kind) + ": config needs a 'measure' entry");
  return *cfg.measure;
}

const GermSpec& need_germ(const ExperimentConfig& cfg) {
  if (!cfg.germ) throw std::invalid_argument(to_string(cfg.kind) + ": config needs a 'germ' entry");
  return *cfg.germ;
}

const std::vector<int>& need_degrees(const ExperimentConfig& cfg, int min_degree) {
  if (cfg.degrees.empty()) throw std::invalid_argument(to_string(cfg.kind) + ": config needs 'degrees'");
  for (int s : cfg.degrees)
    if (s < min_degree)
      throw std::invalid_argument(to_string(cfg.kind) + ": degrees must be >= " + std::to_string(min_degree));
  return cfg.degrees;
}

enum class Arithmetic { Double, Complex, High };

Arithmetic arithmetic_for(bool real, Precision p, bool high_by_default) {
  const bool high = p == Precision::High || (p == Precision::Auto && high_by_default);
  if (!real) {
    if (p == Precision::High) throw std::invalid_argument("precision 'high' needs real-valued data");
    return Arithmetic::Complex;
  }
  return high ? Arithmetic::High : Arithmetic::Double;
}

Report start(const ExperimentConfig& cfg) {
  Report r;
  r.config = cfg;
  return r;
}

template <class Scalar>
GermCoefficients<Scalar> coefficients(const GermSpec& g, int max_degree) {
  switch (g.kind) {
    case GermSpec::Kind::Measure: return coeffs_from_measure<Scalar>(*g.measure);
    case GermSpec::Kind::PointMass: return point_mass_coeffs<Scalar>(g.c);
    case GermSpec::Kind::Geometric: return geometric_coeffs<Scalar>(g.c);
    case GermSpec::Kind::Exponential: return exponential_coeffs<Scalar>(g.c);
    case GermSpec::Kind::Contour:
      if constexpr (std::is_same_v<Scalar, Complex>) {
        const int n = static_cast<int>(g.c.size());
        GermEvaluator f = g.builtin == "geometric"     ? germs::geometric(g.c)
                          : g.builtin == "exponential" ? germs::exponential(g.c)
                                                       : germs::inverse_product(n);
        return coeffs_from_contour(std::move(f), n, g.radius, g.order, max_degree);
      } else {
        throw std::invalid_argument("contour germs need complex arithmetic");
      }
  }
  throw std::logic_error("unhandled germ kind");
}

HankelSequenceReport sequence(const GermSpec& g, int i_max, Arithmetic arith, int workers) {
  const int n = g.dimension();
  const int max_degree = 2 * degree_of_position(n, static_cast<std::uint64_t>(i_max));
  switch (arith) {
    case Arithmetic::Double: return polya_sequence(coefficients<double>(g, max_degree), i_max, workers);
    case Arithmetic::Complex: return polya_sequence(coefficients<Complex>(g, max_degree), i_max, workers);
    case Arithmetic::High: return polya_sequence(coefficients<HighReal>(g, max_degree), i_max, workers);
  }
  throw std::logic_error("unhandled arithmetic");
}

// Length ratio of K_j to the base when K_j is a scaled copy of a
// one-factor base, so that d_s(K_j) / d_s(K) is known in closed form.
std::optional<double> scaling_ratio(const CompactSet& base, const CompactSet& member) {
  if (base.factors().size() != 1 || member.factors().size() != 1) return std::nullopt;
  if (base.kind() == SetKind::Interval) {
    const auto &b = base.factors()[0], &m = member.factors()[0];
    return (m.hi - m.lo) / (b.hi - b.lo);
  }
  if (base.kind() == SetKind::Circle || base.kind() == SetKind::Disk)
    return member.factors()[0].radius / base.factors()[0].radius;
  return std::nullopt;
}

void add_sequence_rows(Report& r, const HankelSequenceReport& seq, double ms) {
  for (const auto& row : seq.rows) {
    add(r, "hankel", row.s, row.i, -1, "log_abs_h", row.log_abs, ms);
    add(r, "hankel", row.s, row.i, -1, "D", row.d, ms);
    add(r, "hankel", row.s, row.i, -1, "running_max", row.running_max, ms);
  }
  for (const auto& row : seq.diagonal()) add(r, "diagonal", row.s, row.i, -1, "D", row.d, ms);
}

}  // namespace

std::vector<double> Report::column(const std::string& series, const std::string& metric) const {
  std::vector<double> out;
  for (const auto& row : rows)
    if (row.series == series && row.metric == metric) out.push_back(row.value);
  return out;
}

DiameterEstimate diameter_for(const ExperimentConfig& cfg, const CompactSet& K, int s, int workers, std::string* method) {
  if (s < 1) throw std::invalid_argument("d_s needs s >= 1");
  if (s <= cfg.max_search_degree) {
    FeketeStrategy strategy = cfg.search;
    strategy.workers = workers;
    if (method) *method = "search";
    return transfinite_diameter_estimate(K, s, strategy, derive_seed(cfg.seed, static_cast<std::uint64_t>(s)));
  }
  if (K.kind() == SetKind::Interval) {
    if (method) *method = "closed-form";
    return interval_transfinite_diameter(K.factors()[0].lo, K.factors()[0].hi, s);
  }
  throw std::invalid_argument("d_s above max_search_degree (" + std::to_string(cfg.max_search_degree) +
                              ") is only available in closed form for intervals");
}

Report run_tdiam(const ExperimentConfig& cfg, const RunOptions& options) {
  Report r = start(cfg);
  const auto& K = need_compact(cfg);
  for (int s : need_degrees(cfg, 1)) {
    Stopwatch watch;
    std::string method;
    const auto e = diameter_for(cfg, K, s, options.workers, &method);
    const double ms = watch.ms();
    add(r, method, s, -1, -1, "d_s", e.d_s, ms);
    add(r, method, s, -1, -1, "log_v", e.log_v, ms);
    add(r, method, s, -1, -1, "l_s", static_cast<double>(e.l_s), ms);
    add(r, method, s, -1, -1, "m_s", static_cast<double>(e.m_s), ms);
  }
  return r;
}

Report run_fekete(const ExperimentConfig& cfg, const RunOptions& options) {
  Report r = start(cfg);
  const auto& K = need_compact(cfg);
  if (cfg.size < 1) throw std::invalid_argument("fekete: config needs size >= 1");
  FeketeStrategy strategy = cfg.search;
  strategy.workers = options.workers;
  Stopwatch watch;
  const auto res = fekete_search(K, cfg.size, strategy, cfg.seed);
  const double ms = watch.ms();
  add(r, "fekete", -1, cfg.size, -1, "log_abs_v", res.log_abs, ms);
  add(r, "fekete", -1, cfg.size, -1, "best_restart", res.best_restart, ms);
  for (const auto& t : res.trace) {
    add(r, "restart", -1, cfg.size, t.restart, "initial_log_abs_v", t.initial_log_abs, ms);
    add(r, "restart", -1, cfg.size, t.restart, "final_log_abs_v", t.final_log_abs, ms);
    add(r, "restart", -1, cfg.size, t.restart, "passes", static_cast<double>(t.pass_gains.size()), ms);
  }
  for (Eigen::Index p = 0; p < res.points.cols(); ++p)
    for (Eigen::Index nu = 0; nu < res.points.rows(); ++nu) {
      const auto coord = std::to_string(nu + 1);
      add(r, "point", -1, static_cast<int>(p) + 1, -1, "re_z" + coord, res.points(nu, p).real(), ms);
      add(r, "point", -1, static_cast<int>(p) + 1, -1, "im_z" + coord, res.points(nu, p).imag(), ms);
    }
  r.summary["log_abs_v"] = res.log_abs;
  return r;
}

Report run_hankel(const ExperimentConfig& cfg, const RunOptions& options) {
  Report r = start(cfg);
  const auto& g = need_germ(cfg);
  if (cfg.size < 1) throw std::invalid_argument("hankel: config needs size >= 1 (i_max)");
  Stopwatch watch;
  const auto seq = sequence(g, cfg.size, arithmetic_for(g.is_real(), cfg.precision, false), options.workers);
  add_sequence_rows(r, seq, watch.ms());
  r.summary["max_D"] = seq.rows.back().running_max;
  return r;
}

Report run_polya_check(const ExperimentConfig& cfg, const RunOptions& options) {
  Report r = start(cfg);
  const auto& K = need_compact(cfg);
  const auto& g = need_germ(cfg);
  if (g.dimension() != K.dimension()) throw std::invalid_argument("polya-check: germ and compact set dimensions differ");
  const auto& degrees = need_degrees(cfg, 1);
  const int s_max = *std::max_element(degrees.begin(), degrees.end());

  std::vector<double> d(static_cast<std::size_t>(s_max) + 1, nan_value);
  for (int s = 1; s <= s_max; ++s) {
    Stopwatch watch;
    std::string method;
    d[static_cast<std::size_t>(s)] = diameter_for(cfg, K, s, options.workers, &method).d_s;
    add(r, "d_s", s, -1, -1, "d_s", d[static_cast<std::size_t>(s)], watch.ms());
  }

  const int i_max = static_cast<int>(counts(K.dimension(), s_max).m);
  Stopwatch watch;
  const auto seq = sequence(g, i_max, arithmetic_for(g.is_real(), cfg.precision, false), options.workers);
  const double ms = watch.ms();
  add_sequence_rows(r, seq, ms);

  // D_1 carries the exponent 1/(2 l_0) = 1/0 and is skipped.
  double max_excess = -std::numeric_limits<double>::infinity(), max_d = 0.0;
  for (const auto& row : seq.rows) {
    if (std::isnan(row.d)) continue;
    const double bound = d[static_cast<std::size_t>(row.s)] + cfg.slack;
    add(r, "bound", row.s, row.i, -1, "d_s_plus_slack", bound, ms);
    max_excess = std::max(max_excess, row.d - d[static_cast<std::size_t>(row.s)]);
    max_d = std::max(max_d, row.d);
    if (row.d > bound)
      r.flags.push_back("D_" + std::to_string(row.i) + " = " + fmt(row.d) + " exceeds d_" + std::to_string(row.s) +
                        " + slack = " + fmt(bound));
  }
  r.summary["max_D"] = max_d;
  r.summary["max_D_minus_d_s"] = max_excess;
  r.summary["d_s_max"] = d[static_cast<std::size_t>(s_max)];
  r.summary["max_D_minus_d_s_max"] = max_d - d[static_cast<std::size_t>(s_max)];
  return r;
}

Report run_sharpness(const ExperimentConfig& cfg, const RunOptions& options) {
  Report r = start(cfg);
  const auto& K = need_compact(cfg);
  const auto& mu = need_measure(cfg);
  if (!K.is_real())
    throw std::invalid_argument("sharpness: the construction requires a real compact set K in R^n; '" + to_string(K.kind()) +
                                "' is not contained in R^n, so no sharpness claim is made");
  if (!mu.is_real() || mu.dimension() != K.dimension())
    throw std::invalid_argument("sharpness: the measure must live on the real compact set");
  const auto arith = arithmetic_for(true, cfg.precision, true);
  const int n = K.dimension();

  std::vector<double> gaps;
  double last_d = nan_value;
  for (int s : need_degrees(cfg, 1)) {
    Stopwatch watch;
    const auto m = static_cast<int>(counts(n, s).m);
    LogDet zg, h;
    if (arith == Arithmetic::High) {
      zg = z_s_gram<HighReal>(mu, s);
      h = hankel_matrix(coeffs_from_measure<HighReal>(mu), m).log_det;
    } else {
      zg = z_s_gram<double>(mu, s);
      h = hankel_matrix(coeffs_from_measure<double>(mu), m).log_det;
    }
    const double log_z_hankel = std::lgamma(m + 1.0) + h.log_abs;
    const double err = zg.log_abs == log_z_hankel ? 0.0 : std::abs(zg.log_abs - log_z_hankel);
    const double big_d = polya_root(h.log_abs, n, m);
    const double moment_ms = watch.ms();

    Stopwatch search_watch;
    std::string method;
    const double d = diameter_for(cfg, K, s, options.workers, &method).d_s;
    const double ms = moment_ms + search_watch.ms();

    add(r, "sharpness", s, m, -1, "log_z_gram", zg.log_abs, ms);
    add(r, "sharpness", s, m, -1, "log_z_hankel", log_z_hankel, ms);
    add(r, "sharpness", s, m, -1, "identity_error", err, ms);
    add(r, "sharpness", s, m, -1, "D_m_s", big_d, ms);
    add(r, "sharpness", s, m, -1, "d_s", d, ms);
    add(r, "sharpness", s, m, -1, "gap", std::abs(big_d - d), ms);
    add(r, "sharpness", s, m, -1, method == "search" ? "d_s_searched" : "d_s_closed_form", 1.0, ms);
    gaps.push_back(std::abs(big_d - d));
    last_d = big_d;
    if (!(err <= cfg.identity_tolerance))
      r.flags.push_back("s = " + std::to_string(s) + ": Gram and Hankel routes differ by " + fmt(err) + " in log");
  }
  bool decreasing = true;
  for (std::size_t k = 1; k < gaps.size(); ++k) decreasing = decreasing && gaps[k] < gaps[k - 1];
  r.summary["gap_decreasing"] = decreasing ? 1.0 : 0.0;
  r.summary["final_gap"] = gaps.back();
  r.summary["final_D_m_s"] = last_d;
  return r;
}

Report run_stability(const ExperimentConfig& cfg, const RunOptions& options) {
  Report r = start(cfg);
  const auto& K = need_compact(cfg);
  if (!cfg.family) throw std::invalid_argument("stability: config needs a 'family' entry");
  const CompactFamily family(K, cfg.family->direction);
  const int j_min = std::max(cfg.family->j_min, family.first_valid_index());
  const int j_max = cfg.family->j_max;
  if (j_min > j_max) throw std::invalid_argument("stability: no valid family members in [j_min, j_max]");
  const auto count = static_cast<std::size_t>(j_max - j_min + 1);

  for (int s : need_degrees(cfg, 1)) {
    Stopwatch base_watch;
    const double base = diameter_for(cfg, K, s, options.workers).d_s;
    add(r, "base", s, -1, -1, "d_s", base, base_watch.ms());

    // Every member uses the base seed, so a scaled copy reproduces the base
    // search up to the scale factor.
    std::vector<double> d(count), ms(count);
    std::vector<std::optional<double>> ratio(count);
    parallel_for(count, options.workers, [&](std::size_t idx) {
      Stopwatch watch;
      const CompactSet member = family_member(family, j_min + static_cast<int>(idx));
      d[idx] = diameter_for(cfg, member, s, 1).d_s;
      ratio[idx] = scaling_ratio(K, member);
      ms[idx] = watch.ms();
    });

    double worst_scaling = 0.0;
    bool monotone = true;
    for (std::size_t idx = 0; idx < count; ++idx) {
      const int j = j_min + static_cast<int>(idx);
      add(r, "member", s, -1, j, "d_s", d[idx], ms[idx]);
      if (ratio[idx]) {
        const double expected = base * *ratio[idx];
        const double err = std::abs(std::log(d[idx]) - std::log(expected));
        worst_scaling = std::max(worst_scaling, err);
        add(r, "member", s, -1, j, "expected", expected, ms[idx]);
        add(r, "member", s, -1, j, "log_scaling_error", err, ms[idx]);
      }
      if (idx > 0) {
        const double prev = d[idx - 1], cur = d[idx];
        switch (cfg.family->direction) {
          case CompactFamily::Direction::Outer: monotone = monotone && cur < prev; break;
          case CompactFamily::Direction::Inner: monotone = monotone && cur > prev; break;
          case CompactFamily::Direction::Constant: monotone = monotone && std::abs(cur - prev) <= 1e-12 * std::abs(prev); break;
        }
      }
    }

    // Richardson step in 1/j through the last two members.
    double limit = d.back();
    if (count >= 2) {
      const double j1 = j_max - 1, j2 = j_max;
      limit = (j2 * d[count - 1] - j1 * d[count - 2]) / (j2 - j1);
    }
    const double gap = std::abs(limit - base);
    const double last_gap = std::abs(d.back() - base);
    add(r, "limit", s, -1, -1, "d_s", limit, 0.0);
    add(r, "limit", s, -1, -1, "gap_to_base", gap, 0.0);
    add(r, "limit", s, -1, j_max, "gap_at_j_max", last_gap, 0.0);

    const std::string tag = "s = " + std::to_string(s) + ": ";
    if (!monotone) r.flags.push_back(tag + "the d_s column is not " + to_string(cfg.family->direction) + "-monotone");
    if (gap > 1e-3) r.flags.push_back(tag + "limit row " + fmt(limit) + " is " + fmt(gap) + " from the base value");
    if (worst_scaling > 1e-9) r.flags.push_back(tag + "closed-form scaling violated by " + fmt(worst_scaling) + " in log");
    r.summary["monotone_s" + std::to_string(s)] = monotone ? 1.0 : 0.0;
    r.summary["limit_gap_s" + std::to_string(s)] = gap;
    r.summary["gap_at_j_max_s" + std::to_string(s)] = last_gap;
    r.summary["max_log_scaling_error_s" + std::to_string(s)] = worst_scaling;
  }
  return r;
}

Report run_bm_ratio(const ExperimentConfig& cfg, const RunOptions& options) {
  Report r = start(cfg);
  const auto& mu = need_measure(cfg);
  const auto& degrees = need_degrees(cfg, 0);
  std::vector<double> ratio(degrees.size()), ms(degrees.size());
  parallel_for(degrees.size(), options.workers, [&](std::size_t idx) {
    Stopwatch watch;
    ratio[idx] = bernstein_markov_ratio(mu, degrees[idx], cfg.bm_grid);
    ms[idx] = watch.ms();
  });
  for (std::size_t idx = 0; idx < degrees.size(); ++idx) {
    const int s = degrees[idx];
    add(r, "bm", s, -1, -1, "ratio", ratio[idx], ms[idx]);
    add(r, "bm", s, -1, -1, "ratio_root", s > 0 ? std::pow(ratio[idx], 1.0 / s) : nan_value, ms[idx]);
    if (!std::isfinite(ratio[idx])) r.flags.push_back("s = " + std::to_string(s) + ": Gram matrix numerically singular");
  }
  return r;
}

Report run_zs_check(const ExperimentConfig& cfg, const RunOptions& options) {
  Report r = start(cfg);
  const auto& mu = need_measure(cfg);
  const auto arith = arithmetic_for(mu.is_real(), cfg.precision, false);
  double worst = 0.0;
  for (int s : need_degrees(cfg, 0)) {
    Stopwatch watch;
    const LogDet zg = arith == Arithmetic::High     ? z_s_gram<HighReal>(mu, s)
                      : arith == Arithmetic::Double ? z_s_gram<double>(mu, s)
                                                    : z_s_gram<Complex>(mu, s);
    const auto mc = z_s_montecarlo(mu, s, cfg.samples, derive_seed(cfg.seed, static_cast<std::uint64_t>(s)), options.workers);
    const double ms = watch.ms();

    const double zg_value = std::exp(zg.log_abs), mc_value = mc.mean(), se = mc.std_error();
    const double diff = std::abs(zg_value - mc_value);
    const double sigma = diff == 0.0 ? 0.0 : se > 0.0 ? diff / se : std::numeric_limits<double>::infinity();
    worst = std::max(worst, sigma);
    add(r, "zs", s, -1, -1, "log_z_gram", zg.log_abs, ms);
    add(r, "zs", s, -1, -1, "log_z_mc", mc.log_mean, ms);
    add(r, "zs", s, -1, -1, "log_std_error", mc.log_std_error, ms);
    add(r, "zs", s, -1, -1, "z_gram", zg_value, ms);
    add(r, "zs", s, -1, -1, "z_mc", mc_value, ms);
    add(r, "zs", s, -1, -1, "std_error", se, ms);
    add(r, "zs", s, -1, -1, "sigma", sigma, ms);
    if (!(sigma <= 3.0))
      r.flags.push_back("s = " + std::to_string(s) + ": Gram and Monte Carlo values differ by " + fmt(sigma) + " standard errors");
  }
  r.summary["max_sigma"] = worst;
  return r;
}

Report run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
  if (options.workers < 1) throw std::invalid_argument("workers must be >= 1");
  Stopwatch watch;
  Report r;
  switch (cfg.kind) {
    case ExperimentKind::TDiam: r = run_tdiam(cfg, options); break;
    case ExperimentKind::Fekete: r = run_fekete(cfg, options); break;
    case ExperimentKind::Hankel: r = run_hankel(cfg, options); break;
    case ExperimentKind::PolyaCheck: r = run_polya_check(cfg, options); break;
    case ExperimentKind::Sharpness: r = run_sharpness(cfg, options); break;
    case ExperimentKind::Stability: r = run_stability(cfg, options); break;
    case ExperimentKind::BmRatio: r = run_bm_ratio(cfg, options); break;
    case ExperimentKind::ZsCheck: r = run_zs_check(cfg, options); break;
  }
  r.wall_ms = watch.ms();
  return r;
}

}  // namespace polya
