#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ambsee/config.hpp"
#include "ambsee/oma.hpp"
#include "ambsee/parallel.hpp"
#include "ambsee/solve.hpp"
#include "ambsee/units.hpp"

namespace ambsee {

enum class Scheme { NomaPure, Noma1Bd, Noma2Bd, Noma3Bd, Noma4Bd, Oma2Bd };

inline const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::NomaPure: return "NOMA-pure";
    case Scheme::Noma1Bd: return "NOMA+1BD";
    case Scheme::Noma2Bd: return "NOMA+2BD";
    case Scheme::Noma3Bd: return "NOMA+3BD";
    case Scheme::Noma4Bd: return "NOMA+4BD";
    case Scheme::Oma2Bd: return "OMA+2BD";
  }
  return "?";
}

inline Scheme parse_scheme(std::string_view s) {
  for (Scheme c : {Scheme::NomaPure, Scheme::Noma1Bd, Scheme::Noma2Bd, Scheme::Noma3Bd, Scheme::Noma4Bd,
                   Scheme::Oma2Bd}) {
    if (s == to_string(c)) return c;
  }
  throw std::invalid_argument("unknown scheme '" + std::string(s) + "'");
}

inline std::size_t bd_count(Scheme s) {
  switch (s) {
    case Scheme::NomaPure: return 0;
    case Scheme::Noma1Bd: return 1;
    case Scheme::Noma2Bd: return 2;
    case Scheme::Noma3Bd: return 3;
    case Scheme::Noma4Bd: return 4;
    case Scheme::Oma2Bd: return 2;
  }
  return 0;
}

inline bool is_oma(Scheme s) { return s == Scheme::Oma2Bd; }

enum class SweepVariable { PMax, RMin, NoisePower, EavPosition, CsiErrorVar };

inline const char* to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::PMax: return "p_max";
    case SweepVariable::RMin: return "r_min";
    case SweepVariable::NoisePower: return "noise_power";
    case SweepVariable::EavPosition: return "eav_position";
    case SweepVariable::CsiErrorVar: return "csi_error_var";
  }
  return "?";
}

inline SweepVariable parse_sweep_variable(std::string_view s) {
  for (SweepVariable v : {SweepVariable::PMax, SweepVariable::RMin, SweepVariable::NoisePower,
                          SweepVariable::EavPosition, SweepVariable::CsiErrorVar}) {
    if (s == to_string(v)) return v;
  }
  throw std::invalid_argument("unknown sweep variable '" + std::string(s) + "'");
}

struct SweepSpec {
  SweepVariable variable = SweepVariable::PMax;
  std::vector<double> values;            // W for p_max and noise_power, bits/s/Hz for r_min, sigma_eps^2 for csi
  std::vector<Point> positions;          // eavesdropper positions for eav_position
  std::size_t lattice = 0;               // eav_position without positions: n x n lattice over the user disk
  std::vector<Scheme> schemes;
  std::vector<std::size_t> user_counts;  // K values for csi_error_var
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  std::optional<Method> method;          // grid or pso for every BD-assisted NOMA scheme
  std::size_t max_attempts = 1000;
  GridConfig grid{};
  PsoConfig pso{};

  std::size_t point_count() const {
    if (variable != SweepVariable::EavPosition) return values.size();
    return positions.empty() ? lattice * lattice : positions.size();
  }

  void validate() const {
    if (point_count() == 0) throw std::invalid_argument("sweep: no sweep values");
    if (trials < 1) throw std::invalid_argument("sweep: trials must be >= 1");
    if (max_attempts < 1) throw std::invalid_argument("sweep: max_attempts must be >= 1");
    if (variable != SweepVariable::CsiErrorVar && schemes.empty()) throw std::invalid_argument("sweep: no schemes");
    for (double v : values) {
      if (!std::isfinite(v)) throw std::invalid_argument("sweep: non-finite value");
      if (variable == SweepVariable::RMin || variable == SweepVariable::CsiErrorVar) {
        if (v < 0.0) throw std::invalid_argument("sweep: value must be >= 0");
      } else if (v <= 0.0) {
        throw std::invalid_argument("sweep: value must be > 0");
      }
    }
  }
};

/// Lattice of n x n points over the disk of the given radius, keeping points
/// inside the disk and at least `clearance` from the transmitter.
inline std::vector<Point> disk_lattice(double radius, std::size_t n, double clearance) {
  std::vector<Point> pts;
  if (n == 0) return pts;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double x = n == 1 ? 0.0 : -radius + 2.0 * radius * static_cast<double>(j) / static_cast<double>(n - 1);
      const double y = n == 1 ? 0.0 : -radius + 2.0 * radius * static_cast<double>(i) / static_cast<double>(n - 1);
      const double r = std::hypot(x, y);
      if (r <= radius * (1.0 + 1e-12) && r >= clearance) pts.push_back({x, y});
    }
  }
  return pts;
}

inline void from_json(const nlohmann::json& j, SweepSpec& s) {
  static const char* known[] = {"variable", "values", "positions", "grid_points", "schemes", "k_list", "trials",
                                "seed",     "method", "max_attempts", "pso", "grid"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return it.key() == k; }) ==
        std::end(known))
      throw std::invalid_argument("sweep spec: unknown key '" + it.key() + "'");
  }
  s.variable = parse_sweep_variable(j.at("variable").get<std::string>());
  const bool power_valued = s.variable == SweepVariable::PMax || s.variable == SweepVariable::NoisePower;
  if (j.contains("values")) {
    s.values.clear();
    for (const auto& v : j.at("values")) {
      if (power_valued && v.is_string()) {
        s.values.push_back(parse_power(v.get<std::string>()));
      } else {
        s.values.push_back(v.get<double>());
      }
    }
  }
  if (j.contains("positions")) {
    s.positions.clear();
    for (const auto& p : j.at("positions")) s.positions.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  }
  if (j.contains("grid_points")) s.lattice = j.at("grid_points").get<std::size_t>();
  if (j.contains("schemes")) {
    s.schemes.clear();
    for (const auto& name : j.at("schemes")) s.schemes.push_back(parse_scheme(name.get<std::string>()));
  }
  if (j.contains("k_list")) s.user_counts = j.at("k_list").get<std::vector<std::size_t>>();
  if (j.contains("trials")) s.trials = j.at("trials").get<std::size_t>();
  if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("method")) {
    const Method m = parse_method(j.at("method").get<std::string>());
    if (m != Method::ClosedForm) s.method = m;
  }
  if (j.contains("max_attempts")) s.max_attempts = j.at("max_attempts").get<std::size_t>();
  if (j.contains("pso")) {
    const auto& p = j.at("pso");
    if (p.contains("particles")) s.pso.particles = p.at("particles").get<std::size_t>();
    if (p.contains("max_iterations")) s.pso.max_iterations = p.at("max_iterations").get<std::size_t>();
  }
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    if (g.contains("coarse_step")) s.grid.coarse_step = g.at("coarse_step").get<double>();
    if (g.contains("fine_step")) s.grid.fine_step = g.at("fine_step").get<double>();
    if (g.contains("fine_halfwidth")) s.grid.fine_halfwidth = g.at("fine_halfwidth").get<double>();
  }
}

/// Solver used for a scheme: exact where a closed form exists, PSO otherwise,
/// unless a search method is forced.
inline Method method_for(Scheme s, std::size_t user_count, const std::optional<Method>& forced) {
  const std::size_t m = bd_count(s);
  if (is_oma(s)) return Method::Oma;
  if (m == 0) return Method::ClosedForm;
  if (forced) return *forced;
  if (m == 1 || (m == 2 && user_count == 2)) return Method::ClosedForm;
  return Method::Pso;
}

/// Configuration with the swept quantity set to `value`.
inline NetworkConfig config_at(NetworkConfig cfg, SweepVariable v, double value) {
  switch (v) {
    case SweepVariable::PMax: cfg.p_max = value; break;
    case SweepVariable::RMin:
      cfg.r_min = value;
      cfg.r_min_per_user.clear();
      break;
    case SweepVariable::NoisePower:
      cfg.noise_power = value;
      cfg.eav_noise_power = value;
      break;
    case SweepVariable::EavPosition:
    case SweepVariable::CsiErrorVar: break;
  }
  return cfg;
}

struct SchemeOutcome {
  bool feasible = false;
  double zeta = 0.0;
};

/// Solves one scheme on the first bd_count(s) BDs of a drop.
inline SchemeOutcome evaluate_scheme(Scheme s, const Scenario& drop, const NetworkConfig& cfg, const SweepSpec& spec,
                                     std::uint64_t trial, std::uint64_t attempt) {
  const Problem pb = Problem::from(with_bd_prefix(drop, bd_count(s)), cfg);
  const Method method = method_for(s, cfg.user_count, spec.method);
  if (method == Method::Oma) {
    const OmaResult r = oma_baseline(pb);
    return {r.feasible, r.zeta};
  }
  SolveOptions opt;
  opt.method = method;
  opt.grid = spec.grid;
  opt.pso = spec.pso;
  opt.pso.seed = spec.seed;
  opt.pso.stream = (trial << 24) | (attempt << 4) | static_cast<std::uint64_t>(s);
  const SolveResult r = solve(pb, opt);
  return {r.feasible, r.objective.zeta};
}

struct SweepRow {
  Scheme scheme = Scheme::NomaPure;
  double value = 0.0;  // swept value, or the position index for eav_position
  Point position;      // eav_position only
  double mean_zeta = 0.0;
  double stderr_zeta = 0.0;
  double rel_gain = std::numeric_limits<double>::quiet_NaN();
  std::size_t n_feasible = 0;
  std::size_t n_resampled = 0;
};

struct SweepResult {
  SweepVariable variable = SweepVariable::PMax;
  std::vector<Scheme> schemes;
  std::vector<SweepRow> rows;  // point-major, one row per (point, scheme)
  /// zeta per [point][scheme][trial]; NaN when the trial found no drop
  /// feasible for every scheme within max_attempts.
  std::vector<std::vector<std::vector<double>>> samples;

  const SweepRow& at(std::size_t point, std::size_t scheme) const { return rows.at(point * schemes.size() + scheme); }
};

namespace detail {

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
};

inline MeanStderr mean_stderr(const std::vector<double>& xs) {
  MeanStderr out;
  double sum = 0.0;
  for (double x : xs) {
    if (std::isnan(x)) continue;
    sum += x;
    ++out.n;
  }
  if (out.n == 0) {
    out.mean = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  out.mean = sum / static_cast<double>(out.n);
  if (out.n > 1) {
    double ss = 0.0;
    for (double x : xs) {
      if (!std::isnan(x)) ss += (x - out.mean) * (x - out.mean);
    }
    out.stderr_ = std::sqrt(ss / static_cast<double>(out.n - 1) / static_cast<double>(out.n));
  }
  return out;
}

}  // namespace detail

/// Monte Carlo sweep with common random numbers: trial t of every scheme and
/// every sweep point starts from the drop (seed, t). A drop is kept only if
/// every listed scheme is feasible on it; otherwise the trial is redrawn
/// (attempt 1, 2, ...) and the redraw counted. Relative gains are ratios of
/// mean zeta against NOMA-pure when that scheme is listed.
inline SweepResult run_sweep(SweepSpec spec, NetworkConfig cfg, unsigned jobs = 1) {
  if (spec.variable == SweepVariable::EavPosition && spec.positions.empty())
    spec.positions = disk_lattice(cfg.user_radius, spec.lattice, cfg.min_distance);
  spec.validate();
  if (spec.variable == SweepVariable::CsiErrorVar)
    throw std::invalid_argument("run_sweep: use imperfect_csi_experiment for csi_error_var");
  std::size_t max_bd = 0;
  for (Scheme s : spec.schemes) max_bd = std::max(max_bd, bd_count(s));
  cfg.bd_count = max_bd;
  cfg.seed = spec.seed;
  cfg.validate();

  const std::size_t n_points = spec.point_count();
  const std::size_t n_schemes = spec.schemes.size();
  SweepResult out;
  out.variable = spec.variable;
  out.schemes = spec.schemes;
  out.samples.assign(n_points, std::vector<std::vector<double>>(
                                   n_schemes, std::vector<double>(spec.trials, std::numeric_limits<double>::quiet_NaN())));
  std::vector<std::size_t> redraws(n_points * spec.trials, 0);

  // Exact solvers first, searches last.
  std::vector<std::size_t> order(n_schemes);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_partition(order.begin(), order.end(), [&](std::size_t s) {
    const Method m = method_for(spec.schemes[s], cfg.user_count, spec.method);
    return m != Method::Pso && m != Method::Grid;
  });

  parallel_for(n_points * spec.trials, jobs, [&](std::size_t task) {
    const std::size_t point = task / spec.trials;
    const std::size_t trial = task % spec.trials;
    NetworkConfig c = cfg;
    if (spec.variable == SweepVariable::EavPosition) {
      c.eav_placement = EavesdropperPlacement::Fixed;
      c.eav_fixed = spec.positions[point];
    } else {
      c = config_at(cfg, spec.variable, spec.values[point]);
    }
    std::vector<double> z(n_schemes);
    for (std::size_t attempt = 0; attempt < spec.max_attempts; ++attempt) {
      const Scenario drop = generate_scenario(c, trial, attempt);
      bool all = true;
      for (std::size_t i = 0; i < n_schemes && all; ++i) {
        const std::size_t s = order[i];
        const SchemeOutcome o = evaluate_scheme(spec.schemes[s], drop, c, spec, trial, attempt);
        all = o.feasible;
        z[s] = o.zeta;
      }
      if (all) {
        for (std::size_t s = 0; s < n_schemes; ++s) out.samples[point][s][trial] = z[s];
        return;
      }
      ++redraws[task];
    }
  });

  std::optional<std::size_t> pure;
  for (std::size_t s = 0; s < n_schemes; ++s) {
    if (spec.schemes[s] == Scheme::NomaPure) {
      pure = s;
      break;
    }
  }
  for (std::size_t point = 0; point < n_points; ++point) {
    std::size_t resampled = 0;
    for (std::size_t t = 0; t < spec.trials; ++t) resampled += redraws[point * spec.trials + t];
    const double base = pure ? detail::mean_stderr(out.samples[point][*pure]).mean : 0.0;
    for (std::size_t s = 0; s < n_schemes; ++s) {
      const detail::MeanStderr ms = detail::mean_stderr(out.samples[point][s]);
      SweepRow row;
      row.scheme = spec.schemes[s];
      if (spec.variable == SweepVariable::EavPosition) {
        row.value = static_cast<double>(point);
        row.position = spec.positions[point];
      } else {
        row.value = spec.values[point];
      }
      row.mean_zeta = ms.mean;
      row.stderr_zeta = ms.stderr_;
      row.n_feasible = ms.n;
      row.n_resampled = resampled;
      if (pure && base > 0.0) row.rel_gain = (ms.mean - base) / base;
      out.rows.push_back(row);
    }
  }
  return out;
}

namespace detail {

inline void write_number(std::ostream& os, double v) {
  if (std::isnan(v)) {
    os << "nan";
  } else {
    os << v;
  }
}

}  // namespace detail

/// scheme,sweep_value,mean_zeta,stderr,rel_gain,n_feasible,n_resampled
inline void write_sweep_csv(std::ostream& os, const SweepResult& r) {
  os.precision(12);
  os << "scheme,sweep_value,mean_zeta,stderr,rel_gain,n_feasible,n_resampled\n";
  for (const auto& row : r.rows) {
    os << to_string(row.scheme) << ',';
    detail::write_number(os, row.value);
    os << ',';
    detail::write_number(os, row.mean_zeta);
    os << ',';
    detail::write_number(os, row.stderr_zeta);
    os << ',';
    detail::write_number(os, row.rel_gain);
    os << ',' << row.n_feasible << ',' << row.n_resampled << '\n';
  }
}

/// Heat map of one scheme of an eav_position sweep:
/// x,y,mean_zeta,stderr,n_feasible,n_resampled.
inline void write_heatmap_csv(std::ostream& os, const SweepResult& r, Scheme scheme) {
  os.precision(12);
  os << "x,y,mean_zeta,stderr,n_feasible,n_resampled\n";
  for (const auto& row : r.rows) {
    if (row.scheme != scheme) continue;
    os << row.position.x << ',' << row.position.y << ',';
    detail::write_number(os, row.mean_zeta);
    os << ',';
    detail::write_number(os, row.stderr_zeta);
    os << ',' << row.n_feasible << ',' << row.n_resampled << '\n';
  }
}

struct CsiRow {
  std::size_t user_count = 0;
  double sigma_eps_sq = 0.0;
  double mean_zeta = 0.0;
  double stderr_zeta = 0.0;
  double rel_gain = std::numeric_limits<double>::quiet_NaN();  // against sigma_eps^2 = 0 when swept
  std::size_t n_feasible = 0;
  std::size_t n_resampled = 0;
};

struct CsiResult {
  std::vector<std::size_t> user_counts;
  std::vector<double> sigmas;
  std::vector<CsiRow> rows;  // user-count-major
  std::vector<std::vector<std::vector<double>>> samples;  // [K][sigma][trial]

  const CsiRow& at(std::size_t k_index, std::size_t sigma_index) const {
    return rows.at(k_index * sigmas.size() + sigma_index);
  }
};

/// Imperfect eavesdropper CSI with one BD: the design (rho*, p*) is computed
/// from the estimate h_e, then evaluated on h_e + eps with eps ~ N(0, sigma^2),
/// negative amplitudes clamped to 0. One standard normal draw per trial is
/// scaled by every sigma, so the error levels are paired.
inline CsiResult imperfect_csi_experiment(NetworkConfig cfg, const std::vector<double>& sigma_eps_sq,
                                          const std::vector<std::size_t>& user_counts, std::size_t trials,
                                          std::uint64_t seed, unsigned jobs = 1, std::size_t max_attempts = 1000) {
  if (sigma_eps_sq.empty() || user_counts.empty() || trials == 0)
    throw std::invalid_argument("imperfect_csi_experiment: empty sweep");
  for (double s : sigma_eps_sq) {
    if (!(s >= 0.0)) throw std::invalid_argument("imperfect_csi_experiment: sigma_eps^2 must be >= 0");
  }
  cfg.bd_count = 1;
  cfg.seed = seed;
  CsiResult out;
  out.user_counts = user_counts;
  out.sigmas = sigma_eps_sq;
  out.samples.assign(user_counts.size(),
                     std::vector<std::vector<double>>(sigma_eps_sq.size(),
                                                      std::vector<double>(trials, std::numeric_limits<double>::quiet_NaN())));
  std::vector<std::size_t> redraws(user_counts.size() * trials, 0);

  parallel_for(user_counts.size() * trials, jobs, [&](std::size_t task) {
    const std::size_t ki = task / trials;
    const std::size_t trial = task % trials;
    NetworkConfig c = cfg;
    c.user_count = user_counts[ki];
    c.validate();
    SolverSettings st;
    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
      const Problem pb = Problem::from(generate_scenario(c, trial, attempt), c);
      const SolveResult design = solve_closed_form(pb, st);
      if (!design.feasible) {
        ++redraws[task];
        continue;
      }
      auto rng = make_stream(seed, trial, Stream::CsiError, attempt);
      const double z = std::normal_distribution<double>(0.0, 1.0)(rng);
      for (std::size_t si = 0; si < sigma_eps_sq.size(); ++si) {
        Scenario actual = pb.scenario;
        actual.h_e = std::max(0.0, pb.scenario.h_e + std::sqrt(sigma_eps_sq[si]) * z);
        const NormalizedGains H = effective_gains(actual, design.rho);
        out.samples[ki][si][trial] = objectives(H, design.p, 0.0, pb.p_circuit).zeta;
      }
      return;
    }
  });

  std::optional<std::size_t> perfect;
  for (std::size_t si = 0; si < sigma_eps_sq.size(); ++si) {
    if (sigma_eps_sq[si] == 0.0) {
      perfect = si;
      break;
    }
  }
  for (std::size_t ki = 0; ki < user_counts.size(); ++ki) {
    std::size_t resampled = 0;
    for (std::size_t t = 0; t < trials; ++t) resampled += redraws[ki * trials + t];
    const double base = perfect ? detail::mean_stderr(out.samples[ki][*perfect]).mean : 0.0;
    for (std::size_t si = 0; si < sigma_eps_sq.size(); ++si) {
      const detail::MeanStderr ms = detail::mean_stderr(out.samples[ki][si]);
      CsiRow row;
      row.user_count = user_counts[ki];
      row.sigma_eps_sq = sigma_eps_sq[si];
      row.mean_zeta = ms.mean;
      row.stderr_zeta = ms.stderr_;
      row.n_feasible = ms.n;
      row.n_resampled = resampled;
      if (perfect && base > 0.0) row.rel_gain = (ms.mean - base) / base;
      out.rows.push_back(row);
    }
  }
  return out;
}

/// scheme,k,sweep_value,mean_zeta,stderr,rel_gain,n_feasible,n_resampled
inline void write_csi_csv(std::ostream& os, const CsiResult& r) {
  os.precision(12);
  os << "scheme,k,sweep_value,mean_zeta,stderr,rel_gain,n_feasible,n_resampled\n";
  for (const auto& row : r.rows) {
    os << to_string(Scheme::Noma1Bd) << ',' << row.user_count << ',' << row.sigma_eps_sq << ',';
    detail::write_number(os, row.mean_zeta);
    os << ',';
    detail::write_number(os, row.stderr_zeta);
    os << ',';
    detail::write_number(os, row.rel_gain);
    os << ',' << row.n_feasible << ',' << row.n_resampled << '\n';
  }
}

}  // namespace ambsee
