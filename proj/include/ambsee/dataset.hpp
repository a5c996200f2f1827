#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ambsee/parallel.hpp"
#include "ambsee/solve.hpp"

namespace ambsee {

/// Column names of a dataset with K users and M BDs:
/// h_1..h_K, h_e, g_1..g_M, g_11..g_MK (BD-major), g_1e..g_Me, then the
/// labels p_1..p_K, rho_1..rho_M and zeta.
inline std::vector<std::string> dataset_feature_columns(std::size_t k, std::size_t m) {
  std::vector<std::string> cols;
  for (std::size_t i = 1; i <= k; ++i) cols.push_back("h_" + std::to_string(i));
  cols.push_back("h_e");
  for (std::size_t b = 1; b <= m; ++b) cols.push_back("g_" + std::to_string(b));
  for (std::size_t b = 1; b <= m; ++b) {
    for (std::size_t i = 1; i <= k; ++i) cols.push_back("g_" + std::to_string(b) + std::to_string(i));
  }
  for (std::size_t b = 1; b <= m; ++b) cols.push_back("g_" + std::to_string(b) + "e");
  return cols;
}

inline std::vector<std::string> dataset_columns(std::size_t k, std::size_t m) {
  std::vector<std::string> cols = dataset_feature_columns(k, m);
  for (std::size_t i = 1; i <= k; ++i) cols.push_back("p_" + std::to_string(i));
  for (std::size_t b = 1; b <= m; ++b) cols.push_back("rho_" + std::to_string(b));
  cols.push_back("zeta");
  return cols;
}

/// One labelled drop. Channel amplitudes and powers are in SIC order
/// (user 1 is the weakest).
struct DatasetRow {
  std::vector<double> h;
  double h_e = 0.0;
  std::vector<double> g;
  std::vector<std::vector<double>> bd_user;  // [m][k]
  std::vector<double> bd_eav;
  std::vector<double> p;
  std::vector<double> rho;
  double zeta = 0.0;

  std::vector<double> flatten() const {
    std::vector<double> v(h.begin(), h.end());
    v.push_back(h_e);
    v.insert(v.end(), g.begin(), g.end());
    for (const auto& row : bd_user) v.insert(v.end(), row.begin(), row.end());
    v.insert(v.end(), bd_eav.begin(), bd_eav.end());
    v.insert(v.end(), p.begin(), p.end());
    v.insert(v.end(), rho.begin(), rho.end());
    v.push_back(zeta);
    return v;
  }
};

inline DatasetRow dataset_row(const Problem& pb, const SolveResult& r) {
  const Scenario& s = pb.scenario;
  DatasetRow row;
  row.h = s.h;
  row.h_e = s.h_e;
  row.g = s.g;
  row.bd_user = s.bd_user;
  row.bd_eav = s.bd_eav;
  row.p = r.p.values();
  row.rho = r.rho.vector();
  row.zeta = r.objective.zeta;
  return row;
}

struct ExportStats {
  std::size_t rows = 0;
  std::size_t resampled = 0;
  std::size_t dropped = 0;  // trials with no feasible drop within max_attempts
};

/// Solves n drops (trial indices 0..n-1 of cfg.seed, redrawing infeasible
/// ones) and writes one CSV row per solved drop.
inline ExportStats export_dataset(const NetworkConfig& cfg, std::size_t n_samples, const SolveOptions& opt,
                                  std::ostream& os, unsigned jobs = 1, std::size_t max_attempts = 1000) {
  cfg.validate();
  std::vector<std::optional<DatasetRow>> rows(n_samples);
  std::vector<std::size_t> redraws(n_samples, 0);
  parallel_for(n_samples, jobs, [&](std::size_t t) {
    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
      const Problem pb = Problem::from(generate_scenario(cfg, t, attempt), cfg);
      SolveOptions o = opt;
      o.pso.seed = cfg.seed;
      o.pso.stream = (static_cast<std::uint64_t>(t) << 24) | (static_cast<std::uint64_t>(attempt) << 4);
      const SolveResult r = solve(pb, o);
      if (r.feasible) {
        rows[t] = dataset_row(pb, r);
        return;
      }
      ++redraws[t];
    }
  });

  ExportStats stats;
  const auto cols = dataset_columns(cfg.user_count, cfg.bd_count);
  for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c];
  os << '\n';
  os.precision(17);
  for (std::size_t t = 0; t < n_samples; ++t) {
    stats.resampled += redraws[t];
    if (!rows[t]) {
      ++stats.dropped;
      continue;
    }
    const auto v = rows[t]->flatten();
    for (std::size_t c = 0; c < v.size(); ++c) os << (c ? "," : "") << v[c];
    os << '\n';
    ++stats.rows;
  }
  if (!os) throw std::runtime_error("dataset: write failed");
  return stats;
}

struct Dataset {
  std::size_t user_count = 0;
  std::size_t bd_count = 0;
  std::vector<DatasetRow> rows;
};

/// Parses a dataset CSV; K and M are recovered from the header, which must
/// match the documented column layout exactly.
inline Dataset read_dataset(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("dataset: missing header");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  Dataset d;
  for (const auto& c : header) {
    if (c.size() > 2 && c.rfind("p_", 0) == 0) ++d.user_count;
    if (c.rfind("rho_", 0) == 0) ++d.bd_count;
  }
  if (header != dataset_columns(d.user_count, d.bd_count)) throw std::invalid_argument("dataset: unexpected header");
  const std::size_t k = d.user_count;
  const std::size_t m = d.bd_count;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    if (v.size() != header.size()) throw std::invalid_argument("dataset: row has wrong number of fields");
    DatasetRow r;
    std::size_t i = 0;
    auto take = [&](std::size_t n) {
      std::vector<double> out(v.begin() + static_cast<std::ptrdiff_t>(i), v.begin() + static_cast<std::ptrdiff_t>(i + n));
      i += n;
      return out;
    };
    r.h = take(k);
    r.h_e = take(1)[0];
    r.g = take(m);
    for (std::size_t b = 0; b < m; ++b) r.bd_user.push_back(take(k));
    r.bd_eav = take(m);
    r.p = take(k);
    r.rho = take(m);
    r.zeta = take(1)[0];
    d.rows.push_back(std::move(r));
  }
  return d;
}

/// zeta recomputed from the stored features and labels.
inline double reevaluate_zeta(const DatasetRow& row, double noise_power, double eav_noise_power, double p_circuit) {
  Scenario s;
  s.h = row.h;
  s.h_e = row.h_e;
  s.g = row.g;
  s.bd_user = row.bd_user;
  s.bd_eav = row.bd_eav;
  s.users.resize(row.h.size());
  s.bds.resize(row.g.size());
  s.noise_user.assign(row.h.size(), noise_power);
  s.noise_eav = eav_noise_power;
  const NormalizedGains H = effective_gains(s, ReflectionVector(row.rho));
  return objectives(H, PowerAllocation(row.p), 0.0, p_circuit).zeta;
}

}  // namespace ambsee
