#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ambsee/config.hpp"
#include "ambsee/rng.hpp"

namespace ambsee {

/// One random drop: node geometry (transmitter at the origin) and the
/// deterministic line-of-sight channel amplitudes derived from it.
///
/// Amplitudes follow d^(-gamma/2) so that squared amplitudes carry the
/// d^(-gamma) power law. `bd_user[m][k]` is the BD m -> user k link.
struct Scenario {
  std::vector<Point> users;
  std::vector<Point> bds;
  Point eavesdropper;

  std::vector<double> h;                     // TX -> user k
  double h_e = 0.0;                          // TX -> eavesdropper
  std::vector<double> g;                     // TX -> BD m
  std::vector<std::vector<double>> bd_user;  // BD m -> user k
  std::vector<double> bd_eav;                // BD m -> eavesdropper

  std::vector<double> noise_user;  // sigma_k^2 (W)
  double noise_eav = 0.0;          // sigma_e^2 (W)

  std::size_t user_count() const { return h.size(); }
  std::size_t bd_count() const { return g.size(); }

  void check_shape() const {
    const std::size_t k = h.size();
    const std::size_t m = g.size();
    if (users.size() != k || noise_user.size() != k) throw std::invalid_argument("scenario: user arrays disagree");
    if (bds.size() != m || bd_user.size() != m || bd_eav.size() != m)
      throw std::invalid_argument("scenario: BD arrays disagree");
    for (const auto& row : bd_user) {
      if (row.size() != k) throw std::invalid_argument("scenario: BD->user row has wrong length");
    }
  }
};

inline double pathloss_amplitude(double d, double gamma) { return std::pow(d, -gamma / 2.0); }

namespace detail {

inline Point uniform_in_disk(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = radius * std::sqrt(unit(rng));
  const double phi = 2.0 * std::numbers::pi * unit(rng);
  return {r * std::cos(phi), r * std::sin(phi)};
}

inline bool respects_floor(const std::vector<Point>& nodes, double floor) {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      if (distance(nodes[i], nodes[j]) < floor) return false;
    }
  }
  return true;
}

}  // namespace detail

/// Recomputes every channel amplitude from the node positions.
inline void apply_pathloss(Scenario& s, double gamma) {
  const Point tx{};
  const std::size_t k = s.users.size();
  const std::size_t m = s.bds.size();
  s.h.resize(k);
  for (std::size_t i = 0; i < k; ++i) s.h[i] = pathloss_amplitude(distance(tx, s.users[i]), gamma);
  s.h_e = pathloss_amplitude(distance(tx, s.eavesdropper), gamma);
  s.g.resize(m);
  s.bd_user.assign(m, std::vector<double>(k));
  s.bd_eav.resize(m);
  for (std::size_t b = 0; b < m; ++b) {
    s.g[b] = pathloss_amplitude(distance(tx, s.bds[b]), gamma);
    for (std::size_t i = 0; i < k; ++i) s.bd_user[b][i] = pathloss_amplitude(distance(s.bds[b], s.users[i]), gamma);
    s.bd_eav[b] = pathloss_amplitude(distance(s.bds[b], s.eavesdropper), gamma);
  }
}

/// Draws the drop for (cfg.seed, trial_index, attempt). The whole drop is
/// redrawn if any two nodes are closer than cfg.min_distance. Comparisons
/// across BD counts should generate once with the largest count and truncate
/// with `with_bd_prefix`.
inline Scenario generate_scenario(const NetworkConfig& cfg, std::uint64_t trial_index, std::uint64_t attempt = 0) {
  cfg.validate();
  auto rng = make_stream(cfg.seed, trial_index, Stream::Geometry, attempt);
  Scenario s;
  const Point tx{};
  for (;;) {
    s.users.clear();
    s.bds.clear();
    for (std::size_t i = 0; i < cfg.user_count; ++i) s.users.push_back(detail::uniform_in_disk(rng, cfg.user_radius));
    s.eavesdropper = cfg.eav_placement == EavesdropperPlacement::Fixed ? cfg.eav_fixed
                                                                        : detail::uniform_in_disk(rng, cfg.user_radius);
    for (std::size_t b = 0; b < cfg.bd_count; ++b) s.bds.push_back(detail::uniform_in_disk(rng, cfg.bd_radius));

    std::vector<Point> nodes{tx};
    nodes.insert(nodes.end(), s.users.begin(), s.users.end());
    nodes.insert(nodes.end(), s.bds.begin(), s.bds.end());
    nodes.push_back(s.eavesdropper);
    if (detail::respects_floor(nodes, cfg.min_distance)) break;
    if (cfg.eav_placement == EavesdropperPlacement::Fixed && distance(tx, cfg.eav_fixed) < cfg.min_distance) {
      throw std::invalid_argument("fixed eavesdropper position is closer than min_distance to the transmitter");
    }
  }
  apply_pathloss(s, cfg.pathloss_exponent);
  s.noise_user.assign(cfg.user_count, cfg.noise_power);
  s.noise_eav = cfg.eav_noise_power;
  return s;
}

/// Keeps the first `m` BDs of a drop.
inline Scenario with_bd_prefix(Scenario s, std::size_t m) {
  if (m > s.bd_count()) throw std::invalid_argument("with_bd_prefix: not enough BDs in scenario");
  s.bds.resize(m);
  s.g.resize(m);
  s.bd_user.resize(m);
  s.bd_eav.resize(m);
  return s;
}

inline Scenario with_noise(Scenario s, double noise_user, double noise_eav) {
  std::fill(s.noise_user.begin(), s.noise_user.end(), noise_user);
  s.noise_eav = noise_eav;
  return s;
}

struct UserOrdering {
  std::vector<std::size_t> permutation;  // permutation[i] = original index of the i-th weakest user
  std::size_t eav_rank = 1;              // 1-based: exactly eav_rank - 1 users sit at or below the eavesdropper
};

/// Sorts users by ascending direct normalized gain h_k^2 / sigma_k^2 (ties by
/// original index) and locates the eavesdropper in that order. A user whose
/// direct gain equals the eavesdropper's counts as below it.
inline UserOrdering order_users(const Scenario& s) {
  const std::size_t k = s.user_count();
  std::vector<double> direct(k);
  for (std::size_t i = 0; i < k; ++i) direct[i] = s.h[i] * s.h[i] / s.noise_user[i];
  const double eav = s.h_e * s.h_e / s.noise_eav;

  UserOrdering out;
  out.permutation.resize(k);
  std::iota(out.permutation.begin(), out.permutation.end(), std::size_t{0});
  std::stable_sort(out.permutation.begin(), out.permutation.end(),
                   [&](std::size_t a, std::size_t b) { return direct[a] < direct[b]; });
  out.eav_rank = 1 + static_cast<std::size_t>(std::count_if(direct.begin(), direct.end(), [&](double v) { return v <= eav; }));
  return out;
}

/// Returns the drop with users re-indexed so that user i is perm[i] of `s`.
inline Scenario permute_users(const Scenario& s, const std::vector<std::size_t>& perm) {
  if (perm.size() != s.user_count()) throw std::invalid_argument("permute_users: permutation size mismatch");
  Scenario out = s;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    out.users[i] = s.users[perm[i]];
    out.h[i] = s.h[perm[i]];
    out.noise_user[i] = s.noise_user[perm[i]];
    for (std::size_t b = 0; b < s.bd_count(); ++b) out.bd_user[b][i] = s.bd_user[b][perm[i]];
  }
  return out;
}

/// CSV dump of the geometry: node_id,role,x,y (transmitter first).
inline void write_scenario_csv(std::ostream& os, const Scenario& s) {
  os << "node_id,role,x,y\n";
  os.precision(17);
  os << "tx,transmitter,0,0\n";
  for (std::size_t i = 0; i < s.users.size(); ++i)
    os << "user_" << i + 1 << ",user," << s.users[i].x << ',' << s.users[i].y << '\n';
  for (std::size_t b = 0; b < s.bds.size(); ++b)
    os << "bd_" << b + 1 << ",backscatter," << s.bds[b].x << ',' << s.bds[b].y << '\n';
  os << "eav,eavesdropper," << s.eavesdropper.x << ',' << s.eavesdropper.y << '\n';
}

}  // namespace ambsee
