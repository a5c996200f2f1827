#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "ambsee/scenario.hpp"

namespace ambsee {

/// BD reflection coefficients, each in [0, 1].
class ReflectionVector {
 public:
  ReflectionVector() = default;
  explicit ReflectionVector(std::vector<double> rho) : rho_(std::move(rho)) {
    for (double r : rho_) {
      if (!(r >= 0.0 && r <= 1.0)) throw std::domain_error("reflection coefficient outside [0, 1]");
    }
  }
  static ReflectionVector zeros(std::size_t m) { return ReflectionVector(std::vector<double>(m, 0.0)); }
  static ReflectionVector ones(std::size_t m) { return ReflectionVector(std::vector<double>(m, 1.0)); }

  std::size_t size() const { return rho_.size(); }
  double operator[](std::size_t m) const { return rho_[m]; }
  std::span<const double> values() const { return rho_; }
  const std::vector<double>& vector() const { return rho_; }

  friend bool operator==(const ReflectionVector&, const ReflectionVector&) = default;

 private:
  std::vector<double> rho_;
};

/// Effective channel gains normalized by the receiver noise, per user (in the
/// scenario's user order) and for the eavesdropper.
struct NormalizedGains {
  std::vector<double> user;
  double eav = 0.0;
  std::size_t bd_count = 0;  // 0: direct gains only, 1: single BD, >=2: multi-BD

  std::size_t user_count() const { return user.size(); }
};

/// Noise-normalized amplitudes: direct G_k = h_k / sigma_k and composite
/// G_mk = g_m g_mk / sigma_k, with the eavesdropper handled as one more node.
struct NormalizedAmplitudes {
  std::vector<double> direct;                 // G_k
  double direct_eav = 0.0;                    // G_e
  std::vector<std::vector<double>> via_bd;    // [m][k] G_mk
  std::vector<double> via_bd_eav;             // [m] G_me
};

inline NormalizedAmplitudes normalized_amplitudes(const Scenario& s) {
  s.check_shape();
  NormalizedAmplitudes a;
  const std::size_t k = s.user_count();
  const std::size_t m = s.bd_count();
  a.direct.resize(k);
  for (std::size_t i = 0; i < k; ++i) a.direct[i] = s.h[i] / std::sqrt(s.noise_user[i]);
  const double sigma_e = std::sqrt(s.noise_eav);
  a.direct_eav = s.h_e / sigma_e;
  a.via_bd.assign(m, std::vector<double>(k));
  a.via_bd_eav.resize(m);
  for (std::size_t b = 0; b < m; ++b) {
    for (std::size_t i = 0; i < k; ++i) a.via_bd[b][i] = s.g[b] * s.bd_user[b][i] / std::sqrt(s.noise_user[i]);
    a.via_bd_eav[b] = s.g[b] * s.bd_eav[b] / sigma_e;
  }
  return a;
}

/// H_node = (h_node + sum_m sqrt(rho_m) g_m g_m,node)^2 / sigma_node^2 for
/// every user and for the eavesdropper, which sees both the direct and the
/// backscattered paths.
inline NormalizedGains effective_gains(const Scenario& s, const ReflectionVector& rho) {
  s.check_shape();
  if (rho.size() != s.bd_count()) throw std::invalid_argument("effective_gains: reflection vector size != BD count");
  NormalizedGains out;
  out.bd_count = s.bd_count();
  const std::size_t k = s.user_count();
  out.user.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    double amp = s.h[i];
    for (std::size_t b = 0; b < s.bd_count(); ++b) amp += std::sqrt(rho[b]) * s.g[b] * s.bd_user[b][i];
    out.user[i] = amp * amp / s.noise_user[i];
  }
  double amp = s.h_e;
  for (std::size_t b = 0; b < s.bd_count(); ++b) amp += std::sqrt(rho[b]) * s.g[b] * s.bd_eav[b];
  out.eav = amp * amp / s.noise_eav;
  return out;
}

inline NormalizedGains direct_gains(const Scenario& s) {
  NormalizedGains out = effective_gains(with_bd_prefix(s, 0), ReflectionVector{});
  out.bd_count = 0;
  return out;
}

}  // namespace ambsee
