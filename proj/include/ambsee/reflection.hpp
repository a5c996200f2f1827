#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "ambsee/channel.hpp"

namespace ambsee {

/// Single-BD reflection coefficient for users in SIC order: reflect fully
/// when the backscattered amplitude g g_k / sigma_k strictly grows along the
/// SIC order, otherwise switch the BD off. Independent of the powers.
inline double optimal_rho_single(const Scenario& sorted) {
  if (sorted.bd_count() != 1) throw std::invalid_argument("optimal_rho_single requires exactly one BD");
  const NormalizedAmplitudes a = normalized_amplitudes(sorted);
  const auto& via = a.via_bd[0];
  for (std::size_t k = 0; k + 1 < via.size(); ++k) {
    if (!(via[k + 1] > via[k])) return 0.0;
  }
  return 1.0;
}

/// Two-user / two-BD amplitudes (users in SIC order, so G2 >= G1).
struct TwoBdGeometry {
  double G1 = 0.0, G2 = 0.0, Ge = 0.0;
  double G11 = 0.0, G12 = 0.0, G1e = 0.0;  // via BD 1
  double G21 = 0.0, G22 = 0.0, G2e = 0.0;  // via BD 2

  static TwoBdGeometry from(const Scenario& sorted) {
    if (sorted.user_count() != 2 || sorted.bd_count() != 2)
      throw std::invalid_argument("TwoBdGeometry requires K = 2 and M = 2");
    const NormalizedAmplitudes a = normalized_amplitudes(sorted);
    TwoBdGeometry g;
    g.G1 = a.direct[0];
    g.G2 = a.direct[1];
    g.Ge = a.direct_eav;
    g.G11 = a.via_bd[0][0];
    g.G12 = a.via_bd[0][1];
    g.G1e = a.via_bd_eav[0];
    g.G21 = a.via_bd[1][0];
    g.G22 = a.via_bd[1][1];
    g.G2e = a.via_bd_eav[1];
    return g;
  }

  /// The same geometry with BD 1 and BD 2 exchanged.
  TwoBdGeometry swapped() const {
    TwoBdGeometry s = *this;
    std::swap(s.G11, s.G21);
    std::swap(s.G12, s.G22);
    std::swap(s.G1e, s.G2e);
    return s;
  }
};

/// End points of the SIC boundary sqrt(rho1) (G11 - G12) + sqrt(rho2) (G21 - G22) = G2 - G1.
/// A pair is empty when its denominator vanishes.
struct BoundaryPoints {
  std::optional<double> rho1_inf;  // rho1 on the boundary at rho2 = 0
  std::optional<double> rho1_sup;  // rho1 on the boundary at rho2 = 1
  std::optional<double> rho2_inf;
  std::optional<double> rho2_sup;
};

inline BoundaryPoints boundary_points(const TwoBdGeometry& g) {
  BoundaryPoints b;
  const double gap = g.G2 - g.G1;
  const double d1 = g.G11 - g.G12;
  const double d2 = g.G21 - g.G22;
  auto sq = [](double v) { return v * v; };
  if (d1 != 0.0) {
    b.rho1_inf = sq(gap / d1);
    b.rho1_sup = sq((gap - d2) / d1);
  }
  if (d2 != 0.0) {
    b.rho2_inf = sq(gap / d2);
    b.rho2_sup = sq((gap - d1) / d2);
  }
  return b;
}

enum class TwoBdBranch { Primary, Swapped, Degenerate };

/// Sub-case labels of the two-BD analysis, written from the point of view of
/// the favoured BD (BD 1 on the primary branch, BD 2 on the swapped one).
enum class TwoBdCase { H1, H21, H221, H222, H31, H321, H322, H4, None };

inline const char* to_string(TwoBdCase c) {
  switch (c) {
    case TwoBdCase::H1: return "H1";
    case TwoBdCase::H21: return "H21";
    case TwoBdCase::H221: return "H221";
    case TwoBdCase::H222: return "H222";
    case TwoBdCase::H31: return "H31";
    case TwoBdCase::H321: return "H321";
    case TwoBdCase::H322: return "H322";
    case TwoBdCase::H4: return "H4";
    case TwoBdCase::None: return "none";
  }
  return "?";
}

struct TwoBdSolution {
  double rho1 = 0.0;
  double rho2 = 0.0;
  TwoBdBranch branch = TwoBdBranch::Degenerate;
  TwoBdCase sub_case = TwoBdCase::None;
  BoundaryPoints points;

  std::string tag() const {
    if (branch == TwoBdBranch::Degenerate) return "degenerate";
    return std::string(branch == TwoBdBranch::Primary ? "i." : "ii.") + to_string(sub_case);
  }
};

namespace detail {

inline bool nearly_equal(double a, double b, double rel = 1e-12) {
  return std::abs(a - b) <= rel * std::max({std::abs(a), std::abs(b), 1e-300});
}

/// Primary-branch rule, favoured BD = BD 1.
inline TwoBdSolution two_bd_primary(const TwoBdGeometry& g) {
  TwoBdSolution s;
  s.branch = TwoBdBranch::Primary;
  s.points = boundary_points(g);
  const double d1 = g.G11 - g.G12;
  const double d2 = g.G21 - g.G22;
  if (d1 <= 0.0 && d2 <= 0.0) {
    s.sub_case = TwoBdCase::H1;
    s.rho1 = 1.0;
  } else if (d1 > 0.0 && d2 <= 0.0) {
    const double inf1 = *s.points.rho1_inf;
    const double sup1 = *s.points.rho1_sup;
    s.sub_case = inf1 > 1.0 ? TwoBdCase::H21 : (sup1 > 1.0 ? TwoBdCase::H221 : TwoBdCase::H222);
    s.rho1 = std::min(1.0, inf1);
  } else if (d1 <= 0.0 && d2 > 0.0) {
    const double inf2 = *s.points.rho2_inf;
    const double sup2 = *s.points.rho2_sup;
    s.sub_case = inf2 > 1.0 ? TwoBdCase::H31 : (sup2 > 1.0 ? TwoBdCase::H321 : TwoBdCase::H322);
    s.rho1 = 1.0;
  } else {
    s.sub_case = TwoBdCase::H4;
    s.rho1 = std::min(1.0, *s.points.rho1_inf);
  }
  s.rho2 = 0.0;
  return s;
}

}  // namespace detail

/// Reflection pair for K = 2, M = 2. On the primary branch
/// (G12/G1e > G22/G2e) the secrecy sum-rate grows with rho1 and falls with
/// rho2, so the optimum is rho2 = 0 with rho1 pushed to the SIC boundary or to
/// 1. The swapped branch mirrors the roles. Equalities between the ratios
/// G12/G1e, G22/G2e and G2/Ge are reported as degenerate.
inline TwoBdSolution optimal_rho_two_bd(const TwoBdGeometry& g) {
  const double r1 = g.G12 / g.G1e;
  const double r2 = g.G22 / g.G2e;
  const double r0 = g.G2 / g.Ge;
  TwoBdSolution out;
  if (detail::nearly_equal(r1, r2) || detail::nearly_equal(r2, r0) || detail::nearly_equal(r1, r0)) {
    out.branch = TwoBdBranch::Degenerate;
    out.points = boundary_points(g);
    return out;
  }
  if (r1 > r2) return detail::two_bd_primary(g);

  TwoBdSolution mirrored = detail::two_bd_primary(g.swapped());
  out = mirrored;
  out.branch = TwoBdBranch::Swapped;
  out.rho1 = mirrored.rho2;
  out.rho2 = mirrored.rho1;
  out.points = boundary_points(g);
  return out;
}

}  // namespace ambsee
