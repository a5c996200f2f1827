#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "ambsee/grid_search.hpp"
#include "ambsee/problem.hpp"
#include "ambsee/rng.hpp"

namespace ambsee {

struct PsoConfig {
  std::size_t particles = 30;
  std::size_t max_iterations = 100;
  double c1 = 1.5;
  double c2 = 1.5;
  double w_min = 0.4;
  double w_max = 0.9;
  double v_max = std::numbers::pi / 8.0;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  /// Graded penalty for infeasible positions (fitness = -penalty * violation).
  /// Unset: infeasible positions score -infinity.
  std::optional<double> penalty;
  /// Optional fixed start; each entry must have M components.
  std::vector<std::vector<double>> initial_positions;
  std::vector<std::vector<double>> initial_velocities;

  void validate() const {
    if (particles < 1) throw std::invalid_argument("pso: need at least one particle");
    if (!(w_min >= 0.0 && w_min <= w_max)) throw std::invalid_argument("pso: require 0 <= w_min <= w_max");
    if (!(v_max > 0.0)) throw std::invalid_argument("pso: v_max must be > 0");
    if (penalty && !(*penalty >= 0.0)) throw std::invalid_argument("pso: penalty must be >= 0");
    if (!initial_positions.empty() && initial_positions.size() != particles)
      throw std::invalid_argument("pso: initial_positions must have one entry per particle");
    if (!initial_velocities.empty() && initial_velocities.size() != particles)
      throw std::invalid_argument("pso: initial_velocities must have one entry per particle");
  }
};

/// w(t) = w_max - (w_max - w_min) (t / T_max)^2.
inline double inertia_weight(std::size_t t, const PsoConfig& cfg) {
  if (cfg.max_iterations == 0) return cfg.w_max;
  const double frac = static_cast<double>(t) / static_cast<double>(cfg.max_iterations);
  return cfg.w_max - (cfg.w_max - cfg.w_min) * frac * frac;
}

/// State after the initialization (iteration 0) and after every iteration.
struct PsoSnapshot {
  std::size_t iteration = 0;
  const std::vector<std::vector<double>>* positions = nullptr;
  const std::vector<std::vector<double>>* velocities = nullptr;
  double global_best = -std::numeric_limits<double>::infinity();
};

using PsoObserver = std::function<void(const PsoSnapshot&)>;

namespace detail {

/// Relative constraint violation of a reflection vector: SIC inversions of
/// the composite gains plus the shortfall of P_max against P_min.
inline double reflection_violation(const Problem& pb, const ReflectionVector& rho) {
  const NormalizedGains H = effective_gains(pb.scenario, rho);
  double v = 0.0;
  for (std::size_t k = 0; k + 1 < H.user_count(); ++k) {
    if (H.user[k] > H.user[k + 1]) v += (H.user[k] - H.user[k + 1]) / H.user[k];
  }
  const double need = p_min(H, pb.qos);
  if (need > pb.p_max) v += std::isfinite(need) ? (need - pb.p_max) / pb.p_max : 1e6;
  return v;
}

}  // namespace detail

/// Particle swarm search over the reflection vector with the exact inner
/// power allocation as fitness. Personal and global bests are updated
/// particle by particle; positions and velocities are clamped to [0,1]^M and
/// [-v_max, v_max]^M after every move.
inline SolveResult pso(const Problem& pb, const SolverSettings& st, const PsoConfig& cfg = {},
                       const TraceSink& trace = {}, const PsoObserver& observer = {}) {
  cfg.validate();
  const std::size_t m_count = pb.bd_count();
  const std::size_t n = cfg.particles;
  auto rng = make_stream(cfg.seed, cfg.stream, Stream::Swarm);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> vel(-cfg.v_max, cfg.v_max);

  std::vector<std::vector<double>> x(n, std::vector<double>(m_count));
  std::vector<std::vector<double>> v(n, std::vector<double>(m_count));
  std::vector<std::vector<double>> pbest(n);
  std::vector<double> pbest_fit(n, -std::numeric_limits<double>::infinity());

  std::vector<double> gbest(m_count, 0.0);
  double gbest_fit = -std::numeric_limits<double>::infinity();
  PointEvaluation gbest_eval;
  bool have_gbest = false;
  std::size_t evals = 0;

  auto fitness = [&](const std::vector<double>& pos, PointEvaluation& ev) {
    ReflectionVector rho(pos);
    ev = evaluate_reflection(pb, rho, st);
    ++evals;
    if (ev.feasible) return ev.fitness;
    if (cfg.penalty) return -*cfg.penalty * detail::reflection_violation(pb, rho);
    return -std::numeric_limits<double>::infinity();
  };

  auto observe = [&](std::size_t t) {
    if (trace) trace(t, gbest_fit);
    if (observer) observer(PsoSnapshot{t, &x, &v, gbest_fit});
  };

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t m = 0; m < m_count; ++m) {
      x[i][m] = cfg.initial_positions.empty() ? unit(rng) : std::clamp(cfg.initial_positions[i].at(m), 0.0, 1.0);
      v[i][m] = cfg.initial_velocities.empty() ? vel(rng)
                                               : std::clamp(cfg.initial_velocities[i].at(m), -cfg.v_max, cfg.v_max);
    }
    PointEvaluation ev;
    const double f = fitness(x[i], ev);
    pbest[i] = x[i];
    pbest_fit[i] = f;
    if (!have_gbest || f > gbest_fit) {
      have_gbest = true;
      gbest = x[i];
      gbest_fit = f;
      gbest_eval = std::move(ev);
    }
  }
  observe(0);

  for (std::size_t t = 1; t <= cfg.max_iterations; ++t) {
    const double w = inertia_weight(t, cfg);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t m = 0; m < m_count; ++m) {
        const double r1 = unit(rng);
        const double r2 = unit(rng);
        double vi = w * v[i][m] + cfg.c1 * r1 * (pbest[i][m] - x[i][m]) + cfg.c2 * r2 * (gbest[m] - x[i][m]);
        vi = std::clamp(vi, -cfg.v_max, cfg.v_max);
        v[i][m] = vi;
        x[i][m] = std::clamp(x[i][m] + vi, 0.0, 1.0);
      }
      PointEvaluation ev;
      const double f = fitness(x[i], ev);
      if (f > pbest_fit[i]) {
        pbest[i] = x[i];
        pbest_fit[i] = f;
      }
      if (f > gbest_fit) {
        gbest = x[i];
        gbest_fit = f;
        gbest_eval = std::move(ev);
      }
    }
    observe(t);
  }

  SolveResult r = make_result(pb, ReflectionVector(gbest), gbest_eval, Method::Pso, st);
  if (!gbest_eval.feasible) r.reason = Infeasibility::NoFeasiblePoint;
  r.eval_count = evals;
  return r;
}

}  // namespace ambsee
