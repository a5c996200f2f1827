#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ambsee/problem.hpp"

namespace ambsee {

struct GridConfig {
  double coarse_step = 0.1;
  double fine_step = 0.01;
  double fine_halfwidth = 0.1;

  void validate() const {
    if (!(fine_step > 0.0 && fine_step < coarse_step && coarse_step <= 1.0))
      throw std::invalid_argument("grid: require 0 < fine_step < coarse_step <= 1");
    if (!(fine_halfwidth >= 0.0)) throw std::invalid_argument("grid: fine_halfwidth must be >= 0");
  }
};

/// Receives (stage or iteration index, best fitness so far).
using TraceSink = std::function<void(std::size_t, double)>;

namespace detail {

/// start, start + step, ..., capped at `end` (inclusive up to rounding).
inline std::vector<double> grid_axis(double start, double end, double step) {
  const auto n = static_cast<std::size_t>(std::floor((end - start) / step + 1e-9)) + 1;
  std::vector<double> axis(n);
  for (std::size_t j = 0; j < n; ++j) axis[j] = std::min(1.0, start + static_cast<double>(j) * step);
  return axis;
}

/// Visits the Cartesian product of `axes` in lexicographic order (last
/// coordinate fastest). Returns the number of points visited.
template <typename Visit>
std::size_t for_each_combination(const std::vector<std::vector<double>>& axes, Visit&& visit) {
  std::vector<std::size_t> idx(axes.size(), 0);
  std::vector<double> point(axes.size());
  std::size_t visited = 0;
  for (;;) {
    for (std::size_t m = 0; m < axes.size(); ++m) point[m] = axes[m][idx[m]];
    visit(point);
    ++visited;
    std::size_t m = axes.size();
    while (m > 0) {
      --m;
      if (++idx[m] < axes[m].size()) break;
      idx[m] = 0;
      if (m == 0) return visited;
    }
    if (axes.empty()) return visited;
  }
}

}  // namespace detail

/// Number of coarse points per coordinate, 1/coarse_step + 1.
inline std::size_t coarse_axis_size(const GridConfig& grid) {
  return detail::grid_axis(0.0, 1.0, grid.coarse_step).size();
}

/// Two-stage grid search over the reflection vector: a coarse sweep of
/// [0,1]^M, then a fine sweep of the window +-fine_halfwidth (clipped to
/// [0,1]) around the coarse optimum. Each point is scored with the exact
/// inner power allocation. The first point reaching the maximum is kept.
inline SolveResult grid_search(const Problem& pb, const SolverSettings& st, const GridConfig& grid = {},
                               const TraceSink& trace = {}) {
  grid.validate();
  const std::size_t m_count = pb.bd_count();

  ReflectionVector best_rho = ReflectionVector::zeros(m_count);
  PointEvaluation best;

  auto score = [&](const std::vector<double>& point) {
    ReflectionVector rho(point);
    PointEvaluation ev = evaluate_reflection(pb, rho, st);
    if (ev.feasible && ev.fitness > best.fitness) {
      best = std::move(ev);
      best_rho = std::move(rho);
    }
  };

  const std::vector<std::vector<double>> coarse(m_count, detail::grid_axis(0.0, 1.0, grid.coarse_step));
  const std::size_t coarse_evals = detail::for_each_combination(coarse, score);
  if (trace) trace(0, best.fitness);

  std::vector<std::vector<double>> fine(m_count);
  for (std::size_t m = 0; m < m_count; ++m) {
    const double start = std::max(0.0, best_rho[m] - grid.fine_halfwidth);
    const double end = std::min(1.0, best_rho[m] + grid.fine_halfwidth);
    fine[m] = detail::grid_axis(start, end, grid.fine_step);
  }
  const std::size_t fine_evals = detail::for_each_combination(fine, score);
  if (trace) trace(1, best.fitness);

  SolveResult r = make_result(pb, best_rho, best, Method::Grid, st);
  if (!best.feasible) r.reason = Infeasibility::NoFeasiblePoint;
  r.coarse_evals = coarse_evals;
  r.fine_evals = fine_evals;
  r.eval_count = coarse_evals + fine_evals;
  return r;
}

}  // namespace ambsee
