#pragma once

#include <stdexcept>
#include <string>

#include "ambsee/grid_search.hpp"
#include "ambsee/problem.hpp"
#include "ambsee/reflection.hpp"

namespace ambsee {

/// Inner solve at a fixed reflection vector, packaged as a result.
inline SolveResult solve_at(const Problem& pb, const ReflectionVector& rho, const SolverSettings& st,
                            Method method = Method::ClosedForm) {
  const PointEvaluation ev = evaluate_reflection(pb, rho, st);
  SolveResult r = make_result(pb, rho, ev, method, st);
  r.eval_count = 1;
  return r;
}

/// Ratio maximization at a fixed reflection vector.
inline SolveResult dinkelbach_ratio(const Problem& pb, const ReflectionVector& rho, const DinkelbachOptions& opt = {}) {
  SolverSettings st;
  st.objective = Objective::Ratio;
  st.dinkelbach = opt;
  return solve_at(pb, rho, st);
}

/// Exact solver: M = 0 uses the direct channels, M = 1 the on/off reflection
/// rule, M = 2 with K = 2 the two-BD boundary rule. Degenerate two-BD
/// geometries fall back to the grid search and are tagged "degenerate".
inline SolveResult solve_closed_form(const Problem& pb, const SolverSettings& st, const GridConfig& grid = {}) {
  const std::size_t m = pb.bd_count();
  if (m == 0) {
    SolveResult r = solve_at(pb, ReflectionVector{}, st);
    r.case_tag = "direct";
    return r;
  }
  if (m == 1) {
    const double rho = optimal_rho_single(pb.scenario);
    SolveResult r = solve_at(pb, ReflectionVector({rho}), st);
    r.case_tag = rho > 0.0 ? "single.on" : "single.off";
    return r;
  }
  if (m == 2 && pb.user_count() == 2) {
    const TwoBdSolution sol = optimal_rho_two_bd(TwoBdGeometry::from(pb.scenario));
    if (sol.branch == TwoBdBranch::Degenerate) {
      SolveResult r = grid_search(pb, st, grid);
      r.method = Method::ClosedForm;
      r.case_tag = "degenerate";
      return r;
    }
    SolveResult r = solve_at(pb, ReflectionVector({sol.rho1, sol.rho2}), st);
    r.case_tag = sol.tag();
    return r;
  }
  throw std::invalid_argument("closed form covers M <= 1, or M = 2 with K = 2; got K = " +
                              std::to_string(pb.user_count()) + ", M = " + std::to_string(m));
}

}  // namespace ambsee
