#pragma once

#include <stdexcept>

#include "ambsee/closed_form.hpp"
#include "ambsee/grid_search.hpp"
#include "ambsee/pso.hpp"

namespace ambsee {

struct SolveOptions {
  Method method = Method::ClosedForm;
  SolverSettings settings{};
  GridConfig grid{};
  PsoConfig pso{};
};

inline SolveResult solve(const Problem& pb, const SolveOptions& opt, const TraceSink& trace = {}) {
  switch (opt.method) {
    case Method::ClosedForm: return solve_closed_form(pb, opt.settings, opt.grid);
    case Method::Grid:
      if (pb.bd_count() == 0) return solve_closed_form(pb, opt.settings, opt.grid);
      return grid_search(pb, opt.settings, opt.grid, trace);
    case Method::Pso:
      if (pb.bd_count() == 0) return solve_closed_form(pb, opt.settings, opt.grid);
      return pso(pb, opt.settings, opt.pso, trace);
    case Method::Oma: break;
  }
  throw std::invalid_argument("solve: method must be closed, grid or pso");
}

inline Method parse_method(std::string_view s) {
  if (s == "closed") return Method::ClosedForm;
  if (s == "grid") return Method::Grid;
  if (s == "pso") return Method::Pso;
  throw std::invalid_argument("unknown method '" + std::string(s) + "' (expected closed, grid or pso)");
}

inline Objective parse_objective(std::string_view s) {
  if (s == "ratio") return Objective::Ratio;
  if (s == "tradeoff") return Objective::Tradeoff;
  throw std::invalid_argument("unknown objective '" + std::string(s) + "' (expected ratio or tradeoff)");
}

}  // namespace ambsee
