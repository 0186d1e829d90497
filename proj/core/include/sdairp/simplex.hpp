#pragma once

#include <vector>

#include "sdairp/linear_model.hpp"

namespace sdairp {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;           // in the model's original sense
  std::vector<double> x;            // structural variable values
  int iterations = 0;
};

// Solves the LP relaxation (integrality dropped) with a two-phase dense
// tableau simplex supporting bounded variables. Dantzig pricing with a Bland
// fallback after a stall guarantees termination on degenerate instances.
// `bound_override`, when non-null, replaces (lb, ub) per variable; used by
// branch and bound to fix binaries without touching the model.
LpResult solve_lp(const LinearModel& model,
                  const std::vector<std::pair<double, double>>* bound_override = nullptr,
                  double feas_tol = 1e-7);

}  // namespace sdairp
