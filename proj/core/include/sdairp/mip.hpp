#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sdairp/linear_model.hpp"
#include "sdairp/simplex.hpp"

namespace sdairp {

enum class SolveStatus { Optimal, Infeasible, Unbounded, NodeLimit, TimeLimit };

std::string to_string(SolveStatus s);

struct SolverConfig {
  double feas_tol = 1e-7;
  double int_tol = 1e-6;
  double gap = 0.0;  // 0 = prove optimality
  long node_limit = -1;
  double time_limit_seconds = -1.0;
  bool keep_node_log = false;
  // Prune nodes that cannot beat this objective (original sense). With a
  // cutoff, an "infeasible" result means no solution better than the cutoff
  // exists.
  std::optional<double> cutoff;
  // Feasible starting point used as the initial incumbent (checked against
  // the model first; ignored when invalid).
  std::optional<std::vector<double>> warm_start;
};

struct NodeLogEntry {
  long id = 0;
  long parent = -1;  // -1 at the root
  double bound = 0;  // the node's own LP objective
};

struct MipSolution {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> x;
  long nodes = 0;              // explored (LP-solved) nodes
  double wall_seconds = 0.0;
  std::vector<NodeLogEntry> node_log;  // per explored node, when logged
  long incumbent_node = -1;            // node that produced the final incumbent
  bool has_incumbent() const { return !x.empty(); }
};

// Exact branch and bound on the binary variables: LP-bound pruning,
// most-fractional branching (ties by lowest variable index), best-first node
// order (ties FIFO). Node count and objective are deterministic for a fixed
// model + config. On a node or time limit the best incumbent is returned
// with the corresponding non-optimal status.
MipSolution solve_mip(const LinearModel& model, const SolverConfig& cfg = {});

// Exhaustive verification oracle: enumerates all binary assignments (at most
// 25 binaries), solving the residual LP over the continuous variables for
// each. Exact optimum, independent of the branch-and-bound path.
MipSolution enumerate_oracle(const LinearModel& model, const SolverConfig& cfg = {});

}  // namespace sdairp
