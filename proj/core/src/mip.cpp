#include "sdairp/mip.hpp"

#include <chrono>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace sdairp {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::NodeLimit: return "node_limit";
    case SolveStatus::TimeLimit: return "time_limit";
  }
  return "unknown";
}

namespace {

using Clock = std::chrono::steady_clock;

struct Node {
  double bound;  // LP bound of the parent (internal min sense)
  long seq;
  long parent;
  std::vector<std::pair<int, int>> fixes;  // (binary var index, 0/1)
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.seq > b.seq;                              // FIFO on ties
  }
};

// distance to the nearest integer
double fractionality(double v) { return std::fabs(v - std::round(v)); }

}  // namespace

MipSolution solve_mip(const LinearModel& model, const SolverConfig& cfg) {
  model.validate();
  for (const auto& v : model.vars)
    if (v.kind != VarKind::Continuous && v.kind != VarKind::Binary)
      throw std::invalid_argument("solve_mip: only continuous and binary variables supported");

  const auto t0 = Clock::now();
  const double sign = model.sense == ObjSense::Min ? 1.0 : -1.0;
  const auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  };

  std::vector<int> bin_idx;
  for (std::size_t j = 0; j < model.vars.size(); ++j)
    if (model.vars[j].kind == VarKind::Binary) bin_idx.push_back(static_cast<int>(j));

  std::vector<std::pair<double, double>> base_bounds;
  base_bounds.reserve(model.vars.size());
  for (const auto& v : model.vars) base_bounds.push_back({v.lb, v.ub});

  MipSolution out;
  double incumbent = std::numeric_limits<double>::infinity();  // internal min sense
  if (cfg.cutoff) incumbent = sign * (*cfg.cutoff);
  if (cfg.warm_start && cfg.warm_start->size() == model.vars.size() &&
      model.satisfies(*cfg.warm_start, cfg.feas_tol, cfg.int_tol)) {
    const double z = model.objective_value(*cfg.warm_start);
    if (sign * z < incumbent) {
      incumbent = sign * z;
      out.x = *cfg.warm_start;
      for (int j : bin_idx) out.x[j] = std::round(out.x[j]);
      out.objective = z;
    }
  }

  bool hit_node_limit = false, hit_time_limit = false, root_unbounded = false;
  long seq = 0;

  const auto budget_left = [&] {
    if (cfg.node_limit >= 0 && out.nodes >= cfg.node_limit) {
      hit_node_limit = true;
      return false;
    }
    if (cfg.time_limit_seconds >= 0 && elapsed() > cfg.time_limit_seconds) {
      hit_time_limit = true;
      return false;
    }
    return true;
  };

  // Shared node evaluation: solves the relaxation, updates the incumbent on
  // integral points, otherwise reports the branching variable.
  struct Evaluated {
    bool prune = true;
    double bound = 0;
    int branch_var = -1;
    std::vector<double> x;
  };
  const auto evaluate = [&](const Node& node) {
    Evaluated ev;
    if (node.bound >= incumbent - 1e-9) return ev;
    auto bounds = base_bounds;
    for (const auto& [j, v] : node.fixes) bounds[j] = {double(v), double(v)};
    LpResult lp = solve_lp(model, &bounds, cfg.feas_tol);
    ++out.nodes;
    if (lp.status == LpStatus::Unbounded) {
      // a ray in any node's relaxation is a ray of the root relaxation
      root_unbounded = true;
      return ev;
    }
    if (lp.status == LpStatus::Infeasible) return ev;
    ev.bound = sign * lp.objective;
    if (cfg.keep_node_log) out.node_log.push_back({node.seq, node.parent, lp.objective});
    if (ev.bound >= incumbent - 1e-9) return ev;

    // most fractional binary, ties by lowest variable index
    double best_frac = cfg.int_tol;
    for (int j : bin_idx) {
      const double f = fractionality(lp.x[j]);
      if (f > best_frac + 1e-15) {
        best_frac = f;
        ev.branch_var = j;
      }
    }
    if (ev.branch_var < 0) {
      incumbent = ev.bound;
      out.x = lp.x;
      for (int j : bin_idx) out.x[j] = std::round(out.x[j]);
      out.objective = lp.objective;
      out.incumbent_node = node.seq;
      return ev;
    }
    ev.prune = false;
    ev.x = std::move(lp.x);
    return ev;
  };

  // Incumbent seeding: a deterministic depth-first dive (nearest rounding
  // first) until the first integral point. Best-first alone may explore the
  // frontier for a long time before any feasible point appears, leaving
  // nothing to prune with.
  const long dive_budget = out.nodes + 1000;
  std::vector<Node> dive_stack;
  dive_stack.push_back({-std::numeric_limits<double>::infinity(), seq++, -1, {}});
  while (!dive_stack.empty() && !out.has_incumbent() && out.nodes < dive_budget &&
         budget_left() && !root_unbounded) {
    Node node = std::move(dive_stack.back());
    dive_stack.pop_back();
    Evaluated ev = evaluate(node);
    if (ev.prune) continue;
    const int down_first = ev.x[ev.branch_var] < 0.5 ? 0 : 1;
    for (int k = 1; k >= 0; --k) {  // nearest value explored first (LIFO)
      Node child;
      child.bound = ev.bound;
      child.seq = seq++;
      child.parent = node.seq;
      child.fixes = node.fixes;
      child.fixes.push_back({ev.branch_var, k == 1 ? 1 - down_first : down_first});
      dive_stack.push_back(std::move(child));
    }
  }

  // Main search: best-first by bound, FIFO on ties.
  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  open.push({-std::numeric_limits<double>::infinity(), seq++, -1, {}});
  while (!open.empty() && !root_unbounded && budget_left()) {
    Node node = open.top();
    open.pop();
    Evaluated ev = evaluate(node);
    if (ev.prune) continue;
    for (int v = 0; v <= 1; ++v) {
      Node child;
      child.bound = ev.bound;
      child.seq = seq++;
      child.parent = node.seq;
      child.fixes = node.fixes;
      child.fixes.push_back({ev.branch_var, v});
      open.push(std::move(child));
    }
  }

  out.wall_seconds = elapsed();
  if (root_unbounded) {
    out.status = SolveStatus::Unbounded;
  } else if (hit_node_limit) {
    out.status = SolveStatus::NodeLimit;
  } else if (hit_time_limit) {
    out.status = SolveStatus::TimeLimit;
  } else {
    out.status = out.has_incumbent() ? SolveStatus::Optimal : SolveStatus::Infeasible;
  }
  return out;
}

MipSolution enumerate_oracle(const LinearModel& model, const SolverConfig& cfg) {
  model.validate();
  std::vector<int> bin_idx;
  for (std::size_t j = 0; j < model.vars.size(); ++j)
    if (model.vars[j].kind == VarKind::Binary) bin_idx.push_back(static_cast<int>(j));
  const std::size_t k = bin_idx.size();
  if (k > 25) throw std::invalid_argument("enumerate_oracle: more than 25 binary variables");

  const auto t0 = Clock::now();
  const double sign = model.sense == ObjSense::Min ? 1.0 : -1.0;
  const bool pure_binary = k == model.vars.size();

  MipSolution out;
  double best = std::numeric_limits<double>::infinity();  // internal min sense

  std::vector<std::pair<double, double>> bounds;
  bounds.reserve(model.vars.size());
  for (const auto& v : model.vars) bounds.push_back({v.lb, v.ub});

  // rows touching only binaries are checked before any LP is set up; most
  // assignments of routing-style models die here
  std::vector<const Constraint*> binary_rows;
  for (const auto& c : model.cons) {
    bool only_bin = true;
    for (const auto& [idx, coef] : c.terms)
      only_bin &= model.vars[idx].kind == VarKind::Binary;
    if (only_bin) binary_rows.push_back(&c);
  }
  auto binary_rows_ok = [&](const std::vector<double>& x) {
    for (const Constraint* c : binary_rows) {
      double lhs = 0;
      for (const auto& [idx, coef] : c->terms) lhs += coef * x[idx];
      switch (c->sense) {
        case ConSense::LE:
          if (lhs > c->rhs + cfg.feas_tol) return false;
          break;
        case ConSense::GE:
          if (lhs < c->rhs - cfg.feas_tol) return false;
          break;
        case ConSense::EQ:
          if (std::fabs(lhs - c->rhs) > cfg.feas_tol) return false;
          break;
      }
    }
    return true;
  };

  std::vector<double> x(model.vars.size(), 0.0);
  for (std::uint64_t mask = 0; mask < (1ull << k); ++mask) {
    ++out.nodes;
    for (std::size_t b = 0; b < k; ++b) {
      const double v = double((mask >> b) & 1u);
      x[bin_idx[b]] = v;
      bounds[bin_idx[b]] = {v, v};
    }
    bool in_bin_bounds = true;
    for (std::size_t b = 0; b < k && in_bin_bounds; ++b) {
      const auto& var = model.vars[bin_idx[b]];
      in_bin_bounds = x[bin_idx[b]] >= var.lb - 1e-12 && x[bin_idx[b]] <= var.ub + 1e-12;
    }
    if (!in_bin_bounds || !binary_rows_ok(x)) continue;
    if (pure_binary) {
      if (!model.satisfies(x, cfg.feas_tol, 1.0)) continue;
      const double z = sign * model.objective_value(x);
      if (z < best - 1e-12) {
        best = z;
        out.x = x;
        out.objective = model.objective_value(x);
      }
    } else {
      LpResult lp = solve_lp(model, &bounds, cfg.feas_tol);
      if (lp.status == LpStatus::Unbounded) {
        out.status = SolveStatus::Unbounded;
        out.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        return out;
      }
      if (lp.status != LpStatus::Optimal) continue;
      const double z = sign * lp.objective;
      if (z < best - 1e-12) {
        best = z;
        out.x = lp.x;
        for (int j : bin_idx) out.x[j] = std::round(out.x[j]);
        out.objective = lp.objective;
      }
    }
  }

  out.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  out.status = out.has_incumbent() ? SolveStatus::Optimal : SolveStatus::Infeasible;
  return out;
}

}  // namespace sdairp
