#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sdairp/linear_model.hpp"
#include "sdairp/network.hpp"

namespace sdairp {

// Variable layout of one routing period: x/l per (vehicle, directed arc) and
// the service-flow variables f. Directed arc 2a is arcs[a] traversed i->j,
// 2a+1 is j->i. Shared by CARP, AIRP periods and the selective VRP so route
// extraction works on any of them.
struct RoutingView {
  Network net;
  int K = 0;
  int directed_arcs = 0;                // 2 * |A|
  std::vector<int> x_idx, l_idx, f_idx; // [p * directed_arcs + d] -> model variable

  int x(int p, int d) const { return x_idx[p * directed_arcs + d]; }
  int l(int p, int d) const { return l_idx[p * directed_arcs + d]; }
  int f(int p, int d) const { return f_idx[p * directed_arcs + d]; }
  int tail(int d) const { return d % 2 == 0 ? net.arcs[d / 2].i : net.arcs[d / 2].j; }
  int head(int d) const { return d % 2 == 0 ? net.arcs[d / 2].j : net.arcs[d / 2].i; }
  double cost(int d) const { return net.arcs[d / 2].c; }
  double service_cost(int d) const { return net.arcs[d / 2].e; }
};

struct CarpInstance {
  Network net;
  // Optimum-preserving strengthening: caps service flow by the arc count
  // instead of n^2 (no vehicle can source more flow than there are arcs)
  // and orders identical vehicles by traversal cost to cut symmetric
  // branches. Off by default; the plain model matches the printed
  // formulation exactly.
  bool strengthen = false;
};

struct CarpModel {
  LinearModel model;
  RoutingView view;
};

// Single-period capacitated arc routing: minimize traversal cost subject to
// per-vehicle flow conservation, demand coverage (equality), service-implies-
// traversal, the fuel capacity, and flow-based subtour elimination.
CarpModel build_carp_model(const CarpInstance& inst);

// Greedy nearest-arc construction: a feasible assignment for the model, or
// nothing when the construction fails (coverage does not fit the fleet, or
// a walk would reuse a directed arc). Used to seed branch and bound.
std::optional<std::vector<double>> greedy_carp_warm_start(const CarpModel& cm);

struct AirpInstance {
  Network net;
  int horizon = 1;             // T
  std::vector<double> h;       // per-arc holding cost / period
  std::vector<double> r;       // per-arc deterministic consumption rate
  std::vector<double> s0;      // per-arc initial inventory
  double big_m = 0.0;          // 0 = use the default 2 (max q + max r)

  void validate() const;
};

struct AirpModel {
  LinearModel model;
  std::vector<RoutingView> periods;  // period t = 1..T at index t-1
  std::vector<std::vector<int>> s_idx;  // [arc][t], t = 0..T
};

// Deterministic multi-period arc-inventory routing: time-indexed routing
// blocks, big-M inventory continuity when an arc is unmonitored, order-up-to
// when monitored, recharge lockout for zeta periods after a depot departure,
// and inventory bounds r <= s <= q. Objective: traversal plus holding cost.
AirpModel build_airp_model(const AirpInstance& inst);

struct SvrpInstance {
  Network net;
  std::vector<double> pi;  // per-arc selection payoff coefficient

  // Fix y = 0 where pi >= 0 (selecting such an arc can never improve the
  // objective); sound bound tightening used by the policy layer.
  bool prune_nonnegative_payoffs = false;
  bool strengthen = false;  // see CarpInstance
};

struct SvrpModel {
  LinearModel model;
  RoutingView view;
  std::vector<int> y_idx;  // per undirected arc
};

// Selective VRP: CARP constraints with coverage replaced by the selection
// coupling sum_p (l_ij + l_ji) = y_ij and objective sum c x + sum pi y.
SvrpModel build_svrp_model(const SvrpInstance& inst);

struct VehicleRoute {
  int vehicle = 0;
  std::vector<int> walk;  // closed node sequence from the depot; empty if unused
  std::vector<std::pair<int, int>> serviced;  // directed service traversals
  double fuel = 0.0;  // sum c x + e l
  double cost = 0.0;  // sum c x
};

struct Routes {
  std::vector<VehicleRoute> vehicles;
  double total_cost = 0.0;  // X

  std::string to_json() const;
};

// Reconstructs per-vehicle closed walks from the positive traversal
// variables (Hierholzer over the directed multigraph, depot rooted, f values
// orienting tie-breaks). Throws std::runtime_error on internal inconsistency
// (unbalanced or depot-disconnected traversals, which constraints rule out).
Routes extract_routes(const RoutingView& view, const std::vector<double>& solution);

}  // namespace sdairp
