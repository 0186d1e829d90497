#include "sdairp/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "policy_detail.hpp"

namespace sdairp {

std::string DecisionRecord::to_json() const {
  nlohmann::json j;
  j["period"] = period;
  j["selected"] = nlohmann::json::array();
  for (std::size_t a = 0; a < selected.size(); ++a)
    if (selected[a]) j["selected"].push_back(a);
  j["routes"] = nlohmann::json::parse(routes.to_json());
  j["X"] = X;
  j["H"] = H;
  j["O"] = O;
  j["pre"] = pre;
  j["post"] = post;
  if (!note.empty()) j["note"] = note;
  return j.dump();
}

DecisionRecord finish_record(const StateSnapshot& state, const std::vector<char>& selection,
                             Routes routes, const Network& net, const ArcEconomics& econ) {
  const std::size_t A = net.arcs.size();
  DecisionRecord rec;
  rec.period = state.period;
  rec.selected = selection;
  rec.routes = std::move(routes);
  rec.X = rec.routes.total_cost;
  rec.pre = state.inventory;
  rec.rate = state.rate;
  rec.post.resize(A);
  rec.stockout.assign(A, 0);
  for (std::size_t a = 0; a < A; ++a) {
    if (net.arcs[a].q == 0) {
      rec.post[a] = rec.pre[a];
      continue;
    }
    rec.stockout[a] = rec.pre[a] < 0.0 ? 1 : 0;
    rec.post[a] = selection[a] ? static_cast<double>(net.arcs[a].q) : rec.pre[a];
    rec.H += econ.h[a] * rec.post[a];
    if (rec.stockout[a]) rec.O += econ.rho[a];
  }
  return rec;
}

namespace detail {

// Routes a selection by solving the coverage-restricted CARP. Returns
// nothing when the restricted problem has no optimum within the budget.
std::optional<Routes> route_selection(const std::vector<char>& selection, const Network& net,
                                      const SolverConfig& cfg) {
  bool any = false;
  for (char s : selection) any |= (s != 0);
  if (!any) {
    Routes r;
    r.vehicles.resize(net.fleet_size);
    for (int p = 0; p < net.fleet_size; ++p) r.vehicles[p].vehicle = p + 1;
    return r;
  }
  CarpInstance inst;
  inst.net = net;
  inst.strengthen = true;  // optimum preserving
  for (std::size_t a = 0; a < net.arcs.size(); ++a) inst.net.arcs[a].q = selection[a] ? 1 : 0;
  CarpModel cm = build_carp_model(inst);
  SolverConfig scfg = cfg;
  scfg.warm_start = greedy_carp_warm_start(cm);
  MipSolution sol = solve_mip(cm.model, scfg);
  if (sol.status != SolveStatus::Optimal) return std::nullopt;
  return extract_routes(cm.view, sol.x);
}

}  // namespace detail

using detail::route_selection;

DecisionRecord myopic_decide(const StateSnapshot& state, const std::vector<double>& thresholds,
                             const Network& net, const ArcEconomics& econ,
                             const SolverConfig& cfg) {
  const std::size_t A = net.arcs.size();
  if (thresholds.size() != A)
    throw std::invalid_argument("myopic_decide: one threshold per arc required");

  std::vector<char> selection(A, 0);
  for (std::size_t a = 0; a < A; ++a)
    if (net.arcs[a].q == 1 && state.inventory[a] < thresholds[a]) selection[a] = 1;

  std::string note;
  std::optional<Routes> routes;
  while (!(routes = route_selection(selection, net, cfg))) {
    // infeasible within K, W: drop the least urgent selected arc
    int drop = -1;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < A; ++a)
      if (selection[a] && state.inventory[a] > best) {
        best = state.inventory[a];
        drop = static_cast<int>(a);
      }
    if (drop < 0) break;  // nothing selected, cannot happen: empty set routes trivially
    selection[drop] = 0;
    note += "dropped arc (" + std::to_string(net.arcs[drop].i) + "," +
            std::to_string(net.arcs[drop].j) + ") to restore routing feasibility; ";
  }

  DecisionRecord rec = finish_record(state, selection, routes ? std::move(*routes) : Routes{},
                                     net, econ);
  rec.note = std::move(note);
  return rec;
}

DecisionRecord static_decide(const StaticSchedule& schedule, const StateSnapshot& state,
                             const Network& net, const ArcEconomics& econ) {
  const std::size_t t = static_cast<std::size_t>(state.period);
  if (t < 1 || t > schedule.selected.size())
    throw std::out_of_range("static_decide: period " + std::to_string(state.period) +
                            " beyond the schedule");
  return finish_record(state, schedule.selected[t - 1], schedule.routes[t - 1], net, econ);
}

StaticSchedule build_static_schedule(const Network& net, const ArcEconomics& econ,
                                     const std::vector<OUParams>& ou,
                                     const std::vector<double>& s0, int horizon,
                                     const SolverConfig& cfg) {
  const std::size_t A = net.arcs.size();
  StaticSchedule sched;
  sched.selected.assign(horizon, std::vector<char>(A, 0));
  sched.routes.assign(horizon, Routes{});

  // exact deterministic plan, rates fixed at their long-run means
  AirpInstance inst;
  inst.net = net;
  inst.horizon = horizon;
  inst.h = econ.h;
  inst.r.resize(A);
  inst.s0.resize(A);
  for (std::size_t a = 0; a < A; ++a) {
    inst.r[a] = std::clamp(ou[a].mu, 0.0, double(net.arcs[a].q));
    inst.s0[a] = std::clamp(s0[a], inst.r[a], double(net.arcs[a].q));
  }

  bool exact_ok = false;
  try {
    AirpModel am = build_airp_model(inst);
    MipSolution sol = solve_mip(am.model, cfg);
    if (sol.status == SolveStatus::Optimal ||
        ((sol.status == SolveStatus::NodeLimit || sol.status == SolveStatus::TimeLimit) &&
         sol.has_incumbent())) {
      for (int t = 1; t <= horizon; ++t) {
        const auto& view = am.periods[t - 1];
        for (std::size_t a = 0; a < A; ++a) {
          double served = 0;
          for (int p = 0; p < view.K; ++p)
            served += sol.x[view.l(p, 2 * static_cast<int>(a))] +
                      sol.x[view.l(p, 2 * static_cast<int>(a) + 1)];
          sched.selected[t - 1][a] = served > 0.5 ? 1 : 0;
        }
        sched.routes[t - 1] = extract_routes(view, sol.x);
      }
      if (sol.status != SolveStatus::Optimal)
        sched.note = "schedule from best incumbent (" + to_string(sol.status) + ")";
      exact_ok = true;
    }
  } catch (const std::exception& e) {
    sched.note = std::string("exact schedule unavailable: ") + e.what();
  }

  if (!exact_ok) {
    // cyclic fallback: deploy to every demanded arc on its ceil(q/mu) cadence
    sched.note += "; using cyclic deployment plan";
    for (int t = 1; t <= horizon; ++t) {
      auto& sel = sched.selected[t - 1];
      for (std::size_t a = 0; a < A; ++a) {
        if (net.arcs[a].q != 1) continue;
        const double mu = std::max(ou[a].mu, 1e-9);
        const int k = std::max(1, static_cast<int>(std::ceil(net.arcs[a].q / mu)));
        sel[a] = (t % k == 0) ? 1 : 0;
      }
      auto routes = route_selection(sel, net, cfg);
      while (!routes) {
        int drop = -1;
        for (std::size_t a = 0; a < A; ++a)
          if (sel[a]) drop = static_cast<int>(a);
        if (drop < 0) break;
        sel[drop] = 0;
        routes = route_selection(sel, net, cfg);
      }
      if (routes) sched.routes[t - 1] = std::move(*routes);
    }
  }
  return sched;
}

}  // namespace sdairp
