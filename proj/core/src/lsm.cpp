#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "policy_detail.hpp"
#include "sdairp/hermite.hpp"
#include "sdairp/parallel.hpp"
#include "sdairp/policy.hpp"
#include "sdairp/rng.hpp"

namespace sdairp {

void SdairpConfig::validate(std::size_t arcs) const {
  if (lookahead < 1) throw std::invalid_argument("SdairpConfig: lookahead T must be >= 1");
  if (paths < 2) throw std::invalid_argument("SdairpConfig: need at least two sample paths");
  if (basis < 1) throw std::invalid_argument("SdairpConfig: basis size M must be >= 1");
  if (gamma != 1.0) throw std::invalid_argument("SdairpConfig: gamma is fixed at 1");
  if (!myopic_threshold.empty() && myopic_threshold.size() != arcs)
    throw std::invalid_argument("SdairpConfig: one fallback threshold per arc required");
}

namespace {

// Cyclic a-priori plan: deploy to every demanded arc on its ceil(q/mu)
// cadence, relative stage 1 = the current period.
std::vector<std::vector<char>> cyclic_plan(const Network& net, const std::vector<OUParams>& ou,
                                           int T) {
  std::vector<std::vector<char>> plan(T, std::vector<char>(net.arcs.size(), 0));
  for (std::size_t a = 0; a < net.arcs.size(); ++a) {
    if (net.arcs[a].q != 1) continue;
    const double mu = std::max(ou[a].mu, 1e-9);
    const int k = std::max(1, static_cast<int>(std::ceil(net.arcs[a].q / mu)));
    for (int tau = 1; tau <= T; ++tau) plan[tau - 1][a] = (tau % k == 0) ? 1 : 0;
  }
  return plan;
}

// Exact deterministic plan seeded from the observed rates; falls back to the
// cyclic plan when no incumbent arrives within the budget.
std::vector<std::vector<char>> apriori_plan(const StateSnapshot& state, const SdairpConfig& cfg,
                                            const Network& net, const ArcEconomics& econ,
                                            const std::vector<OUParams>& ou, std::string& note) {
  const int T = cfg.lookahead;
  if (cfg.apriori == AprioriPolicy::NaiveCyclic) return cyclic_plan(net, ou, T);

  const std::size_t A = net.arcs.size();
  AirpInstance inst;
  inst.net = net;
  inst.horizon = T;
  inst.h = econ.h;
  inst.r.resize(A);
  inst.s0.resize(A);
  for (std::size_t a = 0; a < A; ++a) {
    inst.r[a] = std::clamp(state.rate[a], 0.0, double(net.arcs[a].q));
    inst.s0[a] = std::clamp(state.inventory[a], inst.r[a], double(net.arcs[a].q));
  }
  try {
    AirpModel am = build_airp_model(inst);
    SolverConfig scfg = cfg.subproblem;
    scfg.time_limit_seconds = cfg.apriori_time_budget;
    MipSolution sol = solve_mip(am.model, scfg);
    if (sol.has_incumbent()) {
      std::vector<std::vector<char>> plan(T, std::vector<char>(A, 0));
      for (int tau = 1; tau <= T; ++tau) {
        const auto& view = am.periods[tau - 1];
        for (std::size_t a = 0; a < A; ++a) {
          double served = 0;
          for (int p = 0; p < view.K; ++p)
            served += sol.x[view.l(p, 2 * static_cast<int>(a))] +
                      sol.x[view.l(p, 2 * static_cast<int>(a) + 1)];
          plan[tau - 1][a] = served > 0.5 ? 1 : 0;
        }
      }
      return plan;
    }
    note += "a-priori exact solve produced no incumbent, using cyclic plan; ";
  } catch (const std::exception& e) {
    note += std::string("a-priori exact solve failed (") + e.what() + "), using cyclic plan; ";
  }
  return cyclic_plan(net, ou, T);
}

struct StageSolveResult {
  std::vector<char> y;
  std::vector<double> solution;  // model point, for route extraction at stage 1
  bool solved = true;
};

// One selective-VRP decision given per-arc payoffs. Arcs with nonnegative
// payoff are pruned (selecting them cannot pay for itself); when nothing
// remains the empty decision is optimal outright.
StageSolveResult decide_stage(const Network& net, const std::vector<double>& pi,
                              const SolverConfig& scfg, bool want_solution) {
  StageSolveResult res;
  res.y.assign(net.arcs.size(), 0);
  bool any_candidate = false;
  for (std::size_t a = 0; a < net.arcs.size(); ++a)
    any_candidate |= (net.arcs[a].q == 1 && pi[a] < 0.0);
  if (!any_candidate) return res;

  SvrpInstance inst;
  inst.net = net;
  inst.pi = pi;
  inst.prune_nonnegative_payoffs = true;
  inst.strengthen = true;  // optimum preserving
  SvrpModel sm = build_svrp_model(inst);
  SolverConfig cut = scfg;
  cut.cutoff = 0.0;  // the empty decision costs 0 and is always feasible
  MipSolution sol = solve_mip(sm.model, cut);
  if (sol.status == SolveStatus::Infeasible) return res;  // nothing beats no-deploy
  if (sol.status != SolveStatus::Optimal || !sol.has_incumbent()) {
    res.solved = false;
    return res;  // budget hit: keep the no-deploy decision
  }
  if (sol.objective < -1e-9) {
    for (std::size_t a = 0; a < net.arcs.size(); ++a)
      res.y[a] = sol.x[sm.y_idx[a]] > 0.5 ? 1 : 0;
    if (want_solution) res.solution = sol.x;
  }
  return res;
}

}  // namespace

DecisionRecord lsm_decide(const StateSnapshot& state, const SdairpConfig& cfg, const Network& net,
                          const ArcEconomics& econ, const std::vector<OUParams>& ou,
                          std::ostream* trace) {
  const std::size_t A = net.arcs.size();
  cfg.validate(A);
  if (state.inventory.size() != A || state.rate.size() != A || ou.size() != A)
    throw std::invalid_argument("lsm_decide: per-arc vector size mismatch");

  const int T = cfg.lookahead;
  const int P = cfg.paths;
  std::string note;

  // 1. simulate inner sample paths from the observed rates; stage 1 is the
  //    current period whose rate is already realized, stages 2..T draw from
  //    the process
  std::vector<OUParams> from_now = ou;
  for (std::size_t a = 0; a < A; ++a) from_now[a].r0 = state.rate[a];
  PathMatrix sim;
  if (T > 1) sim = simulate_paths(from_now, P, T - 1, cfg.seed, cfg.threads);
  auto stage_rate = [&](int p, int tau, std::size_t a) {
    return tau == 1 ? state.rate[a] : sim.at(p, tau - 1, a);
  };

  // 2. a-priori plan
  const auto plan = apriori_plan(state, cfg, net, econ, ou, note);

  // 3. roll the plan forward on every path
  //    pre[p][tau][a], post[p][tau][a], tau = 1..T (index tau-1)
  const std::size_t stage_stride = A;
  const std::size_t path_stride = T * A;
  std::vector<double> pre(P * path_stride), post(P * path_stride);
  std::vector<char> decisions(P * path_stride);
  auto idx = [&](int p, int tau, std::size_t a) {
    return p * path_stride + (tau - 1) * stage_stride + a;
  };
  for (int p = 0; p < P; ++p) {
    for (std::size_t a = 0; a < A; ++a) {
      double s = state.inventory[a] + stage_rate(p, 1, a);  // undo stage-1 consumption
      for (int tau = 1; tau <= T; ++tau) {
        s -= stage_rate(p, tau, a);
        pre[idx(p, tau, a)] = s;
        const char y = net.arcs[a].q == 1 ? plan[tau - 1][a] : 0;
        decisions[idx(p, tau, a)] = y;
        s = y ? net.arcs[a].q : s;
        post[idx(p, tau, a)] = s;
      }
    }
  }

  // 4. backward sweep: fit the stock-out-cost-at-next-replenishment
  //    surrogate per arc across paths, then re-decide each path with the
  //    selective VRP and update the value bookkeeping
  std::vector<double> V(P * A, 0.0);  // value entering the stage below
  std::vector<double> stage1_solution;
  std::vector<char> stage1_y(A, 0);

  for (int tau = T; tau >= 1; --tau) {
    std::vector<FitResult> fits(A);
    const bool terminal = (tau == T);
    if (!terminal) {
      for (std::size_t a = 0; a < A; ++a) {
        if (net.arcs[a].q != 1) continue;
        std::vector<double> xs(P), ys(P);
        for (int p = 0; p < P; ++p) {
          xs[p] = post[idx(p, tau, a)];
          ys[p] = V[p * A + a];
        }
        fits[a] = fit(xs, ys, cfg.basis);
      }
    }

    auto payoff = [&](std::size_t a, double s_pre) {
      // rho R(q) - rho R(s) + h (q - s), surrogate clamped to [0, rho]
      if (terminal) return econ.h[a] * (net.arcs[a].q - s_pre);
      const std::optional<double> clamp =
          cfg.clamp_predictions ? std::optional<double>(econ.rho[a]) : std::nullopt;
      const double at_full = predict(fits[a], net.arcs[a].q, clamp);
      const double at_cur = predict(fits[a], s_pre, clamp);
      return at_full - at_cur + econ.h[a] * (net.arcs[a].q - s_pre);
    };

    if (tau == 1) {
      // all paths share the observed state: one solve decides the period
      std::vector<double> pi(A, 0.0);
      for (std::size_t a = 0; a < A; ++a)
        if (net.arcs[a].q == 1) pi[a] = payoff(a, state.inventory[a]);
      StageSolveResult r = decide_stage(net, pi, cfg.subproblem, /*want_solution=*/true);
      if (!r.solved) note += "stage-1 subproblem hit its budget, keeping no-deploy; ";
      stage1_y = r.y;
      stage1_solution = std::move(r.solution);
      if (trace) {
        nlohmann::json j;
        j["tau"] = tau;
        j["pi"] = pi;
        j["y"] = nlohmann::json::array();
        for (std::size_t a = 0; a < A; ++a)
          if (stage1_y[a]) j["y"].push_back(a);
        *trace << j.dump() << "\n";
      }
      break;
    }

    std::vector<char> solved_flags(P, 1);
    parallel_for(P, cfg.threads, [&](std::size_t p) {
      std::vector<double> pi(A, 0.0);
      bool candidate = false;
      for (std::size_t a = 0; a < A; ++a)
        if (net.arcs[a].q == 1) {
          pi[a] = payoff(a, pre[idx(static_cast<int>(p), tau, a)]);
          candidate |= pi[a] < 0.0;
        }
      StageSolveResult r =
          candidate ? decide_stage(net, pi, cfg.subproblem, false) : StageSolveResult{};
      if (r.y.empty()) r.y.assign(A, 0);
      solved_flags[p] = r.solved ? 1 : 0;
      for (std::size_t a = 0; a < A; ++a) {
        if (net.arcs[a].q != 1) continue;
        const char y = r.y[a];
        const double s_pre = pre[idx(static_cast<int>(p), tau, a)];
        decisions[idx(static_cast<int>(p), tau, a)] = y;
        post[idx(static_cast<int>(p), tau, a)] = y ? net.arcs[a].q : s_pre;
        double& v = V[p * A + a];
        if (y)
          v = s_pre < 0.0 ? econ.rho[a] : 0.0;  // replenishment is the next event
        else if (s_pre < 0.0)
          v = econ.rho[a];  // went negative before any later replenishment
        // else: value passes through from the later stages
      }
    });
    for (int p = 0; p < P; ++p)
      if (!solved_flags[p]) {
        note += "stage " + std::to_string(tau) + " path " + std::to_string(p) +
                " subproblem hit its budget, kept no-deploy; ";
      }

    if (trace) {
      nlohmann::json j;
      j["tau"] = tau;
      j["fits"] = nlohmann::json::array();
      for (std::size_t a = 0; a < A; ++a)
        if (net.arcs[a].q == 1 && !terminal)
          j["fits"].push_back({{"arc", a}, {"beta", fits[a].beta}, {"cond", fits[a].condition}});
      long deployed = 0;
      for (int p = 0; p < P; ++p)
        for (std::size_t a = 0; a < A; ++a) deployed += decisions[idx(p, tau, a)];
      j["path_deployments"] = deployed;
      *trace << j.dump() << "\n";
    }
  }

  // 5. the stage-1 decision is the period decision
  Routes routes;
  if (!stage1_solution.empty()) {
    SvrpInstance inst;
    inst.net = net;
    inst.pi.assign(A, 0.0);
    inst.prune_nonnegative_payoffs = false;
    SvrpModel sm = build_svrp_model(inst);
    routes = extract_routes(sm.view, stage1_solution);
  } else {
    bool any = false;
    for (char y : stage1_y) any |= (y != 0);
    if (any) {
      // budget fallback: myopic selection routed directly
      auto thr = cfg.myopic_threshold;
      if (thr.empty()) {
        thr.resize(A);
        for (std::size_t a = 0; a < A; ++a) thr[a] = ou[a].mu;
      }
      auto routed = detail::route_selection(stage1_y, net, cfg.subproblem);
      if (routed) {
        routes = std::move(*routed);
      } else {
        stage1_y.assign(A, 0);
        note += "stage-1 routing failed, deploying nothing; ";
      }
    } else {
      routes.vehicles.resize(net.fleet_size);
      for (int p = 0; p < net.fleet_size; ++p) routes.vehicles[p].vehicle = p + 1;
    }
  }

  DecisionRecord rec = finish_record(state, stage1_y, std::move(routes), net, econ);
  rec.note = std::move(note);
  return rec;
}

}  // namespace sdairp
