#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "routing_detail.hpp"
#include "sdairp/formulations.hpp"

namespace sdairp {

void AirpInstance::validate() const {
  net.validate();
  const std::size_t A = net.arcs.size();
  if (horizon < 1) throw std::invalid_argument("AirpInstance: horizon must be >= 1");
  if (h.size() != A || r.size() != A || s0.size() != A)
    throw std::invalid_argument("AirpInstance: h, r, s0 must have one entry per arc");
  for (std::size_t a = 0; a < A; ++a) {
    if (!(r[a] >= 0)) throw std::invalid_argument("AirpInstance: consumption rate must be >= 0");
    if (s0[a] < 0 || s0[a] > net.arcs[a].q)
      throw std::invalid_argument("AirpInstance: initial inventory outside [0, q]");
    if (!(h[a] >= 0)) throw std::invalid_argument("AirpInstance: holding cost must be >= 0");
  }
}

AirpModel build_airp_model(const AirpInstance& inst) {
  inst.validate();
  const Network& net = inst.net;
  const int T = inst.horizon;
  const std::size_t A = net.arcs.size();

  double max_q = 0, max_r = 0;
  for (std::size_t a = 0; a < A; ++a) {
    max_q = std::max(max_q, double(net.arcs[a].q));
    max_r = std::max(max_r, inst.r[a]);
    if (inst.r[a] > net.arcs[a].q)
      throw std::invalid_argument("AirpInstance: rate exceeds q on arc (" +
                                  std::to_string(net.arcs[a].i) + "," +
                                  std::to_string(net.arcs[a].j) +
                                  "), inventory bounds are unsatisfiable");
  }
  const double M = inst.big_m > 0 ? inst.big_m : 2.0 * (max_q + max_r);
  if (M < max_q) throw std::invalid_argument("AirpInstance: big-M below max q");

  AirpModel out;
  out.model.sense = ObjSense::Min;
  LinearModel& m = out.model;

  for (int t = 1; t <= T; ++t)
    out.periods.push_back(detail::add_routing_block(m, net, "_t" + std::to_string(t)));

  // inventory variables with the (4m) bounds r <= s <= q for every period;
  // the pinned t=0 level is data and carries no holding cost
  out.s_idx.assign(A, std::vector<int>(T + 1, -1));
  for (std::size_t a = 0; a < A; ++a)
    for (int t = 0; t <= T; ++t)
      out.s_idx[a][t] = m.add_var("s_" + std::to_string(net.arcs[a].i) + "_" +
                                      std::to_string(net.arcs[a].j) + "_t" + std::to_string(t),
                                  inst.r[a], net.arcs[a].q, VarKind::Continuous,
                                  t == 0 ? 0.0 : inst.h[a]);

  // pin the initial inventory; infeasible when s0 violates the bounds above
  for (std::size_t a = 0; a < A; ++a)
    m.add_con("s0_" + std::to_string(a), {{out.s_idx[a][0], 1.0}}, ConSense::EQ, inst.s0[a]);

  auto service_terms = [&](int t, std::size_t a, double coef) {
    std::vector<std::pair<int, double>> terms;
    const auto& view = out.periods[t - 1];
    for (int p = 0; p < view.K; ++p) {
      terms.push_back({view.l(p, 2 * static_cast<int>(a)), coef});
      terms.push_back({view.l(p, 2 * static_cast<int>(a) + 1), coef});
    }
    return terms;
  };

  for (int t = 1; t <= T; ++t) {
    for (std::size_t a = 0; a < A; ++a) {
      const std::string sfx = "_" + std::to_string(a) + "_t" + std::to_string(t);

      // coverage at most once per arc-period
      m.add_con("once" + sfx, service_terms(t, a, 1.0), ConSense::LE, 1.0);

      // inventory continuity when unmonitored: |s_{t-1} - r - s_t| <= M L
      auto lo = service_terms(t, a, M);
      lo.push_back({out.s_idx[a][t - 1], 1.0});
      lo.push_back({out.s_idx[a][t], -1.0});
      m.add_con("inv_lo" + sfx, std::move(lo), ConSense::GE, inst.r[a]);

      auto hi = service_terms(t, a, -M);
      hi.push_back({out.s_idx[a][t - 1], 1.0});
      hi.push_back({out.s_idx[a][t], -1.0});
      m.add_con("inv_hi" + sfx, std::move(hi), ConSense::LE, inst.r[a]);

      // order-up-to when monitored: s_t >= q - M (1 - L)
      auto up = service_terms(t, a, -M);
      up.push_back({out.s_idx[a][t], 1.0});
      m.add_con("orderup" + sfx, std::move(up), ConSense::GE, net.arcs[a].q - M);
    }
  }

  // recharge lockout: a vehicle leaving the depot at t cannot leave again
  // for the next zeta periods
  if (net.recharge_periods > 0) {
    const double Mh = net.nodes;  // departures per period are < n
    for (int p = 0; p < net.fleet_size; ++p)
      for (int t = 1; t <= T; ++t)
        for (int tau = 1; tau <= net.recharge_periods && t + tau <= T; ++tau) {
          std::vector<std::pair<int, double>> terms;
          for (int d = 0; d < out.periods[0].directed_arcs; ++d) {
            if (out.periods[0].tail(d) != net.depot) continue;
            terms.push_back({out.periods[t - 1].x(p, d), Mh});
            terms.push_back({out.periods[t + tau - 1].x(p, d), 1.0});
          }
          if (!terms.empty())
            m.add_con("recharge_p" + std::to_string(p + 1) + "_t" + std::to_string(t) + "_tau" +
                          std::to_string(tau),
                      std::move(terms), ConSense::LE, Mh);
        }
  }

  m.validate();
  return out;
}

}  // namespace sdairp
