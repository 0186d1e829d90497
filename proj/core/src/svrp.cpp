#include <cmath>
#include <stdexcept>

#include "routing_detail.hpp"
#include "sdairp/formulations.hpp"

namespace sdairp {

SvrpModel build_svrp_model(const SvrpInstance& inst) {
  inst.net.validate();
  const Network& net = inst.net;
  if (inst.pi.size() != net.arcs.size())
    throw std::invalid_argument("SvrpInstance: one payoff coefficient per arc required");
  for (double p : inst.pi)
    if (!std::isfinite(p)) throw std::invalid_argument("SvrpInstance: non-finite payoff");

  SvrpModel out;
  out.model.sense = ObjSense::Min;
  out.view = detail::add_routing_block(out.model, net, "", inst.strengthen);
  if (inst.strengthen) detail::add_vehicle_ordering(out.model, {out.view});

  for (std::size_t a = 0; a < net.arcs.size(); ++a) {
    const bool prune = inst.prune_nonnegative_payoffs && inst.pi[a] >= 0.0;
    const int y = out.model.add_var("y_" + std::to_string(net.arcs[a].i) + "_" +
                                        std::to_string(net.arcs[a].j),
                                    0, prune ? 0 : 1, VarKind::Binary, inst.pi[a]);
    out.y_idx.push_back(y);

    // selection coupling: the arc is serviced exactly when selected
    std::vector<std::pair<int, double>> terms;
    for (int p = 0; p < out.view.K; ++p) {
      terms.push_back({out.view.l(p, 2 * static_cast<int>(a)), 1.0});
      terms.push_back({out.view.l(p, 2 * static_cast<int>(a) + 1), 1.0});
    }
    terms.push_back({y, -1.0});
    out.model.add_con("select_" + std::to_string(net.arcs[a].i) + "_" +
                          std::to_string(net.arcs[a].j),
                      std::move(terms), ConSense::EQ, 0.0);
  }
  out.model.validate();
  return out;
}

}  // namespace sdairp
