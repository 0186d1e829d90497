#include <algorithm>
#include <stdexcept>

#include <json.hpp>

#include "sdairp/formulations.hpp"

namespace sdairp {

Routes extract_routes(const RoutingView& view, const std::vector<double>& solution) {
  Routes out;
  const int nd = view.directed_arcs;
  const int n = view.net.nodes;

  for (int p = 0; p < view.K; ++p) {
    VehicleRoute route;
    route.vehicle = p + 1;

    std::vector<int> used;  // directed arcs traversed by this vehicle
    for (int d = 0; d < nd; ++d)
      if (solution[view.x(p, d)] > 0.5) used.push_back(d);

    for (int d = 0; d < nd; ++d) {
      if (solution[view.l(p, d)] > 0.5) {
        if (solution[view.x(p, d)] <= 0.5)
          throw std::runtime_error("internal inconsistency: service without traversal");
        route.serviced.push_back({view.tail(d), view.head(d)});
        route.fuel += view.service_cost(d);
      }
    }
    for (int d : used) {
      route.fuel += view.cost(d);
      route.cost += view.cost(d);
    }
    if (route.fuel > view.net.fuel_capacity + 1e-6)
      throw std::runtime_error("internal inconsistency: fuel use exceeds capacity");

    if (!used.empty()) {
      std::vector<int> outdeg(n + 1, 0), indeg(n + 1, 0);
      std::vector<std::vector<int>> out_arcs(n + 1);
      for (int d : used) {
        ++outdeg[view.tail(d)];
        ++indeg[view.head(d)];
        out_arcs[view.tail(d)].push_back(d);
      }
      for (int i = 1; i <= n; ++i)
        if (outdeg[i] != indeg[i])
          throw std::runtime_error("internal inconsistency: unbalanced traversal at node " +
                                   std::to_string(i));
      if (outdeg[view.net.depot] == 0)
        throw std::runtime_error("internal inconsistency: traversals not rooted at the depot");

      // prefer flow-carrying arcs, then lowest arc index
      for (auto& lst : out_arcs)
        std::sort(lst.begin(), lst.end(), [&](int a, int b) {
          const double fa = solution[view.f(p, a)], fb = solution[view.f(p, b)];
          if (fa != fb) return fa > fb;
          return a < b;
        });

      // Hierholzer closed walk from the depot
      std::vector<std::size_t> next(n + 1, 0);
      std::vector<int> stack{view.net.depot}, circuit;
      while (!stack.empty()) {
        const int v = stack.back();
        if (next[v] < out_arcs[v].size()) {
          const int d = out_arcs[v][next[v]++];
          stack.push_back(view.head(d));
        } else {
          circuit.push_back(v);
          stack.pop_back();
        }
      }
      std::reverse(circuit.begin(), circuit.end());
      if (circuit.size() != used.size() + 1)
        throw std::runtime_error("internal inconsistency: traversals disconnected from the depot");
      route.walk = std::move(circuit);
    }

    out.total_cost += route.cost;
    out.vehicles.push_back(std::move(route));
  }
  return out;
}

std::string Routes::to_json() const {
  nlohmann::json j;
  j["total_cost"] = total_cost;
  j["vehicles"] = nlohmann::json::array();
  for (const auto& v : vehicles) {
    nlohmann::json jv;
    jv["vehicle"] = v.vehicle;
    jv["walk"] = v.walk;
    jv["serviced"] = nlohmann::json::array();
    for (const auto& [i, k] : v.serviced) jv["serviced"].push_back({i, k});
    jv["fuel"] = v.fuel;
    jv["cost"] = v.cost;
    j["vehicles"].push_back(std::move(jv));
  }
  return j.dump(2);
}

}  // namespace sdairp
