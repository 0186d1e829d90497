#include <algorithm>
#include <limits>
#include <string>

#include "routing_detail.hpp"
#include "sdairp/formulations.hpp"

namespace sdairp {

namespace detail {

// Appends one period's routing variables and constraints (flow conservation,
// service implies traversal, fuel, service-flow subtour elimination) to
// `m`. Coverage is period-specific and added by each builder.
RoutingView add_routing_block(LinearModel& m, const Network& net, const std::string& tag,
                              bool tight_flow_cap) {
  RoutingView v;
  v.net = net;
  v.K = net.fleet_size;
  v.directed_arcs = static_cast<int>(net.arcs.size()) * 2;
  const int n = net.nodes;
  const int K = v.K;
  const int nd = v.directed_arcs;

  auto dname = [&](const char* stem, int p, int d) {
    const auto& a = net.arcs[d / 2];
    const int i = d % 2 == 0 ? a.i : a.j;
    const int j = d % 2 == 0 ? a.j : a.i;
    return std::string(stem) + tag + "_p" + std::to_string(p + 1) + "_" + std::to_string(i) + "_" +
           std::to_string(j);
  };

  v.x_idx.resize(K * nd);
  v.l_idx.resize(K * nd);
  v.f_idx.resize(K * nd);
  for (int p = 0; p < K; ++p)
    for (int d = 0; d < nd; ++d)
      v.x_idx[p * nd + d] = m.add_var(dname("x", p, d), 0, 1, VarKind::Binary, v.cost(d));
  for (int p = 0; p < K; ++p)
    for (int d = 0; d < nd; ++d)
      v.l_idx[p * nd + d] = m.add_var(dname("l", p, d), 0, 1, VarKind::Binary);
  for (int p = 0; p < K; ++p)
    for (int d = 0; d < nd; ++d)
      v.f_idx[p * nd + d] = m.add_var(dname("f", p, d), 0,
                                      std::numeric_limits<double>::infinity(),
                                      VarKind::Continuous);

  // traversal flow conservation at every node
  for (int p = 0; p < K; ++p)
    for (int i = 1; i <= n; ++i) {
      std::vector<std::pair<int, double>> terms;
      for (int d = 0; d < nd; ++d) {
        if (v.head(d) == i) terms.push_back({v.x(p, d), 1.0});
        if (v.tail(d) == i) terms.push_back({v.x(p, d), -1.0});
      }
      if (!terms.empty())
        m.add_con("flow" + tag + "_p" + std::to_string(p + 1) + "_n" + std::to_string(i),
                  std::move(terms), ConSense::EQ, 0.0);
    }

  // service requires traversal
  for (int p = 0; p < K; ++p)
    for (int d = 0; d < nd; ++d)
      m.add_con("srv" + tag + "_p" + std::to_string(p + 1) + "_d" + std::to_string(d),
                {{v.x(p, d), 1.0}, {v.l(p, d), -1.0}}, ConSense::GE, 0.0);

  // fuel capacity per vehicle
  for (int p = 0; p < K; ++p) {
    std::vector<std::pair<int, double>> terms;
    for (int d = 0; d < nd; ++d) {
      terms.push_back({v.x(p, d), v.cost(d)});
      if (v.service_cost(d) != 0.0) terms.push_back({v.l(p, d), v.service_cost(d)});
    }
    m.add_con("fuel" + tag + "_p" + std::to_string(p + 1), std::move(terms), ConSense::LE,
              net.fuel_capacity);
  }

  // service-flow balance away from the depot, flow only on traversed arcs
  for (int p = 0; p < K; ++p)
    for (int i = 2; i <= n; ++i) {
      std::vector<std::pair<int, double>> terms;
      for (int d = 0; d < nd; ++d) {
        if (v.tail(d) == i) {
          terms.push_back({v.f(p, d), 1.0});
          terms.push_back({v.l(p, d), -1.0});
        }
        if (v.head(d) == i) terms.push_back({v.f(p, d), -1.0});
      }
      if (!terms.empty())
        m.add_con("sflow" + tag + "_p" + std::to_string(p + 1) + "_n" + std::to_string(i),
                  std::move(terms), ConSense::EQ, 0.0);
    }
  // a vehicle sources at most one flow unit per serviced arc, so the arc
  // count is a valid cap; n^2 is the loose default
  const double cap = tight_flow_cap ? std::min<double>(net.arcs.size(), double(n) * n)
                                    : double(n) * n;
  for (int p = 0; p < K; ++p)
    for (int d = 0; d < nd; ++d)
      m.add_con("fcap" + tag + "_p" + std::to_string(p + 1) + "_d" + std::to_string(d),
                {{v.f(p, d), 1.0}, {v.x(p, d), -cap}}, ConSense::LE, 0.0);

  return v;
}

void add_vehicle_ordering(LinearModel& m, const std::vector<RoutingView>& periods) {
  if (periods.empty() || periods.front().K < 2) return;
  const int K = periods.front().K;
  for (int p = 0; p + 1 < K; ++p) {
    std::vector<std::pair<int, double>> terms;
    for (const auto& view : periods)
      for (int d = 0; d < view.directed_arcs; ++d) {
        terms.push_back({view.x(p, d), view.cost(d)});
        terms.push_back({view.x(p + 1, d), -view.cost(d)});
      }
    m.add_con("vorder_p" + std::to_string(p + 1), std::move(terms), ConSense::GE, 0.0);
  }
}

}  // namespace detail

CarpModel build_carp_model(const CarpInstance& inst) {
  inst.net.validate();
  CarpModel out;
  out.model.sense = ObjSense::Min;
  out.view = detail::add_routing_block(out.model, inst.net, "", inst.strengthen);
  if (inst.strengthen) detail::add_vehicle_ordering(out.model, {out.view});

  // demand coverage, one service over the two directions across the fleet
  const auto& net = inst.net;
  for (std::size_t a = 0; a < net.arcs.size(); ++a) {
    std::vector<std::pair<int, double>> terms;
    for (int p = 0; p < out.view.K; ++p) {
      terms.push_back({out.view.l(p, 2 * static_cast<int>(a)), 1.0});
      terms.push_back({out.view.l(p, 2 * static_cast<int>(a) + 1), 1.0});
    }
    out.model.add_con("cover_" + std::to_string(net.arcs[a].i) + "_" + std::to_string(net.arcs[a].j),
                      std::move(terms), ConSense::EQ, net.arcs[a].q);
  }
  out.model.validate();
  return out;
}

std::optional<std::vector<double>> greedy_carp_warm_start(const CarpModel& cm) {
  const RoutingView& v = cm.view;
  const Network& net = v.net;
  const int n = net.nodes;
  const int nd = v.directed_arcs;

  // all-pairs shortest paths with predecessor arcs (Floyd-Warshall scale)
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> dist(n + 1, std::vector<double>(n + 1, inf));
  std::vector<std::vector<int>> via(n + 1, std::vector<int>(n + 1, -1));  // first directed arc
  for (int i = 1; i <= n; ++i) dist[i][i] = 0;
  for (int d = 0; d < nd; ++d)
    if (v.cost(d) < dist[v.tail(d)][v.head(d)]) {
      dist[v.tail(d)][v.head(d)] = v.cost(d);
      via[v.tail(d)][v.head(d)] = d;
    }
  for (int k = 1; k <= n; ++k)
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        if (dist[i][k] + dist[k][j] < dist[i][j]) {
          dist[i][j] = dist[i][k] + dist[k][j];
          via[i][j] = via[i][k];
        }
  auto append_path = [&](std::vector<int>& walk, int from, int to) {
    while (from != to) {
      const int d = via[from][to];
      if (d < 0) return false;
      walk.push_back(d);
      from = v.head(d);
    }
    return true;
  };

  std::vector<char> served(net.arcs.size(), 0);
  std::size_t remaining = 0;
  for (std::size_t a = 0; a < net.arcs.size(); ++a)
    if (net.arcs[a].q == 1) ++remaining;

  struct Built {
    std::vector<int> walk;
    std::vector<std::size_t> svc;
    double cost = 0;
  };
  std::vector<Built> fleet;
  for (int p = 0; p < v.K && remaining > 0; ++p) {
    Built b;
    int pos = net.depot;
    double fuel = 0;
    while (true) {
      int best_d = -1;
      double best_cost = inf;
      for (std::size_t a = 0; a < net.arcs.size(); ++a) {
        if (net.arcs[a].q != 1 || served[a]) continue;
        for (int dir = 0; dir < 2; ++dir) {
          const int d = 2 * static_cast<int>(a) + dir;
          const double go = dist[pos][v.tail(d)] + v.cost(d) + v.service_cost(d);
          if (fuel + go + dist[v.head(d)][net.depot] > net.fuel_capacity + 1e-9) continue;
          if (go < best_cost) {
            best_cost = go;
            best_d = d;
          }
        }
      }
      if (best_d < 0) break;
      if (!append_path(b.walk, pos, v.tail(best_d))) return std::nullopt;
      b.svc.push_back(b.walk.size());
      b.walk.push_back(best_d);
      fuel += best_cost;
      pos = v.head(best_d);
      served[best_d / 2] = 1;
      --remaining;
    }
    if (!append_path(b.walk, pos, net.depot)) return std::nullopt;
    for (int d : b.walk) b.cost += v.cost(d);
    fleet.push_back(std::move(b));
  }
  if (remaining > 0) return std::nullopt;

  // costliest vehicle first so the ordering rows of a strengthened model hold
  std::stable_sort(fleet.begin(), fleet.end(),
                   [](const Built& a, const Built& b) { return a.cost > b.cost; });

  std::vector<double> x(cm.model.vars.size(), 0.0);
  for (std::size_t p = 0; p < fleet.size(); ++p) {
    const Built& b = fleet[p];
    std::vector<char> used(nd, 0);
    for (int d : b.walk) {
      if (used[d]) return std::nullopt;  // binary traversal violated
      used[d] = 1;
      x[v.x(int(p), d)] = 1.0;
    }
    for (std::size_t k : b.svc) x[v.l(int(p), b.walk[k])] = 1.0;
    // service flow: each serviced unit rides the rest of the walk home
    for (std::size_t k : b.svc)
      for (std::size_t w = k; w < b.walk.size(); ++w) x[v.f(int(p), b.walk[w])] += 1.0;
  }
  if (!cm.model.satisfies(x, 1e-7, 1e-6)) return std::nullopt;
  return x;
}

}  // namespace sdairp
