#pragma once

#include <vector>

#include "sdairp/network.hpp"

namespace sdairp {

// Per-period state a policy observes: pre-decision inventories (consumption
// for the period already applied, so values can be negative at a stock-out),
// the current consumption rates, and vehicle recharge countdowns.
struct StateSnapshot {
  int period = 0;
  std::vector<double> inventory;        // per arc, pre-decision
  std::vector<double> rate;             // per arc
  std::vector<int> vehicle_ready_in;    // per vehicle, 0 = available
};

struct InventoryStep {
  std::vector<double> pre;    // s - r
  std::vector<double> post;   // q where selected, else pre (order-up-to)
  std::vector<char> stockout; // pre < 0
};

// One period of inventory dynamics shared by every policy: consumption,
// stock-out flagging, then order-up-to replenishment on the selected arcs.
InventoryStep inventory_step(const std::vector<double>& inventory,
                             const std::vector<double>& realized_rates,
                             const std::vector<char>& selection, const Network& net);

}  // namespace sdairp
