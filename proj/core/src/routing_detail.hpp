#pragma once

#include <limits>
#include <string>

#include "sdairp/formulations.hpp"

namespace sdairp::detail {

RoutingView add_routing_block(LinearModel& m, const Network& net, const std::string& tag,
                              bool tight_flow_cap = false);

// Identical vehicles can be ordered by traversal cost without losing any
// optimal objective value.
void add_vehicle_ordering(LinearModel& m, const std::vector<RoutingView>& periods);

}  // namespace sdairp::detail
