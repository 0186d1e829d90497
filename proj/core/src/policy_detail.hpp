#pragma once

#include <optional>

#include "sdairp/policy.hpp"

namespace sdairp::detail {

std::optional<Routes> route_selection(const std::vector<char>& selection, const Network& net,
                                      const SolverConfig& cfg);

}  // namespace sdairp::detail
