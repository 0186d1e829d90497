#include "sdairp/inventory.hpp"

#include <stdexcept>

namespace sdairp {

InventoryStep inventory_step(const std::vector<double>& inventory,
                             const std::vector<double>& realized_rates,
                             const std::vector<char>& selection, const Network& net) {
  const std::size_t A = net.arcs.size();
  if (inventory.size() != A || realized_rates.size() != A || selection.size() != A)
    throw std::invalid_argument("inventory_step: per-arc vector size mismatch");

  InventoryStep out;
  out.pre.resize(A);
  out.post.resize(A);
  out.stockout.assign(A, 0);
  for (std::size_t a = 0; a < A; ++a) {
    out.pre[a] = inventory[a] - realized_rates[a];
    out.stockout[a] = out.pre[a] < 0.0 ? 1 : 0;
    out.post[a] = selection[a] ? static_cast<double>(net.arcs[a].q) : out.pre[a];
  }
  return out;
}

}  // namespace sdairp
