#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdairp {

// Parse or validation failure; carries a 1-based line number when the source
// location is known (0 otherwise).
class InstanceError : public std::runtime_error {
 public:
  InstanceError(std::string msg, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + std::move(msg)
                                    : std::move(msg)),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Undirected arc (i,j) == (j,i), stored with i < j.
struct Arc {
  int i = 0;
  int j = 0;
  double c = 0.0;    // traversal fuel cost, > 0
  double e = 0.0;    // additional service fuel cost, >= 0
  int q = 0;         // binary demand flag
  int demand = 0;    // original integer demand (benchmark metadata, not used by models)
};

// Monitoring network plus fleet parameters. Immutable after construction;
// safe to share read-only across parallel workers.
struct Network {
  int nodes = 0;
  int depot = 1;  // node 1 by convention
  std::vector<Arc> arcs;
  int fleet_size = 1;          // K
  double fuel_capacity = 0.0;  // W, in cost units
  int recharge_periods = 0;    // zeta

  // Index of undirected arc (i,j) in `arcs`, or -1.
  int arc_index(int i, int j) const;

  // Checks every structural invariant: endpoints in range, no self loops or
  // duplicate pairs, c > 0, e >= 0, q in {0,1}, K >= 1, W > 0, zeta >= 0,
  // and that every demanded arc is reachable from the depot through the full
  // graph. Throws InstanceError naming the violated invariant.
  void validate() const;
};

// Canonical instance format: `nodes <n> depot 1 K <k> W <w> zeta <z>` header,
// then `arc <i> <j> c <cost> e <cost> q <0|1>` lines; `#` starts a comment.
Network parse_canonical(const std::string& text);

// Serializes to the canonical format (header, then arcs in stored order).
// parse_canonical followed by serialize_canonical is the identity on
// normalized documents.
std::string serialize_canonical(const Network& net);

// Imports a DeArmon/gdb benchmark file (VERTICES / ARISTAS_REQ / VEHICULOS /
// CAPACIDAD keyword blocks with a `( i , j ) coste c demanda d` edge list).
// K and W are taken from the file, original integer demands are kept as
// metadata, and q is left 0 everywhere: callers binarize explicitly.
Network import_gdb(const std::string& text);

// Returns a copy with q = 1 wherever the original integer demand is
// positive, 0 elsewhere; everything else unchanged.
Network binarize_demands(const Network& net);

Network load_network_file(const std::string& path);

}  // namespace sdairp
