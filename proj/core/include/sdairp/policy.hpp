#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sdairp/formulations.hpp"
#include "sdairp/inventory.hpp"
#include "sdairp/mip.hpp"
#include "sdairp/network.hpp"
#include "sdairp/ou.hpp"

namespace sdairp {

// Per-arc cost data shared by the policies.
struct ArcEconomics {
  std::vector<double> h;    // holding cost / period
  std::vector<double> rho;  // stock-out penalty
};

// One period's decision and its realized cost ledger.
struct DecisionRecord {
  int period = 0;
  std::vector<char> selected;  // y per arc
  Routes routes;
  double X = 0.0;  // traversal cost, equals routes.total_cost
  double H = 0.0;  // holding  = sum h * post-decision inventory
  double O = 0.0;  // stock-out = sum rho over flagged arcs
  std::vector<double> pre, post, rate;
  std::vector<char> stockout;
  std::string note;  // degradations (dropped arcs, fallbacks), empty when clean

  double total() const { return X + H + O; }
  std::string to_json() const;
};

// Fills pre/post/flags and the X/H/O ledger for a chosen selection. The
// state already carries pre-decision inventories, so no rate is applied
// here; stock-outs are flagged where the pre-decision level is negative.
DecisionRecord finish_record(const StateSnapshot& state, const std::vector<char>& selection,
                             Routes routes, const Network& net, const ArcEconomics& econ);

// Myopic policy: select every demanded arc whose pre-decision inventory is
// strictly below its threshold, route the selection with a restricted CARP,
// and drop the highest-inventory selected arcs until routing is feasible
// (recorded in the note, never fatal).
DecisionRecord myopic_decide(const StateSnapshot& state, const std::vector<double>& thresholds,
                             const Network& net, const ArcEconomics& econ,
                             const SolverConfig& cfg = {});

// Precomputed deployment plan replayed by the static policy.
struct StaticSchedule {
  std::vector<std::vector<char>> selected;  // per period, per arc
  std::vector<Routes> routes;               // per period
  std::string note;
};

// Replays period t of the schedule regardless of the realized state; costs
// are accounted against the realized state. Throws std::out_of_range past
// the end of the schedule.
DecisionRecord static_decide(const StaticSchedule& schedule, const StateSnapshot& state,
                             const Network& net, const ArcEconomics& econ);

// Builds the static schedule from the deterministic multi-period solution.
// When the exact solve does not produce an incumbent within the budget it
// falls back to the cyclic plan (deploy every ceil(q/mu) periods), noted in
// the schedule.
StaticSchedule build_static_schedule(const Network& net, const ArcEconomics& econ,
                                     const std::vector<OUParams>& ou,
                                     const std::vector<double>& s0, int horizon,
                                     const SolverConfig& cfg);

enum class AprioriPolicy { DeterministicAirp, NaiveCyclic };

struct SdairpConfig {
  int lookahead = 2;   // T  >= 1
  int paths = 100;     // P  >= 2
  int basis = 5;       // M  >= 1
  double gamma = 1.0;  // finite-horizon, fixed at 1
  AprioriPolicy apriori = AprioriPolicy::NaiveCyclic;
  double apriori_time_budget = 2.0;        // seconds for the exact seed attempt
  std::vector<double> myopic_threshold;    // per-arc fallback when a solve fails
  std::uint64_t seed = 0;                  // inner sample-path namespace
  int threads = 1;
  bool clamp_predictions = true;           // clamp fitted stock-out costs to [0, rho]
  SolverConfig subproblem;                 // budget for the per-path solves

  void validate(std::size_t arcs) const;
};

// The modified least-squares Monte Carlo policy: simulate P inner paths from
// the observed rates, roll an a-priori plan forward, then sweep backward
// fitting per-arc stock-out-cost-at-next-replenishment surrogates and
// re-deciding each stage with a selective VRP. Returns the current-period
// decision with routes. Deterministic for a fixed seed, any thread count.
// Optional trace receives one JSON line per backward stage for audit.
DecisionRecord lsm_decide(const StateSnapshot& state, const SdairpConfig& cfg, const Network& net,
                          const ArcEconomics& econ, const std::vector<OUParams>& ou,
                          std::ostream* trace = nullptr);

}  // namespace sdairp
