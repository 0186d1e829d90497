#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sdairp/network.hpp"
#include "sdairp/ou.hpp"
#include "sdairp/policy.hpp"

namespace sdairp {

enum class PolicyKind { Static, Myopic, Sdairp };

struct PolicyEntry {
  PolicyKind kind = PolicyKind::Myopic;
  std::string label;
  // sdairp parameters
  int lookahead = 2;
  int paths = 100;
  int basis = 5;
  std::string apriori = "cyclic";  // or "airp"
};

// Declarative description of a policy-comparison experiment: the network,
// per-arc stochastic parameters, the true-trajectory seeds, the evaluation
// horizon and the policy roster.
struct ExperimentSpec {
  Network net;
  std::vector<OUParams> ou;          // per arc; sigma = 0 marks deterministic arcs
  std::vector<double> s0;            // per arc initial inventory
  ArcEconomics econ;                 // per arc h and rho
  std::vector<double> thresholds;    // per arc myopic threshold (defaults to mu)
  int horizon = 5;
  int realizations = 30;
  std::uint64_t seed_base = 1;       // realization k uses seed_base + k
  std::vector<PolicyEntry> roster;
  std::string baseline = "myopic";   // label for percentage deltas

  void validate() const;
};

// Text format of the experiment document: `instance <path>` plus keyword
// lines (horizon, realizations, seed-base, rho-default, h-default, ou, rho,
// h, threshold, policy, baseline); `#` starts a comment. Paths are resolved
// relative to `base_dir`.
ExperimentSpec parse_experiment(const std::string& text, const std::string& base_dir);
ExperimentSpec load_experiment_file(const std::string& path);

struct PolicyPeriodMean {
  double X = 0, H = 0, O = 0;
  double total() const { return X + H + O; }
};

struct PolicySummary {
  std::string label;
  std::vector<PolicyPeriodMean> periods;  // per period means over realizations
  PolicyPeriodMean totals;                // sums of the period means
  bool has_delta = false;
  double delta_vs_baseline = 0.0;         // (total - baseline) / baseline
};

struct Summary {
  std::vector<PolicySummary> policies;
  std::string baseline;

  // CSV layout: policy,period,X,H,O,total with a closing "total" row per
  // policy.
  void write_csv(std::ostream& os) const;
  std::string to_json() const;
};

struct RealizationLedger {
  std::uint64_t seed = 0;
  std::vector<DecisionRecord> records;  // one per period
};

// Runs one policy on one ground-truth trajectory: the realized rates come
// from a seed namespace disjoint from any policy-internal sampling, the
// policy observes the realized pre-decision state each period, and the
// ledger records the per-period decisions and X/H/O costs. `trace`, when
// set, receives the dynamic policy's backward-pass audit lines.
RealizationLedger run_realization(const ExperimentSpec& spec, const PolicyEntry& policy,
                                  std::uint64_t seed, int threads = 1,
                                  const StaticSchedule* schedule = nullptr,
                                  std::ostream* trace = nullptr);

// Arithmetic means over realizations plus baseline deltas. Rejects
// mismatched horizons.
Summary aggregate(const std::vector<std::pair<std::string, std::vector<RealizationLedger>>>& runs,
                  const std::string& baseline);

std::string policy_label(const PolicyEntry& p);

}  // namespace sdairp
