#include <cmath>
#include <stdexcept>

#include "sdairp/experiment.hpp"
#include "sdairp/rng.hpp"

namespace sdairp {

namespace {

// Seed namespaces: ground-truth trajectories and policy-internal sample
// paths must never share streams, so the truth uses a salted seed and the
// policy lookahead derives a fresh seed from (realization seed, period).
constexpr std::uint64_t kTruthSalt = 0xD6E8FEB86659FD93ull;
constexpr std::uint64_t kPolicySalt = 0xA3EC4E1DB94217C5ull;

std::uint64_t truth_seed(std::uint64_t seed) { return CounterRng::mix(seed ^ kTruthSalt); }

std::uint64_t policy_seed(std::uint64_t seed, int period) {
  return CounterRng::stream_key(seed ^ kPolicySalt, static_cast<std::uint64_t>(period), 0);
}

}  // namespace

RealizationLedger run_realization(const ExperimentSpec& spec, const PolicyEntry& policy,
                                  std::uint64_t seed, int threads,
                                  const StaticSchedule* schedule, std::ostream* trace) {
  spec.validate();
  if (policy.kind == PolicyKind::Static && schedule == nullptr)
    throw std::invalid_argument("run_realization: static policy needs a schedule");

  const std::size_t A = spec.net.arcs.size();
  RealizationLedger ledger;
  ledger.seed = seed;
  if (spec.horizon == 0) return ledger;

  // one ground-truth trajectory over the horizon
  std::vector<OUParams> truth_params = spec.ou;
  PathMatrix truth = simulate_paths(truth_params, 1, spec.horizon, truth_seed(seed), 1);

  std::vector<double> inventory = spec.s0;
  std::vector<double> rate(A);
  for (int t = 1; t <= spec.horizon; ++t) {
    for (std::size_t a = 0; a < A; ++a) rate[a] = truth.at(0, t, a);
    InventoryStep step = inventory_step(inventory, rate, std::vector<char>(A, 0), spec.net);

    StateSnapshot st;
    st.period = t;
    st.inventory = step.pre;
    st.rate = rate;
    st.vehicle_ready_in.assign(spec.net.fleet_size, 0);

    DecisionRecord rec;
    switch (policy.kind) {
      case PolicyKind::Static:
        rec = static_decide(*schedule, st, spec.net, spec.econ);
        break;
      case PolicyKind::Myopic:
        rec = myopic_decide(st, spec.thresholds, spec.net, spec.econ);
        break;
      case PolicyKind::Sdairp: {
        SdairpConfig cfg;
        cfg.lookahead = policy.lookahead;
        cfg.paths = policy.paths;
        cfg.basis = policy.basis;
        cfg.apriori = policy.apriori == "airp" ? AprioriPolicy::DeterministicAirp
                                               : AprioriPolicy::NaiveCyclic;
        cfg.myopic_threshold = spec.thresholds;
        cfg.seed = policy_seed(seed, t);
        cfg.threads = threads;
        rec = lsm_decide(st, cfg, spec.net, spec.econ, spec.ou, trace);
        break;
      }
    }
    inventory = rec.post;
    ledger.records.push_back(std::move(rec));
  }
  return ledger;
}

}  // namespace sdairp
