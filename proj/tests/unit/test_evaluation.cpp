#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "sdairp/experiment.hpp"
#include "sdairp/ou.hpp"

using namespace sdairp;

namespace {

const std::string kData = SDAIRP_DATA_DIR;

// single stochastic arc with the 4-step demo parameters
ExperimentSpec one_arc_spec() {
  ExperimentSpec spec;
  spec.net.nodes = 2;
  spec.net.fleet_size = 1;
  spec.net.fuel_capacity = 100;
  spec.net.arcs = {{1, 2, 3.0, 0.3, 1, 1}};
  spec.ou = {{0.5, 0.1, 0.1, 0.33}};
  spec.s0 = {1.0};
  spec.econ = {{0.1}, {10.0}};
  spec.thresholds = {0.33};
  spec.horizon = 4;
  spec.realizations = 30;
  spec.seed_base = 100;
  spec.roster = {{PolicyKind::Myopic, "", 2, 16, 5, "cyclic"}};
  return spec;
}

}  // namespace

TEST_CASE("zero-period horizon yields an empty ledger") {
  ExperimentSpec spec = one_arc_spec();
  spec.horizon = 0;
  RealizationLedger led = run_realization(spec, spec.roster[0], 1);
  CHECK(led.records.empty());
}

TEST_CASE("static policy replays the same deployments on every seed") {
  ExperimentSpec spec = one_arc_spec();
  PolicyEntry entry{PolicyKind::Static, "static", 2, 16, 5, "cyclic"};
  spec.roster = {entry};
  SolverConfig cfg;
  StaticSchedule sched =
      build_static_schedule(spec.net, spec.econ, spec.ou, spec.s0, spec.horizon, cfg);
  RealizationLedger a = run_realization(spec, entry, 1, 1, &sched);
  RealizationLedger b = run_realization(spec, entry, 77, 1, &sched);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t t = 0; t < a.records.size(); ++t) {
    CHECK(a.records[t].X == b.records[t].X);
    CHECK(a.records[t].selected == b.records[t].selected);
  }
}

TEST_CASE("realizations are reproducible for a fixed seed, any thread count") {
  ExperimentSpec spec = one_arc_spec();
  PolicyEntry sdairp{PolicyKind::Sdairp, "", 2, 32, 5, "cyclic"};
  RealizationLedger a = run_realization(spec, sdairp, 5, 1);
  RealizationLedger b = run_realization(spec, sdairp, 5, 4);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t t = 0; t < a.records.size(); ++t) {
    CHECK(a.records[t].selected == b.records[t].selected);
    CHECK(a.records[t].X == b.records[t].X);
    CHECK(a.records[t].H == b.records[t].H);
    CHECK(a.records[t].O == b.records[t].O);
    CHECK(a.records[t].post == b.records[t].post);
  }
}

TEST_CASE("accounting identity: ledger totals are X + H + O per period") {
  ExperimentSpec spec = one_arc_spec();
  RealizationLedger led = run_realization(spec, spec.roster[0], 9);
  REQUIRE(led.records.size() == 4);
  for (const auto& rec : led.records) {
    CHECK(rec.total() == doctest::Approx(rec.X + rec.H + rec.O));
    CHECK(rec.X == doctest::Approx(rec.routes.total_cost));
  }
}

TEST_CASE("myopic stock-out frequency matches a brute-force simulation") {
  // evaluation harness vs an independently coded loop around the same
  // dynamics; both are Monte Carlo estimates of one probability
  ExperimentSpec spec = one_arc_spec();
  const int N = 1000;
  int harness_hits = 0;
  for (int k = 0; k < N; ++k) {
    RealizationLedger led = run_realization(spec, spec.roster[0], 3000 + k);
    for (const auto& rec : led.records) harness_hits += rec.stockout[0] ? 1 : 0;
  }

  std::mt19937_64 rng(4242);
  std::normal_distribution<double> z01(0.0, 1.0);
  int oracle_hits = 0;
  const OUParams p = spec.ou[0];
  for (int k = 0; k < N; ++k) {
    double s = 1.0, r = p.r0;
    for (int t = 1; t <= spec.horizon; ++t) {
      r = ou_exact_step(r, p, 1.0, z01(rng));
      s -= r;
      if (s < 0) ++oracle_hits;
      if (s < spec.thresholds[0]) s = 1.0;
    }
  }

  const double ph = double(harness_hits) / (N * spec.horizon);
  const double po = double(oracle_hits) / (N * spec.horizon);
  const double se = std::sqrt(2.0 * std::max(po, 1e-4) * (1 - std::max(po, 1e-4)) /
                              double(N * spec.horizon));
  CHECK(std::fabs(ph - po) < 4.0 * se + 1e-3);
}

TEST_CASE("raising rho never reduces an arc's selection count") {
  ExperimentSpec spec = one_arc_spec();
  PolicyEntry sdairp{PolicyKind::Sdairp, "", 2, 32, 5, "cyclic"};
  long prev = -1;
  for (double rho : {2.0, 10.0, 40.0}) {
    spec.econ.rho = {rho};
    long count = 0;
    RealizationLedger led = run_realization(spec, sdairp, 17);
    for (const auto& rec : led.records) count += rec.selected[0];
    CHECK(count >= prev);
    prev = count;
  }
}

TEST_CASE("aggregate") {
  SUBCASE("single realization equals its ledger") {
    ExperimentSpec spec = one_arc_spec();
    RealizationLedger led = run_realization(spec, spec.roster[0], 12);
    Summary s = aggregate({{"myopic", {led}}}, "myopic");
    REQUIRE(s.policies.size() == 1);
    REQUIRE(s.policies[0].periods.size() == led.records.size());
    for (std::size_t t = 0; t < led.records.size(); ++t) {
      CHECK(s.policies[0].periods[t].X == doctest::Approx(led.records[t].X));
      CHECK(s.policies[0].periods[t].O == doctest::Approx(led.records[t].O));
    }
  }

  SUBCASE("published delta: totals 35.5232 vs baseline 49.0953 is -27.6%") {
    RealizationLedger a, b;
    DecisionRecord ra, rb;
    ra.X = 35.5232;
    rb.X = 49.0953;
    a.records = {ra};
    b.records = {rb};
    Summary s = aggregate({{"candidate", {a}}, {"myopic", {b}}}, "myopic");
    REQUIRE(s.policies[0].has_delta);
    CHECK(std::round(s.policies[0].delta_vs_baseline * 1000.0) / 10.0 ==
          doctest::Approx(-27.6));
  }

  SUBCASE("all-zero baseline reports no delta") {
    RealizationLedger a;
    a.records = {DecisionRecord{}};
    Summary s = aggregate({{"myopic", {a}}}, "myopic");
    CHECK_FALSE(s.policies[0].has_delta);
  }

  SUBCASE("mismatched horizons are rejected") {
    RealizationLedger a, b;
    a.records = {DecisionRecord{}, DecisionRecord{}};
    b.records = {DecisionRecord{}};
    CHECK_THROWS_AS(aggregate({{"myopic", {a, b}}}, "myopic"), std::invalid_argument);
  }
}

TEST_CASE("summary csv layout") {
  RealizationLedger a;
  DecisionRecord r1, r2;
  r1.X = 1.5;
  r2.H = 0.25;
  a.records = {r1, r2};
  Summary s = aggregate({{"myopic", {a}}}, "myopic");
  std::ostringstream os;
  s.write_csv(os);
  const std::string csv = os.str();
  CHECK(csv.find("policy,period,X,H,O,total\n") == 0);
  CHECK(csv.find("myopic,t=1,1.500000,0.000000,0.000000,1.500000\n") != std::string::npos);
  CHECK(csv.find("myopic,total,1.500000,0.250000,0.000000,1.750000\n") != std::string::npos);
}

TEST_CASE("experiment files parse and validate") {
  ExperimentSpec spec = load_experiment_file(kData + "/monroy_eval.exp");
  CHECK(spec.net.arcs.size() == 7);
  CHECK(spec.horizon == 5);
  CHECK(spec.realizations == 30);
  CHECK(spec.roster.size() == 5);
  CHECK(spec.baseline == "myopic");
  const int stoch = spec.net.arc_index(2, 3);
  CHECK(spec.ou[stoch].sigma == doctest::Approx(0.1));
  CHECK(spec.thresholds[stoch] == doctest::Approx(0.5));  // defaults to mu
  CHECK(policy_label(spec.roster[2]) == "sdairp(T=2,M=5)");

  ExperimentSpec gdb = load_experiment_file(kData + "/gdb19_sdairp.exp");
  CHECK(gdb.net.arcs.size() == 11);
  CHECK(gdb.horizon == 15);
  for (const auto& a : gdb.net.arcs) CHECK(a.q == 1);  // binarize keyword applied
  const int a24 = gdb.net.arc_index(2, 4);
  CHECK(gdb.ou[a24].mu == doctest::Approx(0.30));
  CHECK(gdb.econ.rho[a24] == doctest::Approx(100.0));
}

TEST_CASE("experiment parse errors") {
  CHECK_THROWS_WITH_AS(parse_experiment("horizon 5\n", kData),
                       doctest::Contains("missing 'instance'"), InstanceError);
  CHECK_THROWS_WITH_AS(
      parse_experiment("instance monroy.inst\nwhatever 3\n", kData),
      doctest::Contains("unknown keyword"), InstanceError);
  CHECK_THROWS_WITH_AS(
      parse_experiment("instance monroy.inst\npolicy warp\n", kData),
      doctest::Contains("unknown policy"), InstanceError);
  // demanded arcs must carry process parameters
  CHECK_THROWS_WITH_AS(
      parse_experiment("instance monroy.inst\npolicy myopic\n", kData),
      doctest::Contains("no ou line"), InstanceError);
}
