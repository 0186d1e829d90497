// sdairp: exact arc-inventory routing solvers, a mean-reverting demand
// simulator, and a replayable policy-evaluation harness.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdairp/experiment.hpp"
#include "sdairp/formulations.hpp"
#include "sdairp/manifest.hpp"
#include "sdairp/mip.hpp"
#include "sdairp/network.hpp"
#include "sdairp/num_format.hpp"
#include "sdairp/parallel.hpp"
#include "sdairp/policy.hpp"

namespace fs = std::filesystem;
using namespace sdairp;
using Clock = std::chrono::steady_clock;

namespace {

constexpr const char* kVersion = "0.1.0";

// exit codes: 0 ok/optimal, 1 bad input, 2 infeasible, 3 limit hit
constexpr int kExitOk = 0, kExitInput = 1, kExitInfeasible = 2, kExitLimit = 3;

int status_exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return kExitOk;
    case SolveStatus::Infeasible:
    case SolveStatus::Unbounded: return kExitInfeasible;
    case SolveStatus::NodeLimit:
    case SolveStatus::TimeLimit: return kExitLimit;
  }
  return kExitInput;
}

std::string solution_json(const MipSolution& sol, const LinearModel& model) {
  nlohmann::json j;
  j["status"] = to_string(sol.status);
  j["objective"] = sol.objective;
  j["nodes"] = sol.nodes;
  nlohmann::json vars = nlohmann::json::object();
  for (std::size_t k = 0; k < sol.x.size(); ++k)
    if (sol.x[k] != 0.0) vars[model.vars[k].name] = sol.x[k];
  j["assignment"] = std::move(vars);
  return j.dump(2);
}

struct ManifestWriter {
  RunManifest m;
  Clock::time_point t0 = Clock::now();

  ManifestWriter(const std::string& command, int argc, char** argv, const std::string& out_dir) {
    m.version = kVersion;
    m.command = command;
    for (int i = 0; i < argc; ++i) m.argv.push_back(argv[i]);
    m.out_dir = out_dir;
    fs::create_directories(out_dir);
  }
  void finish() {
    m.wall_time_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    write_atomic((fs::path(m.out_dir) / "manifest.json").string(), m.to_json());
  }
};

struct SolveFlags {
  std::string out = "out";
  long node_limit = -1;
  double time_limit = -1.0;
  bool binarize = false;
  bool oracle = false;
  bool lp_dump = false;
  bool strengthen = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--out", out, "output directory");
    cmd->add_option("--node-limit", node_limit, "branch-and-bound node budget");
    cmd->add_option("--time-limit", time_limit, "wall-clock budget in seconds");
    cmd->add_flag("--binarize", binarize, "binarize integer demands before solving");
    cmd->add_flag("--oracle", oracle, "cross-check against the enumeration oracle");
    cmd->add_flag("--lp-dump", lp_dump, "write the model in LP text format");
    cmd->add_flag("--strengthen", strengthen,
                  "add optimum-preserving flow caps and vehicle ordering");
  }
  SolverConfig solver() const {
    SolverConfig cfg;
    cfg.node_limit = node_limit;
    cfg.time_limit_seconds = time_limit;
    return cfg;
  }
};

int run_solve_carp(const std::string& instance, const SolveFlags& flags, int argc, char** argv) {
  ManifestWriter mw("solve-carp", argc, argv, flags.out);
  mw.m.instance = instance;

  Network net = load_network_file(instance);
  if (flags.binarize) net = binarize_demands(net);
  CarpModel cm = build_carp_model({net, flags.strengthen});
  if (flags.lp_dump)
    write_atomic((fs::path(flags.out) / "model.lp").string(), cm.model.to_lp_format());

  SolverConfig scfg = flags.solver();
  scfg.warm_start = greedy_carp_warm_start(cm);
  MipSolution sol = solve_mip(cm.model, scfg);
  write_atomic((fs::path(flags.out) / "solution.json").string(), solution_json(sol, cm.model));
  std::cout << "status " << to_string(sol.status) << ", objective " << format_double(sol.objective)
            << ", nodes " << sol.nodes << "\n";

  if (sol.status == SolveStatus::Optimal) {
    Routes routes = extract_routes(cm.view, sol.x);
    write_atomic((fs::path(flags.out) / "routes.json").string(), routes.to_json());
    if (flags.oracle) {
      if (cm.model.num_binaries() > 25) {
        std::cerr << "oracle skipped: more than 25 binaries\n";
      } else {
        MipSolution o = enumerate_oracle(cm.model, flags.solver());
        if (std::fabs(o.objective - sol.objective) > 1e-6) {
          std::cerr << "oracle mismatch: " << o.objective << " vs " << sol.objective << "\n";
          return kExitInput;
        }
        std::cout << "oracle agrees at " << format_double(o.objective) << "\n";
      }
    }
  }
  mw.finish();
  return status_exit_code(sol.status);
}

int run_solve_airp(const std::string& instance, int horizon, double h_default, double rate_default,
                   double s0_default, const std::string& params_path, const SolveFlags& flags,
                   int argc, char** argv) {
  ManifestWriter mw("solve-airp", argc, argv, flags.out);
  mw.m.instance = instance;
  mw.m.config = params_path;

  Network net = load_network_file(instance);
  if (flags.binarize) net = binarize_demands(net);

  AirpInstance inst;
  inst.net = net;
  inst.horizon = horizon;
  inst.h.assign(net.arcs.size(), h_default);
  inst.r.assign(net.arcs.size(), rate_default);
  inst.s0.resize(net.arcs.size());
  for (std::size_t a = 0; a < net.arcs.size(); ++a)
    inst.s0[a] = s0_default >= 0 ? s0_default : net.arcs[a].q;

  if (!params_path.empty()) {
    std::ifstream in(params_path);
    if (!in) throw InstanceError("cannot open params file '" + params_path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ls(line);
      int i, j;
      if (!(ls >> i >> j)) throw InstanceError("expected arc endpoints", lineno);
      const int idx = net.arc_index(i, j);
      if (idx < 0) throw InstanceError("unknown arc in params file", lineno);
      std::string key;
      double val;
      while (ls >> key >> val) {
        if (key == "h") inst.h[idx] = val;
        else if (key == "r") inst.r[idx] = val;
        else if (key == "s0") inst.s0[idx] = val;
        else throw InstanceError("unknown key '" + key + "' in params file", lineno);
      }
    }
  }

  AirpModel am = build_airp_model(inst);
  if (flags.lp_dump)
    write_atomic((fs::path(flags.out) / "model.lp").string(), am.model.to_lp_format());
  MipSolution sol = solve_mip(am.model, flags.solver());
  write_atomic((fs::path(flags.out) / "solution.json").string(), solution_json(sol, am.model));
  std::cout << "status " << to_string(sol.status) << ", objective " << format_double(sol.objective)
            << ", nodes " << sol.nodes << "\n";

  if (sol.has_incumbent()) {
    for (int t = 1; t <= horizon; ++t) {
      Routes routes = extract_routes(am.periods[t - 1], sol.x);
      write_atomic((fs::path(flags.out) / ("routes_t" + std::to_string(t) + ".json")).string(),
                   routes.to_json());
    }
  }
  if (flags.oracle && am.model.num_binaries() <= 25 && sol.status == SolveStatus::Optimal) {
    MipSolution o = enumerate_oracle(am.model, flags.solver());
    if (std::fabs(o.objective - sol.objective) > 1e-6) {
      std::cerr << "oracle mismatch: " << o.objective << " vs " << sol.objective << "\n";
      return kExitInput;
    }
    std::cout << "oracle agrees at " << format_double(o.objective) << "\n";
  }
  mw.finish();
  return status_exit_code(sol.status);
}

void write_inventory_log(const fs::path& path,
                         const std::vector<std::pair<std::string, std::vector<RealizationLedger>>>&
                             runs,
                         const Network& net) {
  std::ostringstream os;
  os << "policy,seed,period,i,j,rate,pre,post,serviced,stockout\n";
  for (const auto& [label, ledgers] : runs)
    for (const auto& led : ledgers)
      for (const auto& rec : led.records)
        for (std::size_t a = 0; a < net.arcs.size(); ++a) {
          if (net.arcs[a].q != 1) continue;
          os << label << "," << led.seed << "," << rec.period << "," << net.arcs[a].i << ","
             << net.arcs[a].j << "," << format_double(rec.rate[a]) << ","
             << format_double(rec.pre[a]) << "," << format_double(rec.post[a]) << ","
             << int(rec.selected[a]) << "," << int(rec.stockout[a]) << "\n";
        }
  write_atomic(path.string(), os.str());
}

int run_policy_eval(const std::string& spec_path, const std::string& out, int threads,
                    std::uint64_t seed_override, bool has_seed, int paths_override,
                    int basis_override, int horizon_override, double rho_override,
                    const std::string& trace_path, int argc, char** argv) {
  ManifestWriter mw("policy-eval", argc, argv, out);
  mw.m.config = spec_path;

  ExperimentSpec spec = load_experiment_file(spec_path);
  if (has_seed) spec.seed_base = seed_override;
  if (horizon_override > 0) spec.horizon = horizon_override;
  if (rho_override >= 0) spec.econ.rho.assign(spec.net.arcs.size(), rho_override);
  for (auto& entry : spec.roster) {
    if (paths_override > 0) entry.paths = paths_override;
    if (basis_override > 0) entry.basis = basis_override;
  }
  for (int k = 0; k < spec.realizations; ++k) mw.m.seeds.push_back(spec.seed_base + k);

  std::ofstream trace;
  if (!trace_path.empty()) trace.open(trace_path, std::ios::trunc);

  std::vector<std::pair<std::string, std::vector<RealizationLedger>>> runs;
  for (const auto& entry : spec.roster) {
    const std::string label = policy_label(entry);
    std::cout << "running " << label << " over " << spec.realizations << " realizations...\n";
    StaticSchedule sched;
    if (entry.kind == PolicyKind::Static) {
      SolverConfig budget;
      budget.time_limit_seconds = 30.0;
      sched = build_static_schedule(spec.net, spec.econ, spec.ou, spec.s0, spec.horizon, budget);
      if (!sched.note.empty()) std::cout << "  static schedule: " << sched.note << "\n";
    }
    std::vector<RealizationLedger> ledgers(spec.realizations);
    std::ostream* trace_os =
        (trace.is_open() && entry.kind == PolicyKind::Sdairp) ? &trace : nullptr;
    parallel_for(spec.realizations, entry.kind == PolicyKind::Sdairp ? 1 : threads,
                 [&](std::size_t k) {
                   ledgers[k] = run_realization(spec, entry, spec.seed_base + k,
                                                entry.kind == PolicyKind::Sdairp ? threads : 1,
                                                entry.kind == PolicyKind::Static ? &sched
                                                                                 : nullptr,
                                                trace_os);
                 });
    runs.push_back({label, std::move(ledgers)});
  }

  Summary summary = aggregate(runs, spec.baseline);
  std::ostringstream csv;
  summary.write_csv(csv);
  write_atomic((fs::path(out) / "summary.csv").string(), csv.str());
  write_atomic((fs::path(out) / "summary.json").string(), summary.to_json());
  write_inventory_log(fs::path(out) / "inventory_log.csv", runs, spec.net);

  for (const auto& p : summary.policies) {
    std::cout << p.label << ": total " << format_double(p.totals.total());
    if (p.has_delta && p.label != summary.baseline)
      std::cout << " (" << format_double(p.delta_vs_baseline * 100.0) << "% vs "
                << summary.baseline << ")";
    std::cout << "\n";
  }
  mw.finish();
  return kExitOk;
}

int run_simulate(const std::string& spec_path, const std::string& out, int paths, int horizon,
                 std::uint64_t seed, bool has_seed, int threads, int argc, char** argv) {
  ManifestWriter mw("simulate", argc, argv, out);
  mw.m.config = spec_path;
  ExperimentSpec spec = load_experiment_file(spec_path);
  if (!has_seed) seed = spec.seed_base;
  mw.m.seeds = {seed};
  PathMatrix pm = simulate_paths(spec.ou, paths, horizon > 0 ? horizon : spec.horizon, seed,
                                 threads);
  std::ostringstream os;
  pm.write_csv(os);
  write_atomic((fs::path(out) / "paths.csv").string(), os.str());
  std::cout << "wrote " << pm.paths << " paths x " << pm.horizon << " periods x " << pm.arcs
            << " arcs\n";
  mw.finish();
  return kExitOk;
}

int run_replay(const std::string& manifest_path, const std::string& out, int argc, char** argv);

int dispatch(int argc, char** argv) {
  CLI::App app{"stochastic dynamic arc-inventory routing toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // solve-carp
  auto* carp = app.add_subcommand("solve-carp", "solve the single-period coverage problem");
  std::string carp_instance;
  carp->add_option("instance", carp_instance, "instance file")->required();
  SolveFlags carp_flags;
  carp_flags.attach(carp);

  // solve-airp
  auto* airp = app.add_subcommand("solve-airp", "solve the deterministic multi-period plan");
  std::string airp_instance, airp_params;
  int airp_horizon = 5;
  double airp_h = 0.1, airp_rate = 0.0, airp_s0 = -1.0;
  airp->add_option("instance", airp_instance, "instance file")->required();
  airp->add_option("--horizon", airp_horizon, "number of periods");
  airp->add_option("--holding", airp_h, "default holding cost per period");
  airp->add_option("--rate", airp_rate, "default consumption rate");
  airp->add_option("--s0", airp_s0, "default initial inventory (-1 = full)");
  airp->add_option("--params", airp_params, "per-arc overrides: 'i j h V r V s0 V' lines");
  SolveFlags airp_flags;
  airp_flags.attach(airp);

  // policy-eval
  auto* peval = app.add_subcommand("policy-eval", "compare policies over seeded realizations");
  std::string peval_spec, peval_out = "out", peval_trace;
  int peval_threads = 1, peval_paths = 0, peval_basis = 0, peval_horizon = 0;
  double peval_rho = -1.0;
  std::uint64_t peval_seed = 0;
  peval->add_option("spec", peval_spec, "experiment spec file")->required();
  peval->add_option("--out", peval_out, "output directory");
  peval->add_option("--threads", peval_threads, "worker threads");
  auto* peval_seed_opt = peval->add_option("--seed", peval_seed, "seed base override");
  peval->add_option("--paths", peval_paths, "sample path override for the dynamic policy");
  peval->add_option("--basis", peval_basis, "basis size override for the dynamic policy");
  peval->add_option("--horizon", peval_horizon, "evaluation horizon override");
  peval->add_option("--rho", peval_rho, "stock-out cost override for every arc");
  peval->add_option("--trace", peval_trace, "write the backward-pass audit trace here");

  // simulate
  auto* sim = app.add_subcommand("simulate", "export mean-reverting sample paths as CSV");
  std::string sim_spec, sim_out = "out";
  int sim_paths = 100, sim_horizon = 0, sim_threads = 1;
  std::uint64_t sim_seed = 0;
  sim->add_option("spec", sim_spec, "experiment spec file")->required();
  sim->add_option("--out", sim_out, "output directory");
  sim->add_option("--paths", sim_paths, "number of sample paths");
  sim->add_option("--horizon", sim_horizon, "periods (default: spec horizon)");
  auto* sim_seed_opt = sim->add_option("--seed", sim_seed, "stream seed");
  sim->add_option("--threads", sim_threads, "worker threads");

  // replay
  auto* rep = app.add_subcommand("replay", "re-execute a recorded run");
  std::string rep_manifest, rep_out;
  rep->add_option("manifest", rep_manifest, "manifest.json of a previous run")->required();
  rep->add_option("--out", rep_out, "new output directory (default: recorded one)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (carp->parsed()) return run_solve_carp(carp_instance, carp_flags, argc, argv);
    if (airp->parsed())
      return run_solve_airp(airp_instance, airp_horizon, airp_h, airp_rate, airp_s0, airp_params,
                            airp_flags, argc, argv);
    if (peval->parsed())
      return run_policy_eval(peval_spec, peval_out, peval_threads, peval_seed,
                             peval_seed_opt->count() > 0, peval_paths, peval_basis, peval_horizon,
                             peval_rho, peval_trace, argc, argv);
    if (sim->parsed())
      return run_simulate(sim_spec, sim_out, sim_paths, sim_horizon, sim_seed,
                          sim_seed_opt->count() > 0, sim_threads, argc, argv);
    if (rep->parsed()) return run_replay(rep_manifest, rep_out, argc, argv);
  } catch (const InstanceError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

int run_replay(const std::string& manifest_path, const std::string& out, int, char**) {
  std::ifstream in(manifest_path);
  if (!in) {
    std::cerr << "input error: cannot open manifest '" << manifest_path << "'\n";
    return kExitInput;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  RunManifest m = RunManifest::from_json(ss.str());
  if (m.argv.size() < 2) {
    std::cerr << "input error: manifest records no command line\n";
    return kExitInput;
  }

  std::vector<std::string> args(m.argv.begin() + 1, m.argv.end());
  for (std::size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--out") args[i + 1] = out.empty() ? m.out_dir : out;
  bool has_out = false;
  for (const auto& a : args) has_out |= (a == "--out");
  if (!has_out && !out.empty()) {
    args.push_back("--out");
    args.push_back(out);
  }

  std::vector<char*> cargv;
  static const std::string self = "sdairp";
  cargv.push_back(const_cast<char*>(self.c_str()));
  for (auto& a : args) cargv.push_back(a.data());
  return dispatch(static_cast<int>(cargv.size()), cargv.data());
}

}  // namespace

int main(int argc, char** argv) { return dispatch(argc, argv); }
