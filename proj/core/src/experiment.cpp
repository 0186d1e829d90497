#include "sdairp/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace sdairp {

void ExperimentSpec::validate() const {
  net.validate();
  const std::size_t A = net.arcs.size();
  if (ou.size() != A || s0.size() != A || econ.h.size() != A || econ.rho.size() != A ||
      thresholds.size() != A)
    throw InstanceError("experiment: per-arc parameter vectors incomplete");
  if (horizon < 0) throw InstanceError("experiment: horizon must be >= 0");
  if (realizations < 1) throw InstanceError("experiment: need at least one realization");
  if (roster.empty()) throw InstanceError("experiment: empty policy roster");
  for (std::size_t a = 0; a < A; ++a) {
    if (net.arcs[a].q == 1) ou[a].validate();
    if (econ.rho[a] < 0) throw InstanceError("experiment: rho must be >= 0");
  }
}

std::string policy_label(const PolicyEntry& p) {
  if (!p.label.empty()) return p.label;
  switch (p.kind) {
    case PolicyKind::Static: return "static";
    case PolicyKind::Myopic: return "myopic";
    case PolicyKind::Sdairp:
      return "sdairp(T=" + std::to_string(p.lookahead) + ",M=" + std::to_string(p.basis) + ")";
  }
  return "policy";
}

ExperimentSpec parse_experiment(const std::string& text, const std::string& base_dir) {
  ExperimentSpec spec;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  double rho_default = 10.0, h_default = 0.0;
  bool have_net = false;

  struct ArcLine {
    int i, j, line;
    OUParams p;
    double s0;
  };
  std::vector<ArcLine> ou_lines;
  std::vector<std::tuple<int, int, double, int>> rho_lines, h_lines, thr_lines;

  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); }))
      continue;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    auto want = [&](auto& v, const char* what) {
      if (!(ls >> v)) throw InstanceError(std::string("expected ") + what, lineno);
    };
    if (kw == "instance") {
      std::string path;
      want(path, "instance path");
      spec.net = load_network_file((std::filesystem::path(base_dir) / path).string());
      have_net = true;
    } else if (kw == "binarize") {
      if (!have_net) throw InstanceError("binarize before instance", lineno);
      spec.net = binarize_demands(spec.net);
    } else if (kw == "horizon") {
      want(spec.horizon, "horizon");
    } else if (kw == "realizations") {
      want(spec.realizations, "realization count");
    } else if (kw == "seed-base") {
      want(spec.seed_base, "seed base");
    } else if (kw == "rho-default") {
      want(rho_default, "rho default");
    } else if (kw == "h-default") {
      want(h_default, "h default");
    } else if (kw == "baseline") {
      want(spec.baseline, "baseline label");
    } else if (kw == "ou") {
      ArcLine al{};
      al.line = lineno;
      std::string t;
      want(al.i, "arc tail");
      want(al.j, "arc head");
      double mu = 0, theta = 0, sigma = 0, r0 = 0, s0v = 0;
      for (int k = 0; k < 5; ++k) {
        want(t, "keyword");
        double v;
        want(v, "value");
        if (t == "mu") mu = v;
        else if (t == "theta") theta = v;
        else if (t == "sigma") sigma = v;
        else if (t == "r0") r0 = v;
        else if (t == "s0") s0v = v;
        else throw InstanceError("unknown ou keyword '" + t + "'", lineno);
      }
      al.p = {mu, theta, sigma, r0};
      al.s0 = s0v;
      ou_lines.push_back(al);
    } else if (kw == "rho" || kw == "h" || kw == "threshold") {
      int i, j;
      double v;
      want(i, "arc tail");
      want(j, "arc head");
      want(v, "value");
      auto& dst = kw == "rho" ? rho_lines : (kw == "h" ? h_lines : thr_lines);
      dst.push_back({i, j, v, lineno});
    } else if (kw == "policy") {
      PolicyEntry pe;
      std::string kind;
      want(kind, "policy kind");
      if (kind == "static") pe.kind = PolicyKind::Static;
      else if (kind == "myopic") pe.kind = PolicyKind::Myopic;
      else if (kind == "sdairp") pe.kind = PolicyKind::Sdairp;
      else throw InstanceError("unknown policy '" + kind + "'", lineno);
      std::string t;
      while (ls >> t) {
        if (t == "T") want(pe.lookahead, "lookahead");
        else if (t == "P") want(pe.paths, "path count");
        else if (t == "M") want(pe.basis, "basis size");
        else if (t == "label") want(pe.label, "label");
        else if (t == "apriori") want(pe.apriori, "apriori kind");
        else throw InstanceError("unknown policy option '" + t + "'", lineno);
      }
      spec.roster.push_back(pe);
    } else {
      throw InstanceError("unknown keyword '" + kw + "'", lineno);
    }
  }

  if (!have_net) throw InstanceError("experiment: missing 'instance'");
  if (spec.horizon < 1) throw InstanceError("experiment: horizon must be >= 1");
  const std::size_t A = spec.net.arcs.size();
  spec.ou.assign(A, OUParams{0.0, 1.0, 0.0, 0.0});
  spec.s0.assign(A, 0.0);
  spec.econ.h.assign(A, h_default);
  spec.econ.rho.assign(A, rho_default);
  spec.thresholds.assign(A, 0.0);

  std::vector<char> have_ou(A, 0);
  for (const auto& al : ou_lines) {
    const int idx = spec.net.arc_index(al.i, al.j);
    if (idx < 0)
      throw InstanceError("ou line references unknown arc (" + std::to_string(al.i) + "," +
                              std::to_string(al.j) + ")",
                          al.line);
    spec.ou[idx] = al.p;
    spec.s0[idx] = al.s0;
    have_ou[idx] = 1;
  }
  for (std::size_t a = 0; a < A; ++a)
    if (spec.net.arcs[a].q == 1 && !have_ou[a])
      throw InstanceError("experiment: demanded arc (" + std::to_string(spec.net.arcs[a].i) + "," +
                          std::to_string(spec.net.arcs[a].j) + ") has no ou line");

  auto apply = [&](const std::vector<std::tuple<int, int, double, int>>& lines,
                   std::vector<double>& dst, const char* what) {
    for (const auto& [i, j, v, ln] : lines) {
      const int idx = spec.net.arc_index(i, j);
      if (idx < 0)
        throw InstanceError(std::string(what) + " line references unknown arc (" +
                                std::to_string(i) + "," + std::to_string(j) + ")",
                            ln);
      dst[idx] = v;
    }
  };
  apply(rho_lines, spec.econ.rho, "rho");
  apply(h_lines, spec.econ.h, "h");
  for (std::size_t a = 0; a < A; ++a) spec.thresholds[a] = spec.ou[a].mu;
  apply(thr_lines, spec.thresholds, "threshold");

  spec.validate();
  return spec;
}

ExperimentSpec load_experiment_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError("cannot open experiment file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment(ss.str(), std::filesystem::path(path).parent_path().string());
}

namespace {

void csv_row(std::ostream& os, const std::string& policy, const std::string& period,
             const PolicyPeriodMean& m) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s,%s,%.6f,%.6f,%.6f,%.6f\n", policy.c_str(), period.c_str(),
                m.X, m.H, m.O, m.total());
  os << buf;
}

}  // namespace

void Summary::write_csv(std::ostream& os) const {
  os << "policy,period,X,H,O,total\n";
  for (const auto& p : policies) {
    for (std::size_t t = 0; t < p.periods.size(); ++t)
      csv_row(os, p.label, "t=" + std::to_string(t + 1), p.periods[t]);
    csv_row(os, p.label, "total", p.totals);
  }
}

std::string Summary::to_json() const {
  nlohmann::json j;
  j["baseline"] = baseline;
  j["policies"] = nlohmann::json::array();
  for (const auto& p : policies) {
    nlohmann::json jp;
    jp["label"] = p.label;
    jp["periods"] = nlohmann::json::array();
    for (const auto& m : p.periods)
      jp["periods"].push_back({{"X", m.X}, {"H", m.H}, {"O", m.O}, {"total", m.total()}});
    jp["total"] = {{"X", p.totals.X}, {"H", p.totals.H}, {"O", p.totals.O},
                   {"total", p.totals.total()}};
    if (p.has_delta)
      jp["delta_vs_baseline_percent"] = p.delta_vs_baseline * 100.0;
    else
      jp["delta_vs_baseline_percent"] = nullptr;
    j["policies"].push_back(std::move(jp));
  }
  return j.dump(2);
}

Summary aggregate(const std::vector<std::pair<std::string, std::vector<RealizationLedger>>>& runs,
                  const std::string& baseline) {
  Summary out;
  out.baseline = baseline;
  for (const auto& [label, ledgers] : runs) {
    if (ledgers.empty()) throw std::invalid_argument("aggregate: no realizations for " + label);
    const std::size_t T = ledgers.front().records.size();
    for (const auto& l : ledgers)
      if (l.records.size() != T)
        throw std::invalid_argument("aggregate: mismatched horizons for " + label);
    PolicySummary ps;
    ps.label = label;
    ps.periods.assign(T, {});
    for (const auto& l : ledgers)
      for (std::size_t t = 0; t < T; ++t) {
        ps.periods[t].X += l.records[t].X;
        ps.periods[t].H += l.records[t].H;
        ps.periods[t].O += l.records[t].O;
      }
    for (auto& m : ps.periods) {
      m.X /= ledgers.size();
      m.H /= ledgers.size();
      m.O /= ledgers.size();
      ps.totals.X += m.X;
      ps.totals.H += m.H;
      ps.totals.O += m.O;
    }
    out.policies.push_back(std::move(ps));
  }
  const auto base = std::find_if(out.policies.begin(), out.policies.end(),
                                 [&](const auto& p) { return p.label == baseline; });
  if (base != out.policies.end() && base->totals.total() != 0.0) {
    for (auto& p : out.policies) {
      p.has_delta = true;
      p.delta_vs_baseline = (p.totals.total() - base->totals.total()) / base->totals.total();
    }
  }
  return out;
}

}  // namespace sdairp
