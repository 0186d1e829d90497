#include "sdairp/network.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

#include "sdairp/num_format.hpp"

namespace sdairp {

namespace {

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

double parse_number(const std::string& tok, int line) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw InstanceError("expected a number, got '" + tok + "'", line);
  }
  if (used != tok.size()) throw InstanceError("trailing characters in number '" + tok + "'", line);
  return v;
}

int parse_int(const std::string& tok, int line) {
  double v = parse_number(tok, line);
  if (v != std::floor(v)) throw InstanceError("expected an integer, got '" + tok + "'", line);
  return static_cast<int>(v);
}

}  // namespace

int Network::arc_index(int i, int j) const {
  if (i > j) std::swap(i, j);
  for (std::size_t k = 0; k < arcs.size(); ++k)
    if (arcs[k].i == i && arcs[k].j == j) return static_cast<int>(k);
  return -1;
}

void Network::validate() const {
  if (nodes < 1) throw InstanceError("node count must be >= 1");
  if (depot != 1) throw InstanceError("depot must be node 1");
  if (arcs.empty()) throw InstanceError("empty arc set");
  if (fleet_size < 1) throw InstanceError("fleet size K must be >= 1");
  if (!(fuel_capacity > 0)) throw InstanceError("fuel capacity W must be > 0");
  if (recharge_periods < 0) throw InstanceError("recharge periods zeta must be >= 0");

  std::set<std::pair<int, int>> seen;
  for (const auto& a : arcs) {
    if (a.i < 1 || a.i > nodes || a.j < 1 || a.j > nodes)
      throw InstanceError("arc endpoint out of range: (" + std::to_string(a.i) + "," +
                          std::to_string(a.j) + ")");
    if (a.i == a.j) throw InstanceError("self-loop at node " + std::to_string(a.i));
    auto key = std::minmax(a.i, a.j);
    if (!seen.insert({key.first, key.second}).second)
      throw InstanceError("duplicate arc (" + std::to_string(a.i) + "," + std::to_string(a.j) + ")");
    if (!(a.c > 0)) throw InstanceError("arc traversal cost must be > 0 on (" +
                                        std::to_string(a.i) + "," + std::to_string(a.j) + ")");
    if (!(a.e >= 0)) throw InstanceError("arc service cost must be >= 0");
    if (a.q != 0 && a.q != 1) throw InstanceError("demand flag q must be 0 or 1");
    if (a.demand < 0) throw InstanceError("integer demand metadata must be >= 0");
  }

  // Every endpoint of a demanded arc must be reachable from the depot via the
  // full graph, else coverage is structurally infeasible.
  std::vector<std::vector<int>> adj(nodes + 1);
  for (const auto& a : arcs) {
    adj[a.i].push_back(a.j);
    adj[a.j].push_back(a.i);
  }
  std::vector<char> vis(nodes + 1, 0);
  std::queue<int> bfs;
  bfs.push(depot);
  vis[depot] = 1;
  while (!bfs.empty()) {
    int u = bfs.front();
    bfs.pop();
    for (int v : adj[u])
      if (!vis[v]) {
        vis[v] = 1;
        bfs.push(v);
      }
  }
  for (const auto& a : arcs)
    if (a.q == 1 && (!vis[a.i] || !vis[a.j]))
      throw InstanceError("demanded arc (" + std::to_string(a.i) + "," + std::to_string(a.j) +
                          ") is not reachable from the depot");
}

Network parse_canonical(const std::string& text) {
  Network net;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  bool have_header = false;

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = strip_comment(raw);
    if (blank(line)) continue;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "nodes") {
      if (have_header) throw InstanceError("duplicate header", lineno);
      std::string t_depot, t_k, t_w, t_z;
      std::string n, d, k, w, z;
      if (!(ls >> n >> t_depot >> d >> t_k >> k >> t_w >> w >> t_z >> z))
        throw InstanceError("malformed header, expected 'nodes <n> depot 1 K <k> W <w> zeta <z>'",
                            lineno);
      if (t_depot != "depot" || t_k != "K" || t_w != "W" || t_z != "zeta")
        throw InstanceError("malformed header keywords", lineno);
      net.nodes = parse_int(n, lineno);
      net.depot = parse_int(d, lineno);
      net.fleet_size = parse_int(k, lineno);
      net.fuel_capacity = parse_number(w, lineno);
      net.recharge_periods = parse_int(z, lineno);
      have_header = true;
    } else if (kw == "arc") {
      if (!have_header) throw InstanceError("arc line before header", lineno);
      std::string i, j, tc, c, te, e, tq, q;
      if (!(ls >> i >> j >> tc >> c >> te >> e >> tq >> q) || tc != "c" || te != "e" || tq != "q")
        throw InstanceError("malformed arc line, expected 'arc <i> <j> c <cost> e <cost> q <0|1>'",
                            lineno);
      Arc a;
      a.i = parse_int(i, lineno);
      a.j = parse_int(j, lineno);
      if (a.i > a.j) std::swap(a.i, a.j);
      a.c = parse_number(c, lineno);
      a.e = parse_number(e, lineno);
      a.q = parse_int(q, lineno);
      a.demand = a.q;
      net.arcs.push_back(a);
    } else {
      throw InstanceError("unknown keyword '" + kw + "'", lineno);
    }
    std::string extra;
    if (ls >> extra) throw InstanceError("unexpected token '" + extra + "'", lineno);
  }
  if (!have_header) throw InstanceError("missing header");
  if (net.arcs.empty()) throw InstanceError("empty arc set");
  net.validate();
  return net;
}

std::string serialize_canonical(const Network& net) {
  std::ostringstream os;
  os << "nodes " << net.nodes << " depot " << net.depot << " K " << net.fleet_size << " W "
     << format_double(net.fuel_capacity) << " zeta " << net.recharge_periods << "\n";
  for (const auto& a : net.arcs)
    os << "arc " << a.i << " " << a.j << " c " << format_double(a.c) << " e " << format_double(a.e)
       << " q " << a.q << "\n";
  return os.str();
}

namespace {

// Edge line of the DeArmon list: ( i , j ) coste <c> [demanda <d>]
Arc parse_gdb_edge(const std::string& line, int lineno, bool required) {
  std::string cleaned;
  cleaned.reserve(line.size());
  for (char ch : line) cleaned += (ch == '(' || ch == ')' || ch == ',') ? ' ' : ch;
  std::istringstream ls(cleaned);
  std::string i, j, kw;
  if (!(ls >> i >> j)) throw InstanceError("malformed edge line", lineno);
  Arc a;
  a.i = parse_int(i, lineno);
  a.j = parse_int(j, lineno);
  if (a.i > a.j) std::swap(a.i, a.j);
  while (ls >> kw) {
    std::string val;
    if (!(ls >> val)) throw InstanceError("missing value after '" + kw + "'", lineno);
    if (kw == "coste") {
      a.c = parse_number(val, lineno);
    } else if (kw == "demanda") {
      a.demand = parse_int(val, lineno);
    } else {
      throw InstanceError("unknown keyword '" + kw + "' in edge line", lineno);
    }
  }
  if (required && a.demand <= 0)
    throw InstanceError("required edge without positive demand", lineno);
  a.q = 0;  // binarization is explicit, see binarize_demands
  a.e = 0.0;
  return a;
}

}  // namespace

Network import_gdb(const std::string& text) {
  Network net;
  net.recharge_periods = 0;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  int n_req = -1, n_noreq = 0;
  enum class Section { None, Required, NotRequired } section = Section::None;

  while (std::getline(in, raw)) {
    ++lineno;
    if (blank(raw)) continue;
    std::string line = raw;
    auto colon = line.find(':');
    std::string kw = line.substr(0, colon == std::string::npos ? line.size() : colon);
    // keyword token without surrounding whitespace
    std::istringstream kws(kw);
    kws >> kw;

    if (line.find('(') != std::string::npos && section != Section::None) {
      Arc a = parse_gdb_edge(line, lineno, section == Section::Required);
      net.arcs.push_back(a);
      continue;
    }

    std::string value = colon == std::string::npos ? "" : line.substr(colon + 1);
    std::istringstream vs(value);
    std::string tok;
    vs >> tok;

    if (kw == "NOMBRE" || kw == "COMENTARIO" || kw == "TIPO_COSTES_ARISTAS" ||
        kw == "COSTE_TOTAL_ARISTAS_REQ") {
      continue;  // informational
    } else if (kw == "VERTICES") {
      net.nodes = parse_int(tok, lineno);
    } else if (kw == "ARISTAS_REQ") {
      n_req = parse_int(tok, lineno);
    } else if (kw == "ARISTAS_NOREQ") {
      n_noreq = parse_int(tok, lineno);
    } else if (kw == "VEHICULOS") {
      net.fleet_size = parse_int(tok, lineno);
    } else if (kw == "CAPACIDAD") {
      net.fuel_capacity = parse_number(tok, lineno);
    } else if (kw == "LISTA_ARISTAS_REQ") {
      section = Section::Required;
    } else if (kw == "LISTA_ARISTAS_NOREQ") {
      section = Section::NotRequired;
    } else if (kw == "DEPOSITO") {
      net.depot = parse_int(tok, lineno);
    } else {
      throw InstanceError("unknown keyword '" + kw + "'", lineno);
    }
  }

  if (net.nodes <= 0) throw InstanceError("missing VERTICES");
  if (n_req >= 0 && static_cast<int>(net.arcs.size()) != n_req + n_noreq)
    throw InstanceError("edge list has " + std::to_string(net.arcs.size()) + " entries, expected " +
                        std::to_string(n_req + n_noreq));
  for (const auto& a : net.arcs)
    if (a.i < 1 || a.j > net.nodes)
      throw InstanceError("edge (" + std::to_string(a.i) + "," + std::to_string(a.j) +
                          ") references out-of-range vertex");
  net.validate();
  return net;
}

Network binarize_demands(const Network& net) {
  Network out = net;
  for (auto& a : out.arcs) a.q = a.demand > 0 ? 1 : 0;
  out.validate();
  return out;
}

Network load_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError("cannot open instance file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  // gdb benchmark files announce themselves with keyword blocks.
  if (text.find("VERTICES") != std::string::npos) return import_gdb(text);
  return parse_canonical(text);
}

}  // namespace sdairp
