#include "sdairp/linear_model.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sdairp {

int LinearModel::add_var(std::string name, double lb, double ub, VarKind kind, double obj_coef) {
  vars.push_back({std::move(name), lb, ub, kind});
  obj.push_back(obj_coef);
  return static_cast<int>(vars.size()) - 1;
}

int LinearModel::add_con(std::string name, std::vector<std::pair<int, double>> terms,
                         ConSense s, double rhs) {
  cons.push_back({std::move(name), std::move(terms), s, rhs});
  return static_cast<int>(cons.size()) - 1;
}

std::size_t LinearModel::num_binaries() const {
  std::size_t k = 0;
  for (const auto& v : vars)
    if (v.kind == VarKind::Binary) ++k;
  return k;
}

void LinearModel::validate() const {
  if (obj.size() != vars.size()) throw std::invalid_argument("objective/variable size mismatch");
  for (std::size_t j = 0; j < vars.size(); ++j) {
    const auto& v = vars[j];
    if (!(v.lb <= v.ub)) throw std::invalid_argument("variable '" + v.name + "': lb > ub");
    if (!std::isfinite(v.lb))
      throw std::invalid_argument("variable '" + v.name + "': lower bound must be finite");
    if (v.kind == VarKind::Binary && (v.lb < -1e-12 || v.ub > 1.0 + 1e-12))
      throw std::invalid_argument("binary variable '" + v.name + "' has bounds outside [0,1]");
    if (!std::isfinite(obj[j])) throw std::invalid_argument("non-finite objective coefficient");
  }
  for (const auto& c : cons) {
    if (!std::isfinite(c.rhs)) throw std::invalid_argument("non-finite rhs in '" + c.name + "'");
    for (const auto& [idx, coef] : c.terms) {
      if (idx < 0 || idx >= static_cast<int>(vars.size()))
        throw std::invalid_argument("constraint '" + c.name + "' references unknown variable");
      if (!std::isfinite(coef))
        throw std::invalid_argument("non-finite coefficient in '" + c.name + "'");
    }
  }
}

bool LinearModel::satisfies(const std::vector<double>& x, double tol, double int_tol) const {
  if (x.size() != vars.size()) return false;
  for (std::size_t j = 0; j < vars.size(); ++j) {
    if (x[j] < vars[j].lb - tol || x[j] > vars[j].ub + tol) return false;
    if (vars[j].kind == VarKind::Binary && std::fabs(x[j] - std::round(x[j])) > int_tol)
      return false;
  }
  for (const auto& c : cons) {
    double lhs = 0.0;
    for (const auto& [idx, coef] : c.terms) lhs += coef * x[idx];
    switch (c.sense) {
      case ConSense::LE:
        if (lhs > c.rhs + tol) return false;
        break;
      case ConSense::GE:
        if (lhs < c.rhs - tol) return false;
        break;
      case ConSense::EQ:
        if (std::fabs(lhs - c.rhs) > tol) return false;
        break;
    }
  }
  return true;
}

double LinearModel::objective_value(const std::vector<double>& x) const {
  double z = obj_offset;
  for (std::size_t j = 0; j < vars.size(); ++j) z += obj[j] * x[j];
  return z;
}

namespace {

std::string lp_num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void write_terms(std::ostringstream& os, const std::vector<std::pair<int, double>>& terms,
                 const std::vector<Variable>& vars) {
  bool first = true;
  for (const auto& [idx, coef] : terms) {
    if (coef == 0.0) continue;
    if (first) {
      if (coef < 0) os << "- ";
      first = false;
    } else {
      os << (coef < 0 ? " - " : " + ");
    }
    const double a = std::fabs(coef);
    if (a != 1.0) os << lp_num(a) << " ";
    os << vars[idx].name;
  }
  if (first) os << "0 " << vars.front().name;
}

}  // namespace

std::string LinearModel::to_lp_format() const {
  std::ostringstream os;
  os << (sense == ObjSense::Min ? "Minimize\n" : "Maximize\n");
  std::vector<std::pair<int, double>> objterms;
  for (std::size_t j = 0; j < vars.size(); ++j)
    if (obj[j] != 0.0) objterms.push_back({static_cast<int>(j), obj[j]});
  if (objterms.empty()) objterms.push_back({0, 0.0});
  os << " obj: ";
  write_terms(os, objterms, vars);
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < cons.size(); ++i) {
    const auto& c = cons[i];
    os << " " << (c.name.empty() ? "c" + std::to_string(i) : c.name) << ": ";
    write_terms(os, c.terms, vars);
    switch (c.sense) {
      case ConSense::LE: os << " <= "; break;
      case ConSense::GE: os << " >= "; break;
      case ConSense::EQ: os << " = "; break;
    }
    os << lp_num(c.rhs) << "\n";
  }
  os << "Bounds\n";
  for (const auto& v : vars) {
    if (std::isinf(v.ub))
      os << " " << lp_num(v.lb) << " <= " << v.name << "\n";
    else
      os << " " << lp_num(v.lb) << " <= " << v.name << " <= " << lp_num(v.ub) << "\n";
  }
  bool any_bin = false;
  for (const auto& v : vars) any_bin |= (v.kind == VarKind::Binary);
  if (any_bin) {
    os << "Binaries\n";
    for (const auto& v : vars)
      if (v.kind == VarKind::Binary) os << " " << v.name;
    os << "\n";
  }
  os << "End\n";
  return os.str();
}

}  // namespace sdairp
