#pragma once

#include <string>
#include <utility>
#include <vector>

namespace sdairp {

enum class VarKind { Continuous, Binary };
enum class ConSense { LE, EQ, GE };
enum class ObjSense { Min, Max };

struct Variable {
  std::string name;
  double lb = 0.0;
  double ub = 0.0;
  VarKind kind = VarKind::Continuous;
};

struct Constraint {
  std::string name;
  std::vector<std::pair<int, double>> terms;  // (variable index, coefficient)
  ConSense sense = ConSense::LE;
  double rhs = 0.0;
};

// Generic mixed-integer linear model. Hosts the CARP / AIRP / selective-VRP
// builders as instances. Lower bounds must be finite; upper bounds may be
// +infinity.
struct LinearModel {
  std::vector<Variable> vars;
  std::vector<Constraint> cons;
  std::vector<double> obj;  // aligned with vars
  double obj_offset = 0.0;
  ObjSense sense = ObjSense::Min;

  int add_var(std::string name, double lb, double ub, VarKind kind, double obj_coef = 0.0);
  int add_con(std::string name, std::vector<std::pair<int, double>> terms, ConSense sense,
              double rhs);

  std::size_t num_binaries() const;

  // Throws std::invalid_argument on inconsistent bounds, binaries outside
  // [0,1], non-finite coefficients, or out-of-range term indices.
  void validate() const;

  // Evaluates a point against every constraint; true when all hold within
  // `tol` and binaries are integral within `int_tol`.
  bool satisfies(const std::vector<double>& x, double tol, double int_tol) const;

  double objective_value(const std::vector<double>& x) const;

  // Dump in CPLEX LP text format for external cross-checks.
  std::string to_lp_format() const;
};

}  // namespace sdairp
