#pragma once

// Deterministic random-model generator for solver cross-checks. Models are
// always bounded (finite variable bounds), mix <=, >= and = rows, and come
// in a pure-binary and a mixed binary/continuous flavor so the enumeration
// oracle stays cheap.

#include <random>

#include "sdairp/linear_model.hpp"

namespace sdairp::testgen {

inline LinearModel random_model(std::uint64_t seed, int max_binaries = 20) {
  std::mt19937_64 rng(seed);
  auto uni = [&](double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
  };
  auto pick = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };

  LinearModel m;
  m.sense = ObjSense::Min;
  const bool mixed = pick(0, 1) == 1;
  const int nb = mixed ? pick(4, std::min(12, max_binaries)) : pick(6, max_binaries);
  const int nc = mixed ? pick(1, 4) : 0;

  for (int j = 0; j < nb; ++j)
    m.add_var("b" + std::to_string(j), 0, 1, VarKind::Binary, std::round(uni(-10, 10)));
  for (int j = 0; j < nc; ++j)
    m.add_var("c" + std::to_string(j), 0, uni(1, 8), VarKind::Continuous, uni(-5, 5));

  const int rows = pick(2, 6);
  for (int i = 0; i < rows; ++i) {
    std::vector<std::pair<int, double>> terms;
    double pos = 0;
    for (int j = 0; j < nb + nc; ++j) {
      if (uni(0, 1) < 0.6) {
        const double a = std::round(uni(-9, 9));
        if (a == 0) continue;
        terms.push_back({j, a});
        pos += std::max(0.0, a) * (j < nb ? 1.0 : m.vars[j].ub);
      }
    }
    if (terms.empty()) continue;
    const int s = pick(0, 5);
    if (s == 0) {
      m.add_con("r" + std::to_string(i), std::move(terms), ConSense::GE,
                std::round(pos * uni(0.05, 0.3)));
    } else if (s == 1 && !mixed) {
      m.add_con("r" + std::to_string(i), std::move(terms), ConSense::EQ,
                std::round(pos * uni(0.2, 0.5)));
    } else {
      m.add_con("r" + std::to_string(i), std::move(terms), ConSense::LE,
                std::round(pos * uni(0.3, 0.9)));
    }
  }
  return m;
}

}  // namespace sdairp::testgen
