#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace sdairp {

// Mean-reverting (Ornstein-Uhlenbeck) consumption-rate process parameters.
struct OUParams {
  double mu = 0.0;     // long-run mean rate, inventory units / period
  double theta = 1.0;  // reversion rate, > 0, 1/period
  double sigma = 0.0;  // volatility, >= 0, inventory units / sqrt(period)
  double r0 = 0.0;     // initial rate

  void validate() const;
};

// Sample paths r[p][t][arc], t = 0..horizon with r[p][0][arc] = r0(arc).
struct PathMatrix {
  std::size_t paths = 0;
  std::size_t horizon = 0;  // number of steps; time index runs 0..horizon
  std::size_t arcs = 0;
  std::uint64_t seed = 0;
  std::vector<double> data;  // layout [p][t][arc]

  double& at(std::size_t p, std::size_t t, std::size_t arc) {
    return data[(p * (horizon + 1) + t) * arcs + arc];
  }
  double at(std::size_t p, std::size_t t, std::size_t arc) const {
    return data[(p * (horizon + 1) + t) * arcs + arc];
  }

  void write_csv(std::ostream& os) const;
};

// One exact-discretization step of the mean-reverting process:
//   r' = r e^{-theta dt} + mu (1 - e^{-theta dt})
//        + sigma z sqrt((1 - e^{-2 theta dt}) / (2 theta))
// Unbiased for any step size. Throws std::invalid_argument on theta <= 0 or
// non-finite z.
double ou_exact_step(double r, const OUParams& params, double dt, double z);

// Simulates `paths` independent sample paths over `horizon` unit steps for
// all arcs. The noise stream for (path, arc) depends only on (seed, path,
// arc), so output is identical regardless of evaluation order or thread
// count. May run path blocks in parallel when threads > 1.
PathMatrix simulate_paths(const std::vector<OUParams>& per_arc, std::size_t paths,
                          std::size_t horizon, std::uint64_t seed, int threads = 1);

}  // namespace sdairp
