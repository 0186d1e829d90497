#include "sdairp/ou.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "sdairp/num_format.hpp"
#include "sdairp/parallel.hpp"
#include "sdairp/rng.hpp"

namespace sdairp {

// Wichura (1988), algorithm AS241 / PPND16. Accurate to ~1e-16 over (0,1).
double CounterRng::inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("inverse_normal_cdf: p outside (0,1)");
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
             1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
             4.2313330701600911252e1) * r + 1.0);
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
              3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
            4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
              6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
            2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
              2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
            5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
              1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
  }
  return (q < 0.0) ? -val : val;
}

void OUParams::validate() const {
  if (!(theta > 0.0)) throw std::invalid_argument("OUParams: theta must be > 0");
  if (!(sigma >= 0.0)) throw std::invalid_argument("OUParams: sigma must be >= 0");
  if (!std::isfinite(mu) || !std::isfinite(r0)) throw std::invalid_argument("OUParams: non-finite value");
}

double ou_exact_step(double r, const OUParams& params, double dt, double z) {
  params.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("ou_exact_step: dt must be > 0");
  if (!std::isfinite(z)) throw std::invalid_argument("ou_exact_step: non-finite z");
  const double decay = std::exp(-params.theta * dt);
  const double sd = std::sqrt((1.0 - std::exp(-2.0 * params.theta * dt)) / (2.0 * params.theta));
  return r * decay + params.mu * (1.0 - decay) + params.sigma * z * sd;
}

PathMatrix simulate_paths(const std::vector<OUParams>& per_arc, std::size_t paths,
                          std::size_t horizon, std::uint64_t seed, int threads) {
  if (paths < 1) throw std::invalid_argument("simulate_paths: need at least one path");
  if (horizon < 1) throw std::invalid_argument("simulate_paths: horizon must be >= 1");
  for (const auto& p : per_arc) p.validate();

  PathMatrix out;
  out.paths = paths;
  out.horizon = horizon;
  out.arcs = per_arc.size();
  out.seed = seed;
  out.data.assign(paths * (horizon + 1) * per_arc.size(), 0.0);

  parallel_for(paths, threads, [&](std::size_t p) {
    for (std::size_t a = 0; a < per_arc.size(); ++a) {
      const std::uint64_t key = CounterRng::stream_key(seed, p, a);
      double r = per_arc[a].r0;
      out.at(p, 0, a) = r;
      for (std::size_t t = 1; t <= horizon; ++t) {
        const double z = CounterRng::normal(key, t - 1);
        r = ou_exact_step(r, per_arc[a], 1.0, z);
        out.at(p, t, a) = r;
      }
    }
  });
  return out;
}

void PathMatrix::write_csv(std::ostream& os) const {
  os << "path,period,arc,rate\n";
  char buf[64];
  for (std::size_t p = 0; p < paths; ++p)
    for (std::size_t t = 0; t <= horizon; ++t)
      for (std::size_t a = 0; a < arcs; ++a) {
        std::snprintf(buf, sizeof buf, "%zu,%zu,%zu,%s\n", p, t, a, format_double(at(p, t, a)).c_str());
        os << buf;
      }
}

}  // namespace sdairp
