#include "aqs/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

#include "aqs/format.hpp"
#include "aqs/parallel.hpp"

namespace aqs {

Eigen::Vector2cd initial_state(const ProblemInstance& inst) {
  const double x = inst.overlap_x;
  Eigen::Vector2cd v;
  v << std::complex<double>(x, 0.0),
      std::complex<double>(std::sqrt(1.0 - x * x), 0.0);
  return v;
}

EvolutionResult evolve(const CoefficientSet& c, const ProblemInstance& inst,
                       const Schedule& sched, std::int64_t steps) {
  if (steps < 100) {
    throw std::invalid_argument("evolve: steps must be at least 100, got " +
                                std::to_string(steps));
  }
  if (sched.instance_n() != inst.n) {
    throw std::invalid_argument(
        "evolve: schedule was built for n = " +
        std::to_string(sched.instance_n()) + ", instance has n = " +
        std::to_string(inst.n));
  }
  const double t_total = sched.total_time();
  const double dt = t_total / static_cast<double>(steps);

  std::complex<double> z0;
  std::complex<double> z1;
  {
    const Eigen::Vector2cd v = initial_state(inst);
    z0 = v(0);
    z1 = v(1);
  }

  double phase = 0;
  double max_drift = 0;
  for (std::int64_t k = 0; k < steps; ++k) {
    const double t_mid = (static_cast<double>(k) + 0.5) * dt;
    const double s = sched.s_at(t_mid);
    const EffectiveBlock blk = effective_block(c, inst, s);

    const double hz = 0.5 * (blk.p00 - blk.p11);
    const double hx = blk.p01;
    const double mean = 0.5 * (blk.p00 + blk.p11);
    phase += (blk.shift + mean) * dt;

    const double r = std::hypot(hz, hx);
    const double theta = r * dt;
    const double cth = std::cos(theta);
    const double w = r > 0 ? std::sin(theta) / r : dt;

    const std::complex<double> iw(0.0, w);
    const std::complex<double> n0 = cth * z0 - iw * (hz * z0 + hx * z1);
    const std::complex<double> n1 = cth * z1 - iw * (hx * z0 - hz * z1);
    z0 = n0;
    z1 = n1;

    const double norm2 = std::norm(z0) + std::norm(z1);
    max_drift = std::max(max_drift, std::abs(norm2 - 1.0));
  }

  EvolutionResult out;
  out.success_probability = std::norm(z0);
  out.total_time = t_total;
  out.steps = steps;
  out.max_norm_drift = max_drift;
  const std::complex<double> global = std::polar(1.0, -phase);
  out.final_amplitudes << global * z0, global * z1;
  return out;
}

std::vector<SuccessPoint> success_vs_time(const CoefficientSet& c,
                                          const ProblemInstance& inst,
                                          ScheduleKind kind, double epsilon,
                                          MatrixElementMode mode,
                                          std::span<const double> factors,
                                          std::int64_t steps, int threads) {
  if (factors.empty()) {
    throw std::invalid_argument("success_vs_time: factors must be nonempty");
  }
  for (double f : factors) {
    if (!(f > 0) || !std::isfinite(f)) {
      throw std::invalid_argument(
          "success_vs_time: factors must be positive and finite, got " +
          g17(f));
    }
  }
  const Schedule base = kind == ScheduleKind::global
                            ? build_global(c, inst, epsilon)
                            : build_local(c, inst, epsilon, mode);

  std::vector<double> sorted(factors.begin(), factors.end());
  std::sort(sorted.begin(), sorted.end());

  std::vector<SuccessPoint> points(sorted.size());
  parallel_for(static_cast<std::int64_t>(sorted.size()), threads,
               [&](std::int64_t i) {
                 const double f = sorted[static_cast<std::size_t>(i)];
                 const Schedule run = base.time_scaled(f);
                 SuccessPoint p;
                 p.factor = f;
                 p.result = evolve(c, inst, run, steps);
                 points[static_cast<std::size_t>(i)] = p;
               });
  return points;
}

std::string success_csv(const std::vector<SuccessPoint>& points) {
  std::ostringstream os;
  os << "factor,total_time,steps,success_probability,norm_drift\n";
  for (const SuccessPoint& p : points) {
    os << g17(p.factor) << ',' << g17(p.result.total_time) << ','
       << p.result.steps << ',' << g17(p.result.success_probability) << ','
       << g17(p.result.max_norm_drift) << '\n';
  }
  return os.str();
}

}  // namespace aqs
