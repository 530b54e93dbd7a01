#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "aqs/model.hpp"
#include "aqs/schedule.hpp"
#include "aqs/spectral.hpp"

namespace aqs {

// State of the 2d invariant subspace in the {|alpha>, |beta>} basis; the
// initial state |psi> has real amplitudes (x, sqrt(1-x^2)).
Eigen::Vector2cd initial_state(const ProblemInstance& inst);

struct EvolutionResult {
  Eigen::Vector2cd final_amplitudes = Eigen::Vector2cd::Zero();
  double success_probability = 0;  // |<alpha|state>|^2
  double total_time = 0;
  std::int64_t steps = 0;
  double max_norm_drift = 0;  // max |  ||state||^2 - 1 | over all steps
};

// Piecewise-constant midpoint propagator: each step applies the exact 2x2
// unitary exp(-i H(s_mid) dt). The identity part of the block is carried as
// an accumulated phase and applied once at readout, so observables are
// bit-for-bit independent of a1/b1.
EvolutionResult evolve(const CoefficientSet& c, const ProblemInstance& inst,
                       const Schedule& sched, std::int64_t steps);

struct SuccessPoint {
  double factor = 0;
  EvolutionResult result;
};

// Builds the schedule of the given kind at its own bound time, then evolves
// at total times factor * bound for each factor. Rows come back sorted by
// factor regardless of input order or thread count.
std::vector<SuccessPoint> success_vs_time(const CoefficientSet& c,
                                          const ProblemInstance& inst,
                                          ScheduleKind kind, double epsilon,
                                          MatrixElementMode mode,
                                          std::span<const double> factors,
                                          std::int64_t steps, int threads = 1);

// CSV with header factor,total_time,steps,success_probability,norm_drift.
std::string success_csv(const std::vector<SuccessPoint>& points);

}  // namespace aqs
