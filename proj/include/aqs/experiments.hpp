#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aqs/dynamics.hpp"
#include "aqs/model.hpp"
#include "aqs/schedule.hpp"

namespace aqs {

// One sweep over instance sizes at fixed coefficient growth exponent gamma
// (coefficients from scaled_preset, so a = b = n^gamma).
struct SweepSpec {
  std::vector<std::int64_t> n_values{16, 64, 256, 1024, 4096};
  double gamma = 0;
  double epsilon = 0.1;
  ScheduleKind kind = ScheduleKind::global;
  MatrixElementMode mode = MatrixElementMode::operator_norm_bound;
  std::int64_t steps = 10000;  // integrator steps, dynamic sweeps only
  std::uint64_t seed = 42;     // reserved for randomized audit hooks; the
                               // bound sweeps themselves are deterministic
};

// Throws unless n_values is strictly increasing with every entry a power of
// two >= 4, 0 < epsilon < 1, gamma >= 0 and steps >= 100.
void validate(const SweepSpec& spec);

// Least-squares power law t ~ n^exponent through (ln n, ln t).
struct ScalingFit {
  double exponent = 0;
  double intercept = 0;  // ln t = exponent * ln n + intercept
  double r_squared = 0;  // clamped to [0, 1]; 1 for exactly constant data
  std::vector<std::pair<double, double>> points;  // the raw (n, t) pairs
};

ScalingFit fit_exponent(std::span<const std::pair<double, double>> points);

struct SweepResult {
  SweepSpec spec;
  ScalingFit fit;
};

// Computes the schedule time bound for every n in the sweep and fits the
// scaling exponent. Cells run in parallel; results do not depend on threads.
SweepResult run_sweep(const SweepSpec& spec, int threads = 1);

// One evolution run per n: schedule built at its own bound time.
struct DynamicRow {
  std::int64_t n = 0;
  double x = 0;  // overlap 1/sqrt(n)
  double t_bound = 0;
  EvolutionResult result;
};

std::vector<DynamicRow> run_dynamic_sweep(const SweepSpec& spec,
                                          int threads = 1);

// CSV with header n,gamma,kind,mode,epsilon,t_bound (one row per point).
std::string sweep_points_csv(const SweepResult& result);
// CSV with header gamma,kind,exponent,intercept,r_squared,num_points.
std::string fits_csv(std::span<const SweepResult> results);
// CSV with header
// n,x,gamma,kind,mode,epsilon,steps,t_bound,success_probability,norm_drift.
std::string dynamic_csv(const SweepSpec& spec, std::span<const DynamicRow> rows);

// Self-contained 800x600 log-log chart of the sweep points with the fitted
// line; byte-identical output for identical inputs.
std::string fit_svg(const SweepResult& result);

// Writes fits.csv plus one SVG per result into dir (created if missing) and
// returns the paths written, fits.csv first. Throws on empty input; I/O
// errors carry the offending path.
std::vector<std::filesystem::path> emit_report(
    std::span<const SweepResult> results, const std::filesystem::path& dir);

}  // namespace aqs
