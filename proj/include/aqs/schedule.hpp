#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aqs/model.hpp"
#include "aqs/spectral.hpp"

namespace aqs {

enum class ScheduleKind { global, local };

// How |<dH/ds>| enters the adiabatic condition: `transition` uses the actual
// matrix element between the two block eigenstates at each s;
// `operator_norm_bound` uses the largest absolute eigenvalue of the 2x2
// block of H_f - H_i, an s-independent upper bound.
enum class MatrixElementMode { transition, operator_norm_bound };

std::string to_string(ScheduleKind k);
std::string to_string(MatrixElementMode m);
ScheduleKind schedule_kind_from_string(std::string_view text);
MatrixElementMode mode_from_string(std::string_view text);

double dh_ds_element(const CoefficientSet& c, const ProblemInstance& inst,
                     double s, MatrixElementMode mode);

// T >= sqrt(1-x^2) / (eps * a * x^2), the worst-case (constant rate) bound.
// Requires a = b; otherwise min(a, b) is used and a warning is appended.
double global_time_bound(const CoefficientSet& c, const ProblemInstance& inst,
                         double epsilon,
                         std::vector<std::string>* warnings = nullptr);

// T >= (1/eps) * integral of M(s)/g^2(s) over [0, 1]. For the norm mode the
// integral has a closed arctangent form; the transition mode integrates
// numerically.
double local_time_bound(const CoefficientSet& c, const ProblemInstance& inst,
                        double epsilon, MatrixElementMode mode,
                        std::vector<std::string>* warnings = nullptr);

// integral of ds / (A s^2 + B s + C) over [s0, s1] in closed form,
//   (2/sqrt(D)) * [atan((2As + B)/sqrt(D))]  with  D = 4AC - B^2 > 0.
double inv_gap_squared_integral(const GapPolynomial& gp, double s0, double s1);

// Monotone map t -> s(t) over [0, total_time] stored as a piecewise-linear
// grid, so evaluation and inversion are exact mirrors of each other.
class Schedule {
 public:
  ScheduleKind kind() const { return kind_; }
  double total_time() const { return t_nodes_.back(); }
  double epsilon() const { return epsilon_; }
  std::int64_t instance_n() const { return n_; }

  double s_at(double t) const;  // clamps t into [0, total_time]
  double t_at(double s) const;  // inverse map; requires a strictly rising grid

  // Same s-profile traversed `factor` times slower (or faster).
  Schedule time_scaled(double factor) const;

  // Diagnostic schedule frozen at a fixed s for the whole duration; used by
  // stationary-state tests and deliberately exempt from the boundary
  // conditions the builders enforce.
  static Schedule pinned(double s_value, double total_time, std::int64_t n);

 private:
  friend Schedule build_global(const CoefficientSet&, const ProblemInstance&,
                               double);
  friend Schedule build_local(const CoefficientSet&, const ProblemInstance&,
                              double, MatrixElementMode);
  void check_nodes(bool strict_s) const;

  ScheduleKind kind_ = ScheduleKind::global;
  double epsilon_ = 0;
  std::int64_t n_ = 0;
  std::vector<double> t_nodes_, s_nodes_;
};

// Linear ramp s = t/T with T the global time bound.
Schedule build_global(const CoefficientSet& c, const ProblemInstance& inst,
                      double epsilon);

// Gap-adapted schedule ds/dt = eps * g^2(s) / M(s), realized by integrating
// t(s) = (1/eps) * integral of M/g^2 on a 4097-node grid and inverting the
// monotone result; the duration is pinned to local_time_bound.
Schedule build_local(const CoefficientSet& c, const ProblemInstance& inst,
                     double epsilon,
                     MatrixElementMode mode = MatrixElementMode::operator_norm_bound);

// CSV with header t,s sampled at resolution+1 uniform times.
std::string schedule_csv(const Schedule& sched, int resolution);

struct TimeBounds {
  double t_global = 0;
  double t_local = 0;
  MatrixElementMode mode = MatrixElementMode::operator_norm_bound;
};

TimeBounds compute_time_bounds(const CoefficientSet& c,
                               const ProblemInstance& inst, double epsilon,
                               MatrixElementMode mode,
                               std::vector<std::string>* warnings = nullptr);

// Flat key=value record: n, a, b, epsilon, mode, t_global, t_local.
std::string bounds_record(const CoefficientSet& c, const ProblemInstance& inst,
                          double epsilon, const TimeBounds& tb);

// Numeric integral of a(x-p)^2 + c over x in [0, 1] (composite Simpson,
// which is exact for parabolas up to roundoff).
double parabola_area(double a_coeff, double c, double p);

// Scans p over an odd uniform grid on [0, 1] and returns (argmin p, minimal
// integral); the minimum sits at p = 1/2 with value a/12 + c.
std::pair<double, double> minimum_area_check(double a_coeff, double c,
                                             int p_grid);

}  // namespace aqs
