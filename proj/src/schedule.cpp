#include "aqs/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aqs/format.hpp"
#include "aqs/quadrature.hpp"

namespace aqs {

namespace {

void require_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw validation_error("0 < epsilon < 1",
                           "epsilon must lie in (0, 1), got " + g17(epsilon));
}

void warn_if_mismatched(const GapParameters& g,
                        std::vector<std::string>* warnings) {
  if (g.a != g.b && warnings)
    warnings->push_back("a = " + g17(g.a) + " and b = " + g17(g.b) +
                        " differ; time bounds assume the matched regime");
}

}  // namespace

std::string to_string(ScheduleKind k) {
  return k == ScheduleKind::global ? "global" : "local";
}

std::string to_string(MatrixElementMode m) {
  return m == MatrixElementMode::transition ? "transition" : "norm";
}

ScheduleKind schedule_kind_from_string(std::string_view text) {
  if (text == "global") return ScheduleKind::global;
  if (text == "local") return ScheduleKind::local;
  throw validation_error("schedule kind",
                         "unknown schedule kind '" + std::string(text) +
                             "' (expected global or local)");
}

MatrixElementMode mode_from_string(std::string_view text) {
  if (text == "transition") return MatrixElementMode::transition;
  if (text == "norm" || text == "operator_norm_bound")
    return MatrixElementMode::operator_norm_bound;
  throw validation_error("matrix element mode",
                         "unknown mode '" + std::string(text) +
                             "' (expected transition or norm)");
}

double dh_ds_element(const CoefficientSet& c, const ProblemInstance& inst,
                     double s, MatrixElementMode mode) {
  const EffectiveBlock bi = effective_block(c, inst, 0.0);
  const EffectiveBlock bf = effective_block(c, inst, 1.0);
  // 2x2 block of dH/ds = H_f - H_i
  const double dshift = bf.shift - bi.shift;
  const double d00 = bf.p00 - bi.p00;
  const double d01 = bf.p01 - bi.p01;
  const double d11 = bf.p11 - bi.p11;

  if (mode == MatrixElementMode::operator_norm_bound) {
    const double mean = dshift + 0.5 * (d00 + d11);
    const double half = std::hypot(0.5 * (d00 - d11), d01);
    return std::max(std::abs(mean - half), std::abs(mean + half));
  }

  // |<E1|dH/ds|E0>|: only the traceless parts contribute, and for a real
  // symmetric pencil it is the 2d cross product of the traceless vectors of
  // dH/ds and H(s), divided by the gap
  const EffectiveBlock bs = effective_block(c, inst, s);
  const double hz = 0.5 * (bs.p00 - bs.p11);
  const double hx = bs.p01;
  const double r = std::hypot(hz, hx);
  if (r == 0.0)
    throw validation_error("nondegenerate block",
                           "block eigenvalues coincide at s = " + g17(s));
  const double pz = 0.5 * (d00 - d11);
  const double px = d01;
  return std::abs(px * hz - pz * hx) / r;
}

double global_time_bound(const CoefficientSet& c, const ProblemInstance& inst,
                         double epsilon, std::vector<std::string>* warnings) {
  require_epsilon(epsilon);
  const GapParameters g = gap_parameters(c);
  if (!(g.a > 0) || !(g.b > 0))
    throw validation_error("a > 0 and b > 0",
                           "difference parameters must be positive");
  warn_if_mismatched(g, warnings);
  const double a_eff = std::min(g.a, g.b);
  const double x2 = inst.overlap_x * inst.overlap_x;
  return std::sqrt(1.0 - x2) / (epsilon * a_eff * x2);
}

double inv_gap_squared_integral(const GapPolynomial& gp, double s0,
                                double s1) {
  // recomputed in extended precision from the stored coefficients so the
  // result describes exactly the parabola callers evaluate
  const long double a = gp.coeff_a;
  const long double b = gp.coeff_b;
  const long double cc = gp.coeff_c;
  const long double disc = 4.0L * a * cc - b * b;
  if (!(disc > 0.0L))
    throw validation_error("positive discriminant",
                           "gap polynomial discriminant is not positive");
  const long double rd = std::sqrt(disc);
  const long double hi = std::atan((2.0L * a * s1 + b) / rd);
  const long double lo = std::atan((2.0L * a * s0 + b) / rd);
  return static_cast<double>(2.0L * (hi - lo) / rd);
}

double local_time_bound(const CoefficientSet& c, const ProblemInstance& inst,
                        double epsilon, MatrixElementMode mode,
                        std::vector<std::string>* warnings) {
  require_epsilon(epsilon);
  warn_if_mismatched(gap_parameters(c), warnings);
  const GapPolynomial gp = gap_polynomial(c, inst);
  if (mode == MatrixElementMode::operator_norm_bound) {
    const double m = dh_ds_element(c, inst, 0.0, mode);
    return m * inv_gap_squared_integral(gp, 0.0, 1.0) / epsilon;
  }
  // integrate in theta where s = s* + sqrt(g2_min/A) sinh(theta): the
  // substitution absorbs the 1/g^2 peak at the vertex, so the quadrature
  // cost stays flat even when the minimum gap is many orders below 1
  const double w = std::sqrt(gp.g2_min / gp.coeff_a);
  const double th0 = std::asinh((0.0 - gp.s_star) / w);
  const double th1 = std::asinh((1.0 - gp.s_star) / w);
  const double integral = adaptive_simpson(
      [&](double theta) {
        const double s = gp.s_star + w * std::sinh(theta);
        return dh_ds_element(c, inst, s, MatrixElementMode::transition) /
               gp.eval(s) * w * std::cosh(theta);
      },
      th0, th1, 1e-12);
  return integral / epsilon;
}

double Schedule::s_at(double t) const {
  if (t <= t_nodes_.front()) return s_nodes_.front();
  if (t >= t_nodes_.back()) return s_nodes_.back();
  const auto it = std::upper_bound(t_nodes_.begin(), t_nodes_.end(), t);
  const auto i = static_cast<std::size_t>(it - t_nodes_.begin());
  const double t0 = t_nodes_[i - 1], t1 = t_nodes_[i];
  const double s0 = s_nodes_[i - 1], s1 = s_nodes_[i];
  return s0 + (s1 - s0) * ((t - t0) / (t1 - t0));
}

double Schedule::t_at(double s) const {
  if (!(s_nodes_.front() < s_nodes_.back()))
    throw validation_error("invertible mapping",
                           "schedule mapping is constant; no inverse");
  if (s <= s_nodes_.front()) return t_nodes_.front();
  if (s >= s_nodes_.back()) return t_nodes_.back();
  const auto it = std::upper_bound(s_nodes_.begin(), s_nodes_.end(), s);
  const auto i = static_cast<std::size_t>(it - s_nodes_.begin());
  const double t0 = t_nodes_[i - 1], t1 = t_nodes_[i];
  const double s0 = s_nodes_[i - 1], s1 = s_nodes_[i];
  return t0 + (t1 - t0) * ((s - s0) / (s1 - s0));
}

Schedule Schedule::time_scaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor))
    throw validation_error("factor > 0", "time factor must be positive, got " +
                                             g17(factor));
  Schedule out = *this;
  for (double& t : out.t_nodes_) t *= factor;
  return out;
}

Schedule Schedule::pinned(double s_value, double total_time, std::int64_t n) {
  if (!(s_value >= 0.0 && s_value <= 1.0))
    throw validation_error("0 <= s <= 1", "pinned s outside [0, 1]");
  if (!(total_time > 0.0))
    throw validation_error("total_time > 0", "duration must be positive");
  Schedule sch;
  sch.kind_ = ScheduleKind::global;
  sch.epsilon_ = 0.0;
  sch.n_ = n;
  sch.t_nodes_ = {0.0, total_time};
  sch.s_nodes_ = {s_value, s_value};
  return sch;
}

void Schedule::check_nodes(bool strict_s) const {
  if (t_nodes_.size() != s_nodes_.size() || t_nodes_.size() < 2)
    throw validation_error("schedule grid", "malformed schedule grid");
  if (!(t_nodes_.front() == 0.0) || !(t_nodes_.back() > 0.0))
    throw validation_error("schedule grid", "time grid must start at 0");
  if (s_nodes_.front() != 0.0 || s_nodes_.back() != 1.0)
    throw validation_error("schedule boundary",
                           "mapping must run from s=0 to s=1");
  for (std::size_t i = 1; i < t_nodes_.size(); ++i) {
    if (!(t_nodes_[i] > t_nodes_[i - 1]))
      throw validation_error("schedule monotone", "time grid not increasing");
    if (strict_s && !(s_nodes_[i] > s_nodes_[i - 1]))
      throw validation_error("schedule monotone", "s grid not increasing");
  }
}

Schedule build_global(const CoefficientSet& c, const ProblemInstance& inst,
                      double epsilon) {
  const double t = global_time_bound(c, inst, epsilon, nullptr);
  Schedule sch;
  sch.kind_ = ScheduleKind::global;
  sch.epsilon_ = epsilon;
  sch.n_ = inst.n;
  sch.t_nodes_ = {0.0, t};
  sch.s_nodes_ = {0.0, 1.0};
  sch.check_nodes(true);
  return sch;
}

Schedule build_local(const CoefficientSet& c, const ProblemInstance& inst,
                     double epsilon, MatrixElementMode mode) {
  require_epsilon(epsilon);
  const GapPolynomial gp = gap_polynomial(c, inst);
  const auto rate = [&](double s) {
    return dh_ds_element(c, inst, s, mode) / gp.eval(s);
  };

  constexpr int kNodes = 4097;
  std::vector<double> svals(kNodes), tvals(kNodes);
  const double h = 1.0 / (kNodes - 1);
  svals[0] = 0.0;
  tvals[0] = 0.0;
  double fprev = rate(0.0);
  for (int i = 1; i < kNodes; ++i) {
    const double si = static_cast<double>(i) / (kNodes - 1);
    const double fmid = rate((static_cast<double>(i) - 0.5) * h);
    const double fi = rate(si);
    svals[i] = si;
    tvals[i] = tvals[i - 1] + (h / 6.0) * (fprev + 4.0 * fmid + fi);
    fprev = fi;
  }

  // pin the duration to the closed-form bound; the grid integral agrees with
  // it to ~1e-12 relative so the rescale only removes that discretization
  const double t_total = local_time_bound(c, inst, epsilon, mode, nullptr);
  const double factor = t_total / tvals.back();
  for (int i = 1; i + 1 < kNodes; ++i) tvals[i] *= factor;
  tvals.back() = t_total;

  Schedule sch;
  sch.kind_ = ScheduleKind::local;
  sch.epsilon_ = epsilon;
  sch.n_ = inst.n;
  sch.t_nodes_ = std::move(tvals);
  sch.s_nodes_ = std::move(svals);
  sch.check_nodes(true);
  return sch;
}

std::string schedule_csv(const Schedule& sched, int resolution) {
  if (resolution < 1)
    throw validation_error("resolution >= 1", "need at least one interval");
  std::string out = "t,s\n";
  const double t_total = sched.total_time();
  for (int i = 0; i <= resolution; ++i) {
    const double t = t_total * static_cast<double>(i) / resolution;
    out += g17(t) + ',' + g17(sched.s_at(t)) + '\n';
  }
  return out;
}

TimeBounds compute_time_bounds(const CoefficientSet& c,
                               const ProblemInstance& inst, double epsilon,
                               MatrixElementMode mode,
                               std::vector<std::string>* warnings) {
  TimeBounds tb;
  tb.t_global = global_time_bound(c, inst, epsilon, warnings);
  tb.t_local = local_time_bound(c, inst, epsilon, mode, nullptr);
  tb.mode = mode;
  return tb;
}

std::string bounds_record(const CoefficientSet& c, const ProblemInstance& inst,
                          double epsilon, const TimeBounds& tb) {
  const GapParameters g = gap_parameters(c);
  std::string out;
  out += "n=" + std::to_string(inst.n) + "\n";
  out += "a=" + g17(g.a) + "\n";
  out += "b=" + g17(g.b) + "\n";
  out += "epsilon=" + g17(epsilon) + "\n";
  out += "mode=" + to_string(tb.mode) + "\n";
  out += "t_global=" + g17(tb.t_global) + "\n";
  out += "t_local=" + g17(tb.t_local) + "\n";
  return out;
}

double parabola_area(double a_coeff, double c, double p) {
  if (!(a_coeff > 0.0))
    throw validation_error("a > 0", "quadratic weight must be positive");
  constexpr int kPanels = 128;
  const double h = 1.0 / kPanels;
  const auto f = [&](double x) {
    const double d = x - p;
    return a_coeff * d * d + c;
  };
  // compensated accumulation keeps the 1e-12 agreement with a/12 + c honest
  double sum = 0.0, comp = 0.0;
  const auto add = [&](double term) {
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  };
  add(f(0.0));
  add(f(1.0));
  for (int i = 1; i < kPanels; ++i) add((i % 2 ? 4.0 : 2.0) * f(i * h));
  return sum * h / 3.0;
}

std::pair<double, double> minimum_area_check(double a_coeff, double c,
                                             int p_grid) {
  if (p_grid < 3 || p_grid % 2 == 0)
    throw validation_error("odd p_grid >= 3",
                           "p grid must be odd so 1/2 is a node, got " +
                               std::to_string(p_grid));
  double best_p = 0.0;
  double best_v = std::numeric_limits<double>::infinity();
  for (int i = 0; i < p_grid; ++i) {
    const double p = static_cast<double>(i) / (p_grid - 1);
    const double v = parabola_area(a_coeff, c, p);
    if (v < best_v) {
      best_v = v;
      best_p = p;
    }
  }
  return {best_p, best_v};
}

}  // namespace aqs
