// aqsim: command-line front end for the adiabatic-search analysis library.
// Subcommands: gap, verify, schedule, evolve, sweep, area. Results go to
// standard output (or --out); the resolved configuration, warnings and
// summaries go to standard error. Exit codes: 0 success, 1 verification
// failure, 2 usage or validation error.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "aqs/dynamics.hpp"
#include "aqs/experiments.hpp"
#include "aqs/format.hpp"
#include "aqs/model.hpp"
#include "aqs/schedule.hpp"
#include "aqs/spectral.hpp"

namespace {

using namespace aqs;

struct ModelArgs {
  std::int64_t n = 0;
  std::int64_t marked = 0;
  std::string preset;
  std::string coeffs;
  std::string config_path;
  CLI::Option* n_opt = nullptr;
  CLI::Option* preset_opt = nullptr;
  CLI::Option* coeffs_opt = nullptr;
  CLI::Option* config_opt = nullptr;
};

void add_model_flags(CLI::App* cmd, ModelArgs& m) {
  m.n_opt = cmd->add_option("--n", m.n,
                            "search-space size N (dimensionless, >= 2)");
  cmd->add_option("--marked", m.marked,
                  "marked item index (dimensionless, default 0)");
  m.preset_opt = cmd->add_option(
      "--preset", m.preset, "coefficient preset: farhi or scaled:<gamma>");
  m.coeffs_opt = cmd->add_option(
      "--coeffs", m.coeffs,
      "comma list a1=..,a2=..,a3=..,b1=..,b2=..,b3=.. (energy units)");
  m.config_opt =
      cmd->add_option("--config", m.config_path,
                      "key=value config file carrying n, marked_index and "
                      "the six coefficients")
          ->check(CLI::ExistingFile);
  m.preset_opt->excludes(m.coeffs_opt);
  m.preset_opt->excludes(m.config_opt);
  m.coeffs_opt->excludes(m.config_opt);
  m.config_opt->excludes(m.n_opt);
}

std::string_view trimmed(std::string_view v) {
  while (!v.empty() && (v.front() == ' ' || v.front() == '\t'))
    v.remove_prefix(1);
  while (!v.empty() && (v.back() == ' ' || v.back() == '\t'))
    v.remove_suffix(1);
  return v;
}

std::array<double, 6> parse_coeff_list(const std::string& text) {
  static constexpr std::string_view keys[6] = {"a1", "a2", "a3",
                                               "b1", "b2", "b3"};
  std::array<double, 6> vals{};
  std::array<bool, 6> seen{};
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::size_t end = comma == std::string::npos ? text.size() : comma;
    const std::string_view item = trimmed(std::string_view(text).substr(pos, end - pos));
    pos = end + 1;
    if (item.empty())
      throw validation_error("coeffs syntax", "empty item in --coeffs list");
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos)
      throw validation_error("coeffs syntax",
                             "expected key=value in --coeffs, got '" +
                                 std::string(item) + "'");
    const std::string_view key = trimmed(item.substr(0, eq));
    const std::string_view val = trimmed(item.substr(eq + 1));
    int slot = -1;
    for (int k = 0; k < 6; ++k)
      if (key == keys[k]) slot = k;
    if (slot < 0)
      throw validation_error("coeffs key",
                             "unknown coefficient '" + std::string(key) +
                                 "' (expected a1,a2,a3,b1,b2,b3)");
    if (seen[static_cast<std::size_t>(slot)])
      throw validation_error("coeffs key unique",
                             "duplicate coefficient '" + std::string(key) + "'");
    double parsed = 0.0;
    const char* last = val.data() + val.size();
    const auto [ptr, ec] = std::from_chars(val.data(), last, parsed);
    if (ec != std::errc{} || ptr != last)
      throw validation_error("coeffs value",
                             "cannot parse value for '" + std::string(key) +
                                 "': '" + std::string(val) + "'");
    vals[static_cast<std::size_t>(slot)] = parsed;
    seen[static_cast<std::size_t>(slot)] = true;
    if (comma == std::string::npos) break;
  }
  for (int k = 0; k < 6; ++k)
    if (!seen[static_cast<std::size_t>(k)])
      throw validation_error("coeffs complete",
                             "missing coefficient '" + std::string(keys[k]) +
                                 "' in --coeffs");
  return vals;
}

std::pair<ProblemInstance, CoefficientSet> resolve_model(const ModelArgs& m) {
  const int sources = (m.preset_opt->count() > 0 ? 1 : 0) +
                      (m.coeffs_opt->count() > 0 ? 1 : 0) +
                      (m.config_opt->count() > 0 ? 1 : 0);
  if (sources != 1)
    throw validation_error(
        "model source",
        "choose exactly one of --preset, --coeffs, --config");

  if (m.config_opt->count() > 0) {
    std::ifstream in(m.config_path, std::ios::binary);
    if (!in)
      throw std::runtime_error("cannot read config file '" + m.config_path +
                               "'");
    std::ostringstream body;
    body << in.rdbuf();
    return parse_config(body.str());
  }

  if (m.n_opt->count() == 0)
    throw validation_error("model source",
                           "--n is required with --preset or --coeffs");
  const ProblemInstance inst = make_instance(m.n, m.marked);
  if (m.preset_opt->count() > 0)
    return {inst, preset_by_name(m.preset, inst)};
  const std::array<double, 6> v = parse_coeff_list(m.coeffs);
  return {inst,
          make_coefficients(v[0], v[1], v[2], v[3], v[4], v[5], inst)};
}

void echo_model(const ProblemInstance& inst, const CoefficientSet& c) {
  std::cerr << write_config(inst, c);
  std::cerr << "a4=" << g17(c.a4) << "\n";
  std::cerr << "b4=" << g17(c.b4) << "\n";
  std::cerr << "x=" << g17(inst.overlap_x) << "\n";
  for (const std::string& w : c.warnings) std::cerr << "warning: " << w << "\n";
}

void echo_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

void emit(const std::string& out_path, const std::string& body) {
  if (out_path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open '" + out_path + "' for writing");
  out << body;
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + out_path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "aqsim: analytic gaps, adiabatic schedules and exact 2d dynamics for "
      "extended search Hamiltonians"};
  app.require_subcommand(1);

  // gap
  auto* gap_cmd = app.add_subcommand(
      "gap", "spectrum scan over s in [0,1] plus gap-polynomial metadata");
  ModelArgs gap_model;
  add_model_flags(gap_cmd, gap_model);
  int gap_points = 101;
  int gap_threads = 0;
  std::string gap_out, gap_meta;
  gap_cmd->add_option("--points", gap_points,
                      "number of s grid points (dimensionless, >= 2)")
      ->capture_default_str();
  gap_cmd->add_option("--threads", gap_threads,
                      "worker threads (0 = all cores, 1 = serial)")
      ->capture_default_str();
  gap_cmd->add_option("--out", gap_out, "CSV output path (default stdout)");
  gap_cmd->add_option("--meta", gap_meta,
                      "write A,B,C,s_star,g2_min,g_min record here instead "
                      "of stderr");

  // verify
  auto* verify_cmd = app.add_subcommand(
      "verify",
      "randomized audit: analytic gap polynomial vs dense eigensolver");
  std::int64_t verify_nmax = 256;
  int verify_trials = 100;
  std::uint64_t verify_seed = 42;
  double verify_tol = 1e-9;
  int verify_spoints = 21;
  int verify_threads = 0;
  std::string verify_out;
  verify_cmd->add_option("--n-max", verify_nmax,
                         "largest size; audited sizes are powers of four "
                         "from 4 up to this (<= 4096)")
      ->capture_default_str();
  verify_cmd->add_option("--trials", verify_trials,
                         "number of random coefficient draws (>= 1)")
      ->capture_default_str();
  verify_cmd->add_option("--seed", verify_seed, "RNG seed (dimensionless)")
      ->capture_default_str();
  verify_cmd->add_option("--tolerance", verify_tol,
                         "allowed |g2_dense - g2_analytic| (energy^2 units)")
      ->capture_default_str();
  verify_cmd->add_option("--s-points", verify_spoints,
                         "s grid points per trial (>= 2)")
      ->capture_default_str();
  verify_cmd->add_option("--threads", verify_threads,
                         "worker threads (0 = all cores, 1 = serial)")
      ->capture_default_str();
  verify_cmd->add_option("--out", verify_out,
                         "CSV output path (default stdout)");

  // schedule
  auto* sched_cmd = app.add_subcommand(
      "schedule", "tabulate the s(t) mapping of a global or local schedule");
  ModelArgs sched_model;
  add_model_flags(sched_cmd, sched_model);
  double sched_eps = 0.1;
  std::string sched_kind = "global";
  std::string sched_mode = "norm";
  int sched_resolution = 200;
  std::string sched_out;
  sched_cmd->add_option("--epsilon", sched_eps,
                        "adiabatic accuracy parameter (dimensionless, in "
                        "(0,1))")
      ->capture_default_str();
  sched_cmd->add_option("--kind", sched_kind, "schedule kind")
      ->check(CLI::IsMember({"global", "local"}))
      ->capture_default_str();
  sched_cmd->add_option("--mode", sched_mode,
                        "matrix-element mode for local schedules")
      ->check(CLI::IsMember({"transition", "norm"}))
      ->capture_default_str();
  sched_cmd->add_option("--resolution", sched_resolution,
                        "number of output intervals (>= 1)")
      ->capture_default_str();
  sched_cmd->add_option("--out", sched_out, "CSV output path (default stdout)");

  // evolve
  auto* evolve_cmd = app.add_subcommand(
      "evolve", "integrate the 2d dynamics at one or more time factors");
  ModelArgs evolve_model;
  add_model_flags(evolve_cmd, evolve_model);
  double evolve_eps = 0.1;
  std::string evolve_kind = "local";
  std::string evolve_mode = "norm";
  std::int64_t evolve_steps = 10000;
  std::vector<double> evolve_factors;
  int evolve_threads = 0;
  std::string evolve_out;
  evolve_cmd->add_option("--epsilon", evolve_eps,
                         "adiabatic accuracy parameter (dimensionless, in "
                         "(0,1))")
      ->capture_default_str();
  evolve_cmd->add_option("--kind", evolve_kind, "schedule kind")
      ->check(CLI::IsMember({"global", "local"}))
      ->capture_default_str();
  evolve_cmd->add_option("--mode", evolve_mode,
                         "matrix-element mode for local schedules")
      ->check(CLI::IsMember({"transition", "norm"}))
      ->capture_default_str();
  evolve_cmd->add_option("--steps", evolve_steps,
                         "integrator steps (dimensionless, >= 100)")
      ->capture_default_str();
  evolve_cmd
      ->add_option("--factors", evolve_factors,
                   "total-time multipliers relative to the schedule bound "
                   "(dimensionless, default 1)")
      ->delimiter(',');
  evolve_cmd->add_option("--threads", evolve_threads,
                         "worker threads (0 = all cores, 1 = serial)")
      ->capture_default_str();
  evolve_cmd->add_option("--out", evolve_out,
                         "CSV output path (default stdout)");

  // sweep
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "scan instance sizes at fixed gamma and fit the scaling law");
  double sweep_gamma = 0.0;
  double sweep_eps = 0.1;
  std::string sweep_kind = "global";
  std::string sweep_mode = "norm";
  std::vector<std::int64_t> sweep_n{16, 64, 256, 1024, 4096};
  std::int64_t sweep_steps = 10000;
  std::uint64_t sweep_seed = 42;
  int sweep_threads = 0;
  std::string sweep_out, sweep_report;
  bool sweep_dynamic = false;
  sweep_cmd->add_option("--gamma", sweep_gamma,
                        "coefficient growth exponent: a = b = n^gamma "
                        "(dimensionless, >= 0)")
      ->capture_default_str();
  sweep_cmd->add_option("--epsilon", sweep_eps,
                        "adiabatic accuracy parameter (dimensionless, in "
                        "(0,1))")
      ->capture_default_str();
  sweep_cmd->add_option("--kind", sweep_kind, "schedule kind")
      ->check(CLI::IsMember({"global", "local"}))
      ->capture_default_str();
  sweep_cmd->add_option("--mode", sweep_mode,
                        "matrix-element mode for local schedules")
      ->check(CLI::IsMember({"transition", "norm"}))
      ->capture_default_str();
  sweep_cmd
      ->add_option("--n", sweep_n,
                   "comma list of sizes, powers of two >= 4, increasing")
      ->delimiter(',')
      ->capture_default_str();
  sweep_cmd->add_option("--steps", sweep_steps,
                        "integrator steps for --dynamic (>= 100)")
      ->capture_default_str();
  sweep_cmd->add_option("--seed", sweep_seed,
                        "seed recorded with the sweep (sweeps are deterministic)")
      ->capture_default_str();
  sweep_cmd->add_option("--threads", sweep_threads,
                        "worker threads (0 = all cores, 1 = serial)")
      ->capture_default_str();
  auto* dyn_flag = sweep_cmd->add_flag(
      "--dynamic", sweep_dynamic,
      "run the evolution at each bound time and report success probability");
  auto* report_opt = sweep_cmd->add_option(
      "--report", sweep_report, "directory for fits.csv and per-fit SVG");
  report_opt->excludes(dyn_flag);
  sweep_cmd->add_option("--out", sweep_out, "CSV output path (default stdout)");

  // area
  auto* area_cmd = app.add_subcommand(
      "area", "minimize integral of a(x-p)^2 + c over p on a grid");
  double area_a = 0.0;
  double area_c = 0.0;
  int area_grid = 101;
  area_cmd->add_option("--a", area_a, "quadratic weight (energy^2 units, > 0)")
      ->required();
  area_cmd->add_option("--c", area_c, "constant offset (energy^2 units)")
      ->capture_default_str();
  area_cmd->add_option("--grid", area_grid,
                       "number of p samples (odd, >= 3)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gap_cmd->parsed()) {
      const auto [inst, c] = resolve_model(gap_model);
      echo_model(inst, c);
      std::cerr << "points=" << gap_points << "\n";
      const GapPolynomial gp = gap_polynomial(c, inst);
      emit(gap_out, scan_csv(spectrum_scan(c, inst, gap_points, gap_threads)));
      std::string meta;
      meta += "A=" + g17(gp.coeff_a) + "\n";
      meta += "B=" + g17(gp.coeff_b) + "\n";
      meta += "C=" + g17(gp.coeff_c) + "\n";
      meta += "s_star=" + g17(gp.s_star) + "\n";
      meta += "g2_min=" + g17(gp.g2_min) + "\n";
      meta += "g_min=" + g17(std::sqrt(gp.g2_min)) + "\n";
      if (gap_meta.empty())
        std::cerr << meta;
      else
        emit(gap_meta, meta);
      return 0;
    }

    if (verify_cmd->parsed()) {
      if (verify_trials < 1)
        throw validation_error("trials >= 1", "nothing to verify: --trials " +
                                                  std::to_string(verify_trials));
      if (verify_nmax < 4 || verify_nmax > 4096)
        throw validation_error("4 <= n-max <= 4096",
                               "--n-max must lie in [4, 4096], got " +
                                   std::to_string(verify_nmax));
      if (!(verify_tol > 0))
        throw validation_error("tolerance > 0",
                               "--tolerance must be positive");
      std::vector<std::int64_t> sizes;
      for (std::int64_t n = 4; n <= verify_nmax; n *= 4) sizes.push_back(n);
      std::cerr << "n_values=";
      for (std::size_t i = 0; i < sizes.size(); ++i)
        std::cerr << (i ? "," : "") << sizes[i];
      std::cerr << "\ntrials=" << verify_trials << "\nseed=" << verify_seed
                << "\ntolerance=" << g17(verify_tol)
                << "\ns_points=" << verify_spoints << "\n";

      const std::vector<OracleDeviation> rows = oracle_deviations(
          verify_seed, verify_trials, sizes, verify_spoints, verify_threads);
      std::string csv = "trial,n,max_abs_dev\n";
      const OracleDeviation* first_bad = nullptr;
      for (const OracleDeviation& r : rows) {
        csv += std::to_string(r.trial) + ',' + std::to_string(r.n) + ',' +
               g17(r.max_abs_dev) + '\n';
        if (!first_bad && r.max_abs_dev > verify_tol) first_bad = &r;
      }
      emit(verify_out, csv);
      if (first_bad) {
        std::cerr << "verify failed: trial=" << first_bad->trial
                  << " n=" << first_bad->n << " s=" << g17(first_bad->worst_s)
                  << " deviation=" << g17(first_bad->max_abs_dev)
                  << " tolerance=" << g17(verify_tol) << "\n";
        std::cerr << "coefficients: a1=" << g17(first_bad->values[0])
                  << " a2=" << g17(first_bad->values[1])
                  << " a3=" << g17(first_bad->values[2])
                  << " b1=" << g17(first_bad->values[3])
                  << " b2=" << g17(first_bad->values[4])
                  << " b3=" << g17(first_bad->values[5]) << "\n";
        return 1;
      }
      std::cerr << "verify passed: " << rows.size()
                << " rows within tolerance " << g17(verify_tol) << "\n";
      return 0;
    }

    if (sched_cmd->parsed()) {
      const auto [inst, c] = resolve_model(sched_model);
      echo_model(inst, c);
      const ScheduleKind kind = schedule_kind_from_string(sched_kind);
      const MatrixElementMode mode = mode_from_string(sched_mode);
      std::vector<std::string> warnings;
      const TimeBounds tb =
          compute_time_bounds(c, inst, sched_eps, mode, &warnings);
      echo_warnings(warnings);
      std::cerr << bounds_record(c, inst, sched_eps, tb);
      const Schedule sched = kind == ScheduleKind::global
                                 ? build_global(c, inst, sched_eps)
                                 : build_local(c, inst, sched_eps, mode);
      std::cerr << "kind=" << to_string(kind) << "\n";
      emit(sched_out, schedule_csv(sched, sched_resolution));
      return 0;
    }

    if (evolve_cmd->parsed()) {
      const auto [inst, c] = resolve_model(evolve_model);
      echo_model(inst, c);
      const ScheduleKind kind = schedule_kind_from_string(evolve_kind);
      const MatrixElementMode mode = mode_from_string(evolve_mode);
      if (evolve_factors.empty()) evolve_factors.push_back(1.0);
      std::cerr << "kind=" << to_string(kind) << "\nmode=" << to_string(mode)
                << "\nepsilon=" << g17(evolve_eps)
                << "\nsteps=" << evolve_steps << "\n";
      const std::vector<SuccessPoint> pts =
          success_vs_time(c, inst, kind, evolve_eps, mode, evolve_factors,
                          evolve_steps, evolve_threads);
      emit(evolve_out, success_csv(pts));
      return 0;
    }

    if (sweep_cmd->parsed()) {
      SweepSpec spec;
      spec.n_values = sweep_n;
      spec.gamma = sweep_gamma;
      spec.epsilon = sweep_eps;
      spec.kind = schedule_kind_from_string(sweep_kind);
      spec.mode = mode_from_string(sweep_mode);
      spec.steps = sweep_steps;
      spec.seed = sweep_seed;
      std::cerr << "gamma=" << g17(spec.gamma) << "\nepsilon="
                << g17(spec.epsilon) << "\nkind=" << to_string(spec.kind)
                << "\nmode=" << to_string(spec.mode) << "\nsteps="
                << spec.steps << "\nseed=" << spec.seed << "\nn_values=";
      for (std::size_t i = 0; i < spec.n_values.size(); ++i)
        std::cerr << (i ? "," : "") << spec.n_values[i];
      std::cerr << "\n";

      if (sweep_dynamic) {
        const std::vector<DynamicRow> rows =
            run_dynamic_sweep(spec, sweep_threads);
        emit(sweep_out, dynamic_csv(spec, rows));
        return 0;
      }
      const SweepResult res = run_sweep(spec, sweep_threads);
      emit(sweep_out, sweep_points_csv(res));
      std::cerr << "exponent=" << g17(res.fit.exponent) << "\n"
                << "intercept=" << g17(res.fit.intercept) << "\n"
                << "r_squared=" << g17(res.fit.r_squared) << "\n"
                << "num_points=" << res.fit.points.size() << "\n";
      if (!sweep_report.empty()) {
        const std::vector<SweepResult> all{res};
        for (const auto& path : emit_report(all, sweep_report))
          std::cerr << "wrote " << path.string() << "\n";
      }
      return 0;
    }

    if (area_cmd->parsed()) {
      std::cerr << "a=" << g17(area_a) << "\nc=" << g17(area_c)
                << "\ngrid=" << area_grid << "\n";
      const auto [p, v] = minimum_area_check(area_a, area_c, area_grid);
      std::cout << "argmin_p=" << g17(p) << ",min_integral=" << g17(v) << "\n";
      return 0;
    }
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cerr << "violated constraint: " << e.constraint() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
