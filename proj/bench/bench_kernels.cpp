// Compares the serial reference path (threads = 1) against the OpenMP path
// (threads = 0, all cores) on the three parallel kernels and checks that
// both produce bit-identical results. Exit code 0 only if they do.
// Pass --quick for a fast smoke run.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "aqs/dynamics.hpp"
#include "aqs/model.hpp"
#include "aqs/parallel.hpp"
#include "aqs/schedule.hpp"
#include "aqs/spectral.hpp"

namespace {

using namespace aqs;
using clock_type = std::chrono::steady_clock;

template <typename Fn>
double timed(Fn&& fn) {
  const auto t0 = clock_type::now();
  fn();
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

bool report(const char* name, double t_serial, double t_parallel,
            bool identical) {
  std::printf("%-22s serial %8.3fs   parallel %8.3fs   speedup %5.2fx   "
              "identical: %s\n",
              name, t_serial, t_parallel,
              t_parallel > 0 ? t_serial / t_parallel : 0.0,
              identical ? "yes" : "NO");
  return identical;
}

}  // namespace

int main(int argc, char** argv) {
  const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
  std::printf("hardware threads: %d%s\n", hardware_threads(),
              quick ? " (quick mode)" : "");
  bool all_ok = true;

  {
    const int trials = quick ? 6 : 40;
    const std::vector<std::int64_t> sizes = {4, 16, 64};
    std::vector<OracleDeviation> serial, parallel;
    const double ts = timed(
        [&] { serial = oracle_deviations(7, trials, sizes, 21, 1); });
    const double tp = timed(
        [&] { parallel = oracle_deviations(7, trials, sizes, 21, 0); });
    bool same = serial.size() == parallel.size();
    for (std::size_t i = 0; same && i < serial.size(); ++i) {
      same = serial[i].trial == parallel[i].trial &&
             serial[i].n == parallel[i].n &&
             serial[i].max_abs_dev == parallel[i].max_abs_dev &&
             serial[i].worst_s == parallel[i].worst_s;
    }
    all_ok &= report("dense-oracle audit", ts, tp, same);
  }

  {
    const int points = quick ? 2001 : 200001;
    const ProblemInstance inst = make_instance(256, 0);
    const CoefficientSet c = farhi_preset(inst);
    std::string serial, parallel;
    const double ts =
        timed([&] { serial = scan_csv(spectrum_scan(c, inst, points, 1)); });
    const double tp =
        timed([&] { parallel = scan_csv(spectrum_scan(c, inst, points, 0)); });
    all_ok &= report("spectrum scan", ts, tp, serial == parallel);
  }

  {
    const std::int64_t steps = quick ? 2000 : 20000;
    const ProblemInstance inst = make_instance(64, 0);
    const CoefficientSet c = farhi_preset(inst);
    std::vector<double> factors;
    const int count = quick ? 4 : 8;
    for (int i = 0; i < count; ++i)
      factors.push_back(0.25 * static_cast<double>(i + 1));
    std::vector<SuccessPoint> serial, parallel;
    const double ts = timed([&] {
      serial = success_vs_time(c, inst, ScheduleKind::local, 0.1,
                               MatrixElementMode::operator_norm_bound, factors,
                               steps, 1);
    });
    const double tp = timed([&] {
      parallel = success_vs_time(c, inst, ScheduleKind::local, 0.1,
                                 MatrixElementMode::operator_norm_bound,
                                 factors, steps, 0);
    });
    bool same = serial.size() == parallel.size();
    for (std::size_t i = 0; same && i < serial.size(); ++i) {
      same = serial[i].factor == parallel[i].factor &&
             serial[i].result.success_probability ==
                 parallel[i].result.success_probability &&
             serial[i].result.max_norm_drift ==
                 parallel[i].result.max_norm_drift;
    }
    all_ok &= report("time-factor evolution", ts, tp, same);
  }

  if (!all_ok) {
    std::printf("serial and parallel paths disagree\n");
    return 1;
  }
  return 0;
}
