#include "aqs/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "aqs/format.hpp"
#include "aqs/parallel.hpp"

namespace aqs {

namespace {

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string short4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

bool power_of_two(std::int64_t n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

void validate(const SweepSpec& spec) {
  if (spec.n_values.empty())
    throw validation_error("n_values nonempty", "sweep needs at least one n");
  std::int64_t prev = 0;
  for (std::int64_t n : spec.n_values) {
    if (n < 4 || !power_of_two(n))
      throw validation_error("n power of two >= 4",
                             "sweep sizes must be powers of two >= 4, got " +
                                 std::to_string(n));
    if (n <= prev)
      throw validation_error("n_values increasing",
                             "sweep sizes must be strictly increasing");
    prev = n;
  }
  if (!(spec.epsilon > 0.0 && spec.epsilon < 1.0))
    throw validation_error("0 < epsilon < 1", "epsilon must lie in (0, 1), got " +
                                                  g17(spec.epsilon));
  if (!(spec.gamma >= 0.0) || !std::isfinite(spec.gamma))
    throw validation_error("gamma >= 0",
                           "coefficient exponent must be nonnegative, got " +
                               g17(spec.gamma));
  if (spec.steps < 100)
    throw validation_error("steps >= 100", "integrator steps must be >= 100");
}

ScalingFit fit_exponent(std::span<const std::pair<double, double>> points) {
  if (points.size() < 4)
    throw validation_error("fit points >= 4",
                           "power-law fit needs at least 4 points, got " +
                               std::to_string(points.size()));
  const auto m = static_cast<double>(points.size());
  double xbar = 0, ybar = 0;
  std::vector<double> lx(points.size()), ly(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [n, t] = points[i];
    if (!(n > 0) || !(t > 0) || !std::isfinite(n) || !std::isfinite(t))
      throw validation_error("positive fit points",
                             "power-law fit needs positive finite values, got "
                             "(" + g17(n) + ", " + g17(t) + ")");
    lx[i] = std::log(n);
    ly[i] = std::log(t);
    xbar += lx[i];
    ybar += ly[i];
  }
  xbar /= m;
  ybar /= m;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double dx = lx[i] - xbar;
    const double dy = ly[i] - ybar;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0))
    throw validation_error("distinct n values",
                           "all fit points share the same n");

  ScalingFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = ybar - fit.exponent * xbar;
  // r^2 = 1 - SS_res / SS_tot with SS_res = syy - sxy^2/sxx. Exactly
  // constant data has SS_tot = 0 and a perfect horizontal fit, so r^2 = 1
  // by convention; the threshold scales with rounding noise of the logs.
  const double tiny = 1e-20 * m * std::max(1.0, ybar * ybar);
  if (syy <= tiny) {
    fit.r_squared = 1.0;
  } else {
    const double ss_res = std::max(0.0, syy - sxy * sxy / sxx);
    fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  fit.points.assign(points.begin(), points.end());
  return fit;
}

SweepResult run_sweep(const SweepSpec& spec, int threads) {
  validate(spec);
  std::vector<std::pair<double, double>> points(spec.n_values.size());
  parallel_for(static_cast<std::int64_t>(spec.n_values.size()), threads,
               [&](std::int64_t i) {
                 const std::int64_t n = spec.n_values[static_cast<std::size_t>(i)];
                 const ProblemInstance inst = make_instance(n, 0);
                 const CoefficientSet c = scaled_preset(spec.gamma, inst);
                 const double t =
                     spec.kind == ScheduleKind::global
                         ? global_time_bound(c, inst, spec.epsilon)
                         : local_time_bound(c, inst, spec.epsilon, spec.mode);
                 points[static_cast<std::size_t>(i)] = {
                     static_cast<double>(n), t};
               });
  return {spec, fit_exponent(points)};
}

std::vector<DynamicRow> run_dynamic_sweep(const SweepSpec& spec, int threads) {
  validate(spec);
  std::vector<DynamicRow> rows(spec.n_values.size());
  parallel_for(static_cast<std::int64_t>(spec.n_values.size()), threads,
               [&](std::int64_t i) {
                 const std::int64_t n = spec.n_values[static_cast<std::size_t>(i)];
                 const ProblemInstance inst = make_instance(n, 0);
                 const CoefficientSet c = scaled_preset(spec.gamma, inst);
                 const Schedule sched =
                     spec.kind == ScheduleKind::global
                         ? build_global(c, inst, spec.epsilon)
                         : build_local(c, inst, spec.epsilon, spec.mode);
                 DynamicRow& row = rows[static_cast<std::size_t>(i)];
                 row.n = n;
                 row.x = inst.overlap_x;
                 row.t_bound = sched.total_time();
                 row.result = evolve(c, inst, sched, spec.steps);
               });
  return rows;
}

std::string sweep_points_csv(const SweepResult& result) {
  std::string out = "n,gamma,kind,mode,epsilon,t_bound\n";
  for (const auto& [n, t] : result.fit.points) {
    out += g17(n) + ',' + g17(result.spec.gamma) + ',' +
           to_string(result.spec.kind) + ',' + to_string(result.spec.mode) +
           ',' + g17(result.spec.epsilon) + ',' + g17(t) + '\n';
  }
  return out;
}

std::string fits_csv(std::span<const SweepResult> results) {
  std::string out = "gamma,kind,exponent,intercept,r_squared,num_points\n";
  for (const SweepResult& r : results) {
    out += g17(r.spec.gamma) + ',' + to_string(r.spec.kind) + ',' +
           g17(r.fit.exponent) + ',' + g17(r.fit.intercept) + ',' +
           g17(r.fit.r_squared) + ',' + std::to_string(r.fit.points.size()) +
           '\n';
  }
  return out;
}

std::string dynamic_csv(const SweepSpec& spec,
                        std::span<const DynamicRow> rows) {
  std::string out =
      "n,x,gamma,kind,mode,epsilon,steps,t_bound,success_probability,"
      "norm_drift\n";
  for (const DynamicRow& r : rows) {
    out += std::to_string(r.n) + ',' + g17(r.x) + ',' + g17(spec.gamma) + ',' +
           to_string(spec.kind) + ',' + to_string(spec.mode) + ',' +
           g17(spec.epsilon) + ',' + std::to_string(spec.steps) + ',' +
           g17(r.t_bound) + ',' + g17(r.result.success_probability) + ',' +
           g17(r.result.max_norm_drift) + '\n';
  }
  return out;
}

std::string fit_svg(const SweepResult& result) {
  const auto& pts = result.fit.points;
  if (pts.empty()) throw validation_error("nonempty fit", "no points to plot");

  constexpr double kW = 800, kH = 600;
  constexpr double kLeft = 90, kRight = 40, kTop = 60, kBottom = 80;

  double lx_min = 0, lx_max = 0, ly_min = 0, ly_max = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double lx = std::log(pts[i].first);
    const double ly = std::log(pts[i].second);
    lx_min = i == 0 ? lx : std::min(lx_min, lx);
    lx_max = i == 0 ? lx : std::max(lx_max, lx);
    ly_min = i == 0 ? ly : std::min(ly_min, ly);
    ly_max = i == 0 ? ly : std::max(ly_max, ly);
  }
  // keep the fitted line inside the frame as well
  for (double lx : {lx_min, lx_max}) {
    const double ly = result.fit.exponent * lx + result.fit.intercept;
    ly_min = std::min(ly_min, ly);
    ly_max = std::max(ly_max, ly);
  }
  if (lx_max - lx_min < 1e-9) {
    lx_min -= 1.0;
    lx_max += 1.0;
  }
  if (ly_max - ly_min < 1e-9) {
    ly_min -= 1.0;
    ly_max += 1.0;
  } else {
    const double pad = 0.06 * (ly_max - ly_min);
    ly_min -= pad;
    ly_max += pad;
  }

  const auto px = [&](double lx) {
    return kLeft + (lx - lx_min) / (lx_max - lx_min) * (kW - kLeft - kRight);
  };
  const auto py = [&](double ly) {
    return kH - kBottom -
           (ly - ly_min) / (ly_max - ly_min) * (kH - kTop - kBottom);
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" "
        "height=\"600\" viewBox=\"0 0 800 600\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";

  const std::string title =
      "time bound vs n  (kind=" + to_string(result.spec.kind) +
      ", mode=" + to_string(result.spec.mode) +
      ", gamma=" + short4(result.spec.gamma) +
      ", epsilon=" + short4(result.spec.epsilon) + ")";
  os << "<text x=\"400\" y=\"30\" text-anchor=\"middle\" "
        "font-family=\"monospace\" font-size=\"16\">" << title << "</text>\n";

  // frame
  os << "<rect x=\"" << fixed2(kLeft) << "\" y=\"" << fixed2(kTop)
     << "\" width=\"" << fixed2(kW - kLeft - kRight) << "\" height=\""
     << fixed2(kH - kTop - kBottom)
     << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";

  // x ticks at the sweep sizes, y ticks on a uniform log grid
  for (const auto& [n, t] : pts) {
    const double cx = px(std::log(n));
    os << "<line x1=\"" << fixed2(cx) << "\" y1=\"" << fixed2(kH - kBottom)
       << "\" x2=\"" << fixed2(cx) << "\" y2=\"" << fixed2(kH - kBottom + 6)
       << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << fixed2(cx) << "\" y=\"" << fixed2(kH - kBottom + 22)
       << "\" text-anchor=\"middle\" font-family=\"monospace\" "
          "font-size=\"12\">" << short4(n) << "</text>\n";
  }
  constexpr int kYTicks = 5;
  for (int i = 0; i < kYTicks; ++i) {
    const double ly = ly_min + (ly_max - ly_min) * i / (kYTicks - 1);
    const double cy = py(ly);
    os << "<line x1=\"" << fixed2(kLeft - 6) << "\" y1=\"" << fixed2(cy)
       << "\" x2=\"" << fixed2(kLeft) << "\" y2=\"" << fixed2(cy)
       << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << fixed2(kLeft - 10) << "\" y=\"" << fixed2(cy + 4)
       << "\" text-anchor=\"end\" font-family=\"monospace\" "
          "font-size=\"12\">" << short4(std::exp(ly)) << "</text>\n";
  }

  // axis labels
  os << "<text x=\"" << fixed2(kLeft + (kW - kLeft - kRight) / 2) << "\" y=\""
     << fixed2(kH - 28)
     << "\" text-anchor=\"middle\" font-family=\"monospace\" "
        "font-size=\"14\">n (log scale)</text>\n";
  os << "<text x=\"24\" y=\"" << fixed2(kTop + (kH - kTop - kBottom) / 2)
     << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"14\" "
        "transform=\"rotate(-90 24 " << fixed2(kTop + (kH - kTop - kBottom) / 2)
     << ")\">time bound (log scale)</text>\n";

  // fitted line, then the data on top
  os << "<line x1=\"" << fixed2(px(lx_min)) << "\" y1=\""
     << fixed2(py(result.fit.exponent * lx_min + result.fit.intercept))
     << "\" x2=\"" << fixed2(px(lx_max)) << "\" y2=\""
     << fixed2(py(result.fit.exponent * lx_max + result.fit.intercept))
     << "\" stroke=\"#d62728\" stroke-width=\"1.5\" "
        "stroke-dasharray=\"6 4\"/>\n";

  os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" "
        "points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) os << ' ';
    os << fixed2(px(std::log(pts[i].first))) << ','
       << fixed2(py(std::log(pts[i].second)));
  }
  os << "\"/>\n";
  for (const auto& [n, t] : pts) {
    os << "<circle cx=\"" << fixed2(px(std::log(n))) << "\" cy=\""
       << fixed2(py(std::log(t)))
       << "\" r=\"4\" fill=\"#1f77b4\" stroke=\"white\" "
          "stroke-width=\"1\"/>\n";
  }

  os << "<text x=\"" << fixed2(kW - kRight - 8) << "\" y=\""
     << fixed2(kTop + 20)
     << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"13\" "
        "fill=\"#d62728\">fit: exponent=" << short4(result.fit.exponent)
     << "  r^2=" << short4(result.fit.r_squared) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

namespace {

std::string gamma_tag(double gamma) {
  std::string tag = g17(gamma);
  for (char& ch : tag) {
    if (ch == '.') ch = 'p';
    if (ch == '-') ch = 'm';
    if (ch == '+') ch = '_';
  }
  return tag;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open '" + path.string() +
                             "' for writing");
  out << body;
  out.flush();
  if (!out)
    throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace

std::vector<std::filesystem::path> emit_report(
    std::span<const SweepResult> results, const std::filesystem::path& dir) {
  if (results.empty())
    throw validation_error("nonempty fits", "report needs at least one fit");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw std::runtime_error("cannot create report directory '" +
                             dir.string() + "': " + ec.message());

  std::vector<std::filesystem::path> written;
  const std::filesystem::path fits_path = dir / "fits.csv";
  write_file(fits_path, fits_csv(results));
  written.push_back(fits_path);

  for (std::size_t i = 0; i < results.size(); ++i) {
    const SweepResult& r = results[i];
    char idx[32];
    std::snprintf(idx, sizeof(idx), "%02zu", i + 1);
    const std::string name = std::string("fit_") + idx + "_" +
                             to_string(r.spec.kind) + "_" +
                             to_string(r.spec.mode) + "_gamma" +
                             gamma_tag(r.spec.gamma) + ".svg";
    const std::filesystem::path svg_path = dir / name;
    write_file(svg_path, fit_svg(r));
    written.push_back(svg_path);
  }
  return written;
}

}  // namespace aqs
