#include "aqs/model.hpp"

#include <charconv>
#include <cmath>
#include <map>

#include "aqs/format.hpp"

namespace aqs {

ProblemInstance make_instance(std::int64_t n, std::int64_t marked_index) {
  if (n < 2)
    throw validation_error(
        "n >= 2", "instance size must be at least 2, got n=" + std::to_string(n));
  if (marked_index < 0 || marked_index >= n)
    throw validation_error("0 <= marked_index < n",
                           "marked index " + std::to_string(marked_index) +
                               " outside [0, " + std::to_string(n) + ")");
  ProblemInstance inst;
  inst.n = n;
  inst.marked_index = marked_index;
  inst.overlap_x = 1.0 / std::sqrt(static_cast<double>(n));
  return inst;
}

CoefficientSet make_coefficients(double a1, double a2, double a3, double b1,
                                 double b2, double b3,
                                 const ProblemInstance& inst) {
  for (double v : {a1, a2, a3, b1, b2, b3})
    if (!std::isfinite(v))
      throw validation_error("finite coefficients",
                             "all coefficients must be finite");
  if (!(a3 > a2))
    throw validation_error(
        "a3 > a2", "need a3 > a2 so |psi> is the ground state of H_i (a3=" +
                       g17(a3) + ", a2=" + g17(a2) + ")");
  if (!(b2 > b3))
    throw validation_error(
        "b2 > b3", "need b2 > b3 so |alpha> is the ground state of H_f (b2=" +
                       g17(b2) + ", b3=" + g17(b3) + ")");
  CoefficientSet c;
  c.a1 = a1;
  c.a2 = a2;
  c.a3 = a3;
  c.b1 = b1;
  c.b2 = b2;
  c.b3 = b3;
  c.a4 = -(a3 * inst.overlap_x);
  c.b4 = -(b2 * inst.overlap_x);
  const auto [ei, ef] = ground_energies(c, inst);
  if (ei < 0.0)
    c.warnings.push_back("H_i ground energy is negative: a1 + a2 - a3*x^2 = " +
                         g17(ei));
  if (ef < 0.0)
    c.warnings.push_back("H_f ground energy is negative: b1 + b3 - b2*x^2 = " +
                         g17(ef));
  return c;
}

GapParameters gap_parameters(const CoefficientSet& c) {
  return {c.a3 - c.a2, c.b2 - c.b3};
}

std::pair<double, double> ground_energies(const CoefficientSet& c,
                                          const ProblemInstance& inst) {
  const double x2 = inst.overlap_x * inst.overlap_x;
  return {c.a1 + c.a2 - c.a3 * x2, c.b1 + c.b3 - c.b2 * x2};
}

CoefficientSet farhi_preset(const ProblemInstance& inst) {
  return make_coefficients(1.0, -1.0, 0.0, 1.0, 0.0, -1.0, inst);
}

CoefficientSet scaled_preset(double gamma, const ProblemInstance& inst) {
  if (!std::isfinite(gamma))
    throw validation_error("finite gamma", "gamma must be finite");
  const double amp = std::pow(static_cast<double>(inst.n), gamma);
  return make_coefficients(1.0, 0.0, amp, 1.0, amp, 0.0, inst);
}

CoefficientSet preset_by_name(std::string_view name,
                              const ProblemInstance& inst) {
  if (name == "farhi") return farhi_preset(inst);
  constexpr std::string_view prefix = "scaled:";
  if (name.substr(0, prefix.size()) == prefix) {
    const std::string_view num = name.substr(prefix.size());
    double gamma = 0.0;
    const char* last = num.data() + num.size();
    const auto [ptr, ec] = std::from_chars(num.data(), last, gamma);
    if (ec != std::errc{} || ptr != last)
      throw validation_error("preset name", "cannot parse gamma in preset '" +
                                                std::string(name) + "'");
    return scaled_preset(gamma, inst);
  }
  throw validation_error("preset name",
                         "unknown preset '" + std::string(name) +
                             "' (expected \"farhi\" or \"scaled:<gamma>\")");
}

std::array<double, 6> random_coefficient_values(std::mt19937_64& rng) {
  auto uniform = [&rng]() {
    // top 53 bits -> [0, 1); identical draws on every platform
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return -5.0 + 10.0 * u;
  };
  const double a1 = uniform();
  const double a2 = uniform();
  double a3 = uniform();
  while (!(a3 > a2)) a3 = uniform();
  const double b1 = uniform();
  const double b3 = uniform();
  double b2 = uniform();
  while (!(b2 > b3)) b2 = uniform();
  return {a1, a2, a3, b1, b2, b3};
}

std::string write_config(const ProblemInstance& inst,
                         const CoefficientSet& c) {
  std::string out;
  out += "n=" + std::to_string(inst.n) + "\n";
  out += "marked_index=" + std::to_string(inst.marked_index) + "\n";
  out += "a1=" + g17(c.a1) + "\n";
  out += "a2=" + g17(c.a2) + "\n";
  out += "a3=" + g17(c.a3) + "\n";
  out += "b1=" + g17(c.b1) + "\n";
  out += "b2=" + g17(c.b2) + "\n";
  out += "b3=" + g17(c.b3) + "\n";
  return out;
}

namespace {

std::string_view trimmed(std::string_view v) {
  while (!v.empty() && (v.front() == ' ' || v.front() == '\t' || v.front() == '\r'))
    v.remove_prefix(1);
  while (!v.empty() && (v.back() == ' ' || v.back() == '\t' || v.back() == '\r'))
    v.remove_suffix(1);
  return v;
}

double parse_double_value(const std::string& key, std::string_view text) {
  double v = 0.0;
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), last, v);
  if (ec != std::errc{} || ptr != last)
    throw validation_error("config value",
                           "cannot parse value for key '" + key + "': '" +
                               std::string(text) + "'");
  return v;
}

std::int64_t parse_int_value(const std::string& key, std::string_view text) {
  std::int64_t v = 0;
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), last, v);
  if (ec != std::errc{} || ptr != last)
    throw validation_error("config value",
                           "cannot parse value for key '" + key + "': '" +
                               std::string(text) + "'");
  return v;
}

}  // namespace

std::pair<ProblemInstance, CoefficientSet> parse_config(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::size_t pos = 0;
  int lineno = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++lineno;
    const std::string_view body = trimmed(line);
    if (body.empty() || body.front() == '#') continue;
    const std::size_t eq = body.find('=');
    if (eq == std::string_view::npos)
      throw validation_error("config syntax",
                             "line " + std::to_string(lineno) +
                                 ": expected key=value, got '" +
                                 std::string(body) + "'");
    const std::string key{trimmed(body.substr(0, eq))};
    const std::string value{trimmed(body.substr(eq + 1))};
    if (!kv.emplace(key, value).second)
      throw validation_error("config key unique",
                             "duplicate config key '" + key + "'");
  }

  static constexpr const char* required[] = {"n",  "marked_index", "a1", "a2",
                                             "a3", "b1",           "b2", "b3"};
  for (const char* key : required)
    if (kv.find(key) == kv.end())
      throw validation_error("config key present",
                             std::string("missing config key '") + key + "'");
  for (const auto& [key, value] : kv) {
    bool known = false;
    for (const char* k : required) known = known || key == k;
    if (!known)
      throw validation_error("config key known",
                             "unknown config key '" + key + "'");
  }

  const ProblemInstance inst = make_instance(
      parse_int_value("n", kv["n"]),
      parse_int_value("marked_index", kv["marked_index"]));
  CoefficientSet c = make_coefficients(
      parse_double_value("a1", kv["a1"]), parse_double_value("a2", kv["a2"]),
      parse_double_value("a3", kv["a3"]), parse_double_value("b1", kv["b1"]),
      parse_double_value("b2", kv["b2"]), parse_double_value("b3", kv["b3"]),
      inst);
  return {inst, std::move(c)};
}

}  // namespace aqs
