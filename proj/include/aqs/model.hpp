#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace aqs {

// Thrown whenever an input violates a model constraint. `constraint` names
// the violated condition (for example "a3 > a2") so callers can report it.
class validation_error : public std::runtime_error {
 public:
  validation_error(std::string constraint, const std::string& what)
      : std::runtime_error(what), constraint_(std::move(constraint)) {}
  const std::string& constraint() const noexcept { return constraint_; }

 private:
  std::string constraint_;
};

// Search instance: database size n and the marked item's index. overlap_x is
// <alpha|psi> = 1/sqrt(n), the only geometric quantity the analytics need.
struct ProblemInstance {
  std::int64_t n = 0;
  std::int64_t marked_index = 0;
  double overlap_x = 0.0;
};

ProblemInstance make_instance(std::int64_t n, std::int64_t marked_index);

// Interpolating Hamiltonian family
//   H_i = a1 + a2|psi><psi| + a3|alpha><alpha| + a4(|alpha><psi| + |psi><alpha|)
//   H_f = b1 + b2|psi><psi| + b3|alpha><alpha| + b4(|alpha><psi| + |psi><alpha|)
// where |psi> is the uniform superposition and |alpha> the marked state. The
// cross terms are pinned to a4 = -a3 x, b4 = -b2 x so that |psi> and |alpha>
// are exact eigenstates of H_i and H_f; a3 > a2 and b2 > b3 make them ground
// states. Construct through make_coefficients or a preset, never by hand.
struct CoefficientSet {
  double a1 = 0, a2 = 0, a3 = 0, a4 = 0;
  double b1 = 0, b2 = 0, b3 = 0, b4 = 0;
  std::vector<std::string> warnings;  // non-fatal diagnostics from validation
};

CoefficientSet make_coefficients(double a1, double a2, double a3, double b1,
                                 double b2, double b3,
                                 const ProblemInstance& inst);

// Difference parameters a = a3 - a2 > 0, b = b2 - b3 > 0 controlling the gap.
struct GapParameters {
  double a = 0;
  double b = 0;
};

GapParameters gap_parameters(const CoefficientSet& c);

// Ground energies (H_i at |psi>, H_f at |alpha>):
//   E_i = a1 + a2 - a3 x^2,  E_f = b1 + b3 - b2 x^2.
std::pair<double, double> ground_energies(const CoefficientSet& c,
                                          const ProblemInstance& inst);

// a1 = b1 = 1, a2 = b3 = -1, a3 = b2 = 0: H_i = 1 - |psi><psi|,
// H_f = 1 - |alpha><alpha|.
CoefficientSet farhi_preset(const ProblemInstance& inst);
// a1 = b1 = 1, a3 = b2 = n^gamma, a2 = b3 = 0.
CoefficientSet scaled_preset(double gamma, const ProblemInstance& inst);
// "farhi" or "scaled:<gamma>".
CoefficientSet preset_by_name(std::string_view name,
                              const ProblemInstance& inst);

// Draws (a1, a2, a3, b1, b2, b3) uniformly from [-5, 5] conditioned on the
// ordering constraints, by rejection on a3 and b2. Used by the randomized
// dense-oracle audit; deterministic for a given generator state.
std::array<double, 6> random_coefficient_values(std::mt19937_64& rng);

// Flat key=value serialization. Keys: n, marked_index, a1, a2, a3, b1, b2,
// b3. The cross terms a4/b4 are derived quantities and are never stored.
// Lines starting with '#' and blank lines are ignored on input; every key is
// required exactly once. Round-trips bit-exactly.
std::string write_config(const ProblemInstance& inst, const CoefficientSet& c);
std::pair<ProblemInstance, CoefficientSet> parse_config(std::string_view text);

}  // namespace aqs
