#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "aqs/model.hpp"

namespace aqs {

// Gap polynomial g^2(s) = A s^2 + B s + C of H(s) = (1-s)H_i + s H_f in the
// difference parameters, written exactly as
//   A = (a2-a3)^2 + 2(-1+2x^2)(a2-a3)(b2-b3) + (b2-b3)^2
//   B = -2(a2-a3)((a2-a3) + (-1+2x^2)(b2-b3))
//   C = (a2-a3)^2.
// Every valid coefficient set satisfies A > 0, B < 0, 0 < s* < 1 and
// g2_min > 0; the factory checks them and fails loudly otherwise.
struct GapPolynomial {
  double coeff_a = 0, coeff_b = 0, coeff_c = 0;
  double s_star = 0;        // argmin -B/(2A)
  double g2_min = 0;        // vertex value C - B^2/(4A)
  double discriminant = 0;  // 4AC - B^2 = 4 A g2_min > 0

  double eval(double s) const { return (coeff_a * s + coeff_b) * s + coeff_c; }
};

GapPolynomial gap_polynomial(const CoefficientSet& c,
                             const ProblemInstance& inst);

// Minimum gap via the closed form
//   g2 = 4 x^2 (1-x^2) / ((1/a)^2 + 2(1-2x^2)/(ab) + (1/b)^2),
// an evaluation route independent of gap_polynomial's vertex.
double min_gap_squared(const CoefficientSet& c, const ProblemInstance& inst);
double min_gap(const CoefficientSet& c, const ProblemInstance& inst);

// H(s) restricted to the invariant plane span{|alpha>, |beta>}, where
// |beta> = (|psi> - x|alpha>)/sqrt(1-x^2). `shift` carries the identity part
// (1-s)a1 + s b1 (which is also the bulk level); p** is the remainder, so
// the matrix entries are m00 = shift + p00, m01 = p01, m11 = shift + p11.
// Keeping the split explicit lets the propagator treat the identity part as
// a pure phase.
struct EffectiveBlock {
  double shift = 0;
  double p00 = 0, p01 = 0, p11 = 0;

  double m00() const { return shift + p00; }
  double m01() const { return p01; }
  double m11() const { return shift + p11; }
  Eigen::Matrix2d matrix() const;
  std::pair<double, double> eigenvalues() const;  // (ground, excited)
  Eigen::Vector2d ground_vector() const;          // unit, sign-normalized
};

EffectiveBlock effective_block(const CoefficientSet& c,
                               const ProblemInstance& inst, double s);

// Full n-by-n matrix of H(s) in the computational basis; the marked row and
// column sit at inst.marked_index. Guarded to n <= 4096.
Eigen::MatrixXd dense_hamiltonian(const CoefficientSet& c,
                                  const ProblemInstance& inst, double s);

// Ascending eigenvalues of dense_hamiltonian; exactly n-2 of them equal the
// bulk level (1-s)a1 + s b1 up to solver accuracy.
std::vector<double> dense_spectrum(const CoefficientSet& c,
                                   const ProblemInstance& inst, double s);

struct SpectralSlice {
  double s = 0;
  double e_ground = 0, e_excited = 0, e_bulk = 0;
  Eigen::Vector2d ground_vector = Eigen::Vector2d::Zero();
  double g2_analytic = 0;  // gap polynomial at s
  double g2_numeric = 0;   // (e_excited - e_ground)^2 from the block
  // 0 none, 1 bulk below the excited level, 2 bulk below the ground level
  // as well; always 0 for n = 2 where no bulk states exist
  int bulk_flag = 0;
};

// Uniform grid of num_points slices over s in [0, 1].
std::vector<SpectralSlice> spectrum_scan(const CoefficientSet& c,
                                         const ProblemInstance& inst,
                                         int num_points, int threads = 1);

// CSV with header s,e_ground,e_excited,e_bulk,g2_analytic,g2_numeric,bulk_flag.
std::string scan_csv(const std::vector<SpectralSlice>& slices);

// One row of the randomized dense-oracle audit: the largest deviation
// |g2_dense - g2_polynomial| over the s grid for one (trial, n) cell.
struct OracleDeviation {
  int trial = 0;
  std::int64_t n = 0;
  double max_abs_dev = 0;
  double worst_s = 0;
  std::array<double, 6> values{};  // the raw (a1,a2,a3,b1,b2,b3) draw
};

// Draws `trials` random coefficient sets (seeded), then compares the squared
// gap from dense eigenvalues against the polynomial on an s_points grid for
// every n in n_values. Rows are ordered trial-major regardless of threads.
std::vector<OracleDeviation> oracle_deviations(std::uint64_t seed, int trials,
                                               std::span<const std::int64_t> n_values,
                                               int s_points, int threads = 1);

}  // namespace aqs
