#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <random>

#include "aqs/model.hpp"
#include "aqs/spectral.hpp"
#include "doctest.h"

using namespace aqs;

TEST_CASE("instance construction and overlap geometry") {
  CHECK(make_instance(4, 0).overlap_x == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(make_instance(2, 1).overlap_x ==
        doctest::Approx(0.7071067811865476).epsilon(1e-15));
  CHECK(make_instance(1024, 17).overlap_x ==
        doctest::Approx(0.03125).epsilon(1e-15));

  for (std::int64_t n : {2, 3, 7, 64, 1000, 4096}) {
    const ProblemInstance inst = make_instance(n, n - 1);
    CHECK(std::abs(inst.overlap_x * inst.overlap_x * static_cast<double>(n) -
                   1.0) <= 1e-12);
    CHECK(inst.overlap_x > 0.0);
    CHECK(inst.overlap_x < 1.0);
  }
}

TEST_CASE("instance construction rejects bad shapes") {
  CHECK_THROWS_AS(make_instance(1, 0), validation_error);
  CHECK_THROWS_AS(make_instance(0, 0), validation_error);
  CHECK_THROWS_AS(make_instance(4, 4), validation_error);
  CHECK_THROWS_AS(make_instance(4, -1), validation_error);
  try {
    make_instance(1, 0);
  } catch (const validation_error& e) {
    CHECK(e.constraint() == "n >= 2");
  }
}

TEST_CASE("coefficient derivation and ordering constraints") {
  const ProblemInstance inst = make_instance(4, 0);

  const CoefficientSet farhi = farhi_preset(inst);
  CHECK(farhi.a4 == 0.0);
  CHECK(farhi.b4 == 0.0);
  CHECK(gap_parameters(farhi).a == 1.0);
  CHECK(gap_parameters(farhi).b == 1.0);
  CHECK(farhi.warnings.empty());

  const CoefficientSet c = make_coefficients(0, 0, 2, 0, 2, 0, inst);
  CHECK(c.a4 == -1.0);
  CHECK(c.b4 == -1.0);

  CHECK_THROWS_AS(make_coefficients(0, 1, 1, 0, 1, 0, inst), validation_error);
  CHECK_THROWS_AS(make_coefficients(0, 0, 1, 0, 1, 1, inst), validation_error);
  try {
    make_coefficients(0, 1, 1, 0, 1, 0, inst);
  } catch (const validation_error& e) {
    CHECK(e.constraint() == "a3 > a2");
  }
  try {
    make_coefficients(0, 0, 1, 0, 0, 0, inst);
  } catch (const validation_error& e) {
    CHECK(e.constraint() == "b2 > b3");
  }
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(make_coefficients(inf, 0, 1, 0, 1, 0, inst),
                  validation_error);
  CHECK_THROWS_AS(make_coefficients(0, NAN, 1, 0, 1, 0, inst),
                  validation_error);
}

TEST_CASE("ground energies and negativity warnings") {
  const ProblemInstance inst = make_instance(4, 0);
  const auto [ei, ef] = ground_energies(farhi_preset(inst), inst);
  CHECK(ei == 0.0);
  CHECK(ef == 0.0);

  const CoefficientSet c = make_coefficients(0, 0, 2, 0, 2, 0, inst);
  const auto [ei2, ef2] = ground_energies(c, inst);
  CHECK(ei2 == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(ef2 == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(c.warnings.size() == 2);
  CHECK(c.warnings[0].find("negative") != std::string::npos);

  const ProblemInstance inst16 = make_instance(16, 3);
  const auto [gi, gf] = ground_energies(scaled_preset(0.5, inst16), inst16);
  CHECK(gi == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(gf == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("scaled preset hits the requested growth") {
  const ProblemInstance inst16 = make_instance(16, 0);
  const GapParameters g16 = gap_parameters(scaled_preset(0.5, inst16));
  CHECK(g16.a == 4.0);
  CHECK(g16.b == 4.0);

  const GapParameters g0 = gap_parameters(scaled_preset(0.0, inst16));
  CHECK(g0.a == 1.0);
  CHECK(g0.b == 1.0);

  const ProblemInstance inst64 = make_instance(64, 0);
  const GapParameters g1 = gap_parameters(scaled_preset(1.0, inst64));
  CHECK(g1.a == 64.0);
  CHECK(g1.b == 64.0);

  CHECK_THROWS_AS(scaled_preset(NAN, inst16), validation_error);
}

TEST_CASE("presets resolve by name") {
  const ProblemInstance inst = make_instance(16, 2);
  const CoefficientSet byname = preset_by_name("farhi", inst);
  const CoefficientSet direct = farhi_preset(inst);
  CHECK(byname.a1 == direct.a1);
  CHECK(byname.a2 == direct.a2);
  CHECK(byname.a3 == direct.a3);
  CHECK(byname.b2 == direct.b2);

  const CoefficientSet sc = preset_by_name("scaled:0.25", inst);
  CHECK(sc.a3 == std::pow(16.0, 0.25));
  CHECK(sc.b2 == sc.a3);

  CHECK_THROWS_AS(preset_by_name("grover", inst), validation_error);
  CHECK_THROWS_AS(preset_by_name("scaled:abc", inst), validation_error);
  CHECK_THROWS_AS(preset_by_name("scaled:", inst), validation_error);
}

TEST_CASE("endpoint states are exact eigenvectors of the dense forms") {
  std::mt19937_64 rng(2024);
  for (std::int64_t n : {2, 7, 16, 37}) {
    const ProblemInstance inst = make_instance(n, n / 2);
    for (int trial = 0; trial < 5; ++trial) {
      const auto v = random_coefficient_values(rng);
      const CoefficientSet c =
          make_coefficients(v[0], v[1], v[2], v[3], v[4], v[5], inst);
      const auto [ei, ef] = ground_energies(c, inst);

      const auto ni = static_cast<Eigen::Index>(n);
      const Eigen::VectorXd psi =
          Eigen::VectorXd::Constant(ni, inst.overlap_x);
      Eigen::VectorXd alpha = Eigen::VectorXd::Zero(ni);
      alpha(static_cast<Eigen::Index>(inst.marked_index)) = 1.0;

      const Eigen::MatrixXd hi = dense_hamiltonian(c, inst, 0.0);
      const Eigen::MatrixXd hf = dense_hamiltonian(c, inst, 1.0);
      CHECK((hi * psi - ei * psi).norm() <= 1e-10);
      CHECK((hf * alpha - ef * alpha).norm() <= 1e-10);
    }
  }
}

TEST_CASE("farhi preset reproduces the projector Hamiltonians entrywise") {
  const std::int64_t n = 6;
  const std::int64_t marked = 2;
  const ProblemInstance inst = make_instance(n, marked);
  const CoefficientSet c = farhi_preset(inst);
  const Eigen::MatrixXd hi = dense_hamiltonian(c, inst, 0.0);
  const Eigen::MatrixXd hf = dense_hamiltonian(c, inst, 1.0);
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j < n; ++j) {
      const double eye = i == j ? 1.0 : 0.0;
      const double want_i = eye - 1.0 / static_cast<double>(n);
      const double want_f = eye - (i == marked && j == marked ? 1.0 : 0.0);
      CHECK(std::abs(hi(i, j) - want_i) <= 1e-15);
      CHECK(std::abs(hf(i, j) - want_f) <= 1e-15);
    }
  }
}

TEST_CASE("random coefficient draws are valid, bounded and reproducible") {
  std::mt19937_64 rng(7);
  std::mt19937_64 rng_again(7);
  for (int i = 0; i < 1000; ++i) {
    const auto v = random_coefficient_values(rng);
    const auto w = random_coefficient_values(rng_again);
    CHECK(v == w);
    CHECK(v[2] > v[1]);  // a3 > a2
    CHECK(v[4] > v[5]);  // b2 > b3
    for (double entry : v) {
      CHECK(entry >= -5.0);
      CHECK(entry <= 5.0);
    }
  }
}

TEST_CASE("config text round-trips bit-exactly") {
  const ProblemInstance inst = make_instance(4, 1);
  const CoefficientSet c = farhi_preset(inst);
  const std::string text = write_config(inst, c);
  const auto [inst2, c2] = parse_config(text);
  CHECK(inst2.n == inst.n);
  CHECK(inst2.marked_index == inst.marked_index);
  CHECK(inst2.overlap_x == inst.overlap_x);
  CHECK(c2.a1 == c.a1);
  CHECK(c2.a2 == c.a2);
  CHECK(c2.a3 == c.a3);
  CHECK(c2.a4 == c.a4);
  CHECK(c2.b1 == c.b1);
  CHECK(c2.b2 == c.b2);
  CHECK(c2.b3 == c.b3);
  CHECK(c2.b4 == c.b4);

  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const auto v = random_coefficient_values(rng);
    const ProblemInstance ri = make_instance(64 + i, i);
    const CoefficientSet rc =
        make_coefficients(v[0], v[1], v[2], v[3], v[4], v[5], ri);
    const auto [pi, pc] = parse_config(write_config(ri, rc));
    CHECK(pi.n == ri.n);
    CHECK(pc.a1 == rc.a1);
    CHECK(pc.a2 == rc.a2);
    CHECK(pc.a3 == rc.a3);
    CHECK(pc.a4 == rc.a4);
    CHECK(pc.b1 == rc.b1);
    CHECK(pc.b2 == rc.b2);
    CHECK(pc.b3 == rc.b3);
    CHECK(pc.b4 == rc.b4);
  }
}

TEST_CASE("config parser accepts comments and rejects malformed input") {
  const char* good =
      "# comment line\n"
      "\n"
      "n = 4\n"
      "marked_index=0\n"
      "a1=1\na2=-1\na3=0\nb1=1\nb2=0\nb3=-1\n";
  const auto [inst, c] = parse_config(good);
  CHECK(inst.n == 4);
  CHECK(c.a2 == -1.0);

  CHECK_THROWS_AS(parse_config("n=4\n"), validation_error);  // missing keys
  CHECK_THROWS_AS(
      parse_config("n=4\nn=8\nmarked_index=0\na1=1\na2=-1\na3=0\nb1=1\nb2=0\n"
                   "b3=-1\n"),
      validation_error);  // duplicate
  CHECK_THROWS_AS(
      parse_config("n=4\nmarked_index=0\na1=1\na2=-1\na3=0\nb1=1\nb2=0\n"
                   "b3=-1\nzz=3\n"),
      validation_error);  // unknown key
  CHECK_THROWS_AS(
      parse_config("n=four\nmarked_index=0\na1=1\na2=-1\na3=0\nb1=1\nb2=0\n"
                   "b3=-1\n"),
      validation_error);  // bad number
  CHECK_THROWS_AS(parse_config("n 4\n"), validation_error);  // no equals
  CHECK_THROWS_AS(
      parse_config("n=4\nmarked_index=0\na1=1\na2=2\na3=0\nb1=1\nb2=0\n"
                   "b3=-1\n"),
      validation_error);  // violates a3 > a2
}
