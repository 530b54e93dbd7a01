#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "support/capture.hpp"

using testsupport::count_lines;
using testsupport::run_cli;
using testsupport::slurp;
using testsupport::spit;

TEST_CASE("gap scan with metadata") {
  const auto r = run_cli("gap --preset farhi --n 4 --points 11");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("s,e_ground,e_excited,e_bulk,g2_analytic,g2_numeric,"
                    "bulk_flag\n",
                    0) == 0);
  CHECK(count_lines(r.out) == 12);
  CHECK(r.err.find("A=3\n") != std::string::npos);
  CHECK(r.err.find("B=-3\n") != std::string::npos);
  CHECK(r.err.find("C=1\n") != std::string::npos);
  CHECK(r.err.find("s_star=0.5\n") != std::string::npos);
  CHECK(r.err.find("g2_min=0.25\n") != std::string::npos);
  CHECK(r.err.find("g_min=0.5\n") != std::string::npos);
  CHECK(r.err.find("x=0.5\n") != std::string::npos);
}

TEST_CASE("gap writes csv and meta to files") {
  const auto r = run_cli(
      "gap --preset farhi --n 16 --points 5 --out gap_body.csv "
      "--meta gap_meta.txt");
  CHECK(r.exit_code == 0);
  CHECK(r.out.empty());
  const std::string body = slurp("gap_body.csv");
  CHECK(count_lines(body) == 6);
  const std::string meta = slurp("gap_meta.txt");
  CHECK(meta.find("s_star=0.5\n") != std::string::npos);
  std::remove("gap_body.csv");
  std::remove("gap_meta.txt");
}

TEST_CASE("verify passes and is reproducible") {
  const std::string args = "verify --n-max 16 --trials 5 --seed 11 --threads 1";
  const auto r1 = run_cli(args);
  CHECK(r1.exit_code == 0);
  CHECK(r1.out.rfind("trial,n,max_abs_dev\n", 0) == 0);
  CHECK(count_lines(r1.out) == 11);
  CHECK(r1.err.find("verify passed: 10 rows") != std::string::npos);

  const auto r2 = run_cli("verify --n-max 16 --trials 5 --seed 11 --threads 4");
  CHECK(r2.out == r1.out);
}

TEST_CASE("verify flags a breach with exit code 1") {
  const auto r =
      run_cli("verify --n-max 4 --trials 2 --seed 11 --tolerance 1e-30");
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("verify failed: trial=") != std::string::npos);
  CHECK(r.err.find("coefficients: a1=") != std::string::npos);
}

TEST_CASE("verify rejects bad arguments with exit code 2") {
  CHECK(run_cli("verify --trials 0").exit_code == 2);
  CHECK(run_cli("verify --n-max 3").exit_code == 2);
  CHECK(run_cli("verify --n-max 8192").exit_code == 2);
  CHECK(run_cli("verify --tolerance 0").exit_code == 2);
}

TEST_CASE("schedule prints bounds then the mapping") {
  const auto r = run_cli(
      "schedule --preset farhi --n 4 --epsilon 0.1 --kind local --mode norm "
      "--resolution 10");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("t,s\n", 0) == 0);
  CHECK(count_lines(r.out) == 12);
  CHECK(r.err.find("t_global=34.64101615137754") != std::string::npos);
  CHECK(r.err.find("t_local=20.94395102393195") != std::string::npos);
  CHECK(r.err.find("mode=norm\n") != std::string::npos);
  CHECK(r.err.find("kind=local\n") != std::string::npos);
}

TEST_CASE("evolve reports a successful run at the bound") {
  const auto r = run_cli(
      "evolve --preset farhi --n 16 --kind local --epsilon 0.1 --steps 4000");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("factor,total_time,steps,success_probability,norm_drift\n",
                    0) == 0);
  CHECK(count_lines(r.out) == 2);
  const std::size_t line_start = r.out.find('\n') + 1;
  const std::string row = r.out.substr(line_start);
  CHECK(row.rfind("1,", 0) == 0);
  const std::size_t p_pos = row.find(",4000,") + 6;
  const double p = std::stod(row.substr(p_pos));
  CHECK(p >= 0.9);
}

TEST_CASE("evolve accepts a factor list and coefficient list") {
  const auto r = run_cli(
      "evolve --coeffs a1=0,a2=0,a3=1,b1=0,b2=1,b3=0 --n 4 --kind global "
      "--steps 500 --factors 0.5,2");
  CHECK(r.exit_code == 0);
  CHECK(count_lines(r.out) == 3);
  CHECK(r.out.find("\n0.5,") != std::string::npos);
  CHECK(r.out.find("\n2,") != std::string::npos);
}

TEST_CASE("sweep fits the global linear law") {
  const auto r = run_cli("sweep --gamma 0 --kind global --n 16,64,256,1024");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("n,gamma,kind,mode,epsilon,t_bound\n", 0) == 0);
  CHECK(count_lines(r.out) == 5);
  const std::size_t pos = r.err.find("exponent=");
  REQUIRE(pos != std::string::npos);
  const double exponent = std::stod(r.err.substr(pos + 9));
  CHECK(exponent >= 0.9);
  CHECK(exponent <= 1.1);
  CHECK(r.err.find("num_points=4\n") != std::string::npos);
}

TEST_CASE("sweep local with fourth-root growth") {
  const auto r = run_cli(
      "sweep --kind local --gamma 0.25 --n 16,64,256,1024,4096 --epsilon 0.1");
  CHECK(r.exit_code == 0);
  const std::size_t pos = r.err.find("exponent=");
  REQUIRE(pos != std::string::npos);
  const double exponent = std::stod(r.err.substr(pos + 9));
  CHECK(exponent >= 0.15);
  CHECK(exponent <= 0.35);
}

TEST_CASE("sweep report directory") {
  namespace fs = std::filesystem;
  fs::remove_all("cli_report");
  const auto r = run_cli(
      "sweep --gamma 0 --kind global --n 16,64,256,1024 --report cli_report");
  CHECK(r.exit_code == 0);
  CHECK(r.err.find("wrote cli_report") != std::string::npos);
  CHECK(fs::exists("cli_report/fits.csv"));
  bool has_svg = false;
  for (const auto& entry : fs::directory_iterator("cli_report"))
    if (entry.path().extension() == ".svg") has_svg = true;
  CHECK(has_svg);
  fs::remove_all("cli_report");
}

TEST_CASE("dynamic sweep emits evolution rows") {
  const auto r = run_cli(
      "sweep --dynamic --kind local --n 16,64 --steps 1000 --threads 1");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("n,x,gamma,kind,mode,epsilon,steps,t_bound,"
                    "success_probability,norm_drift\n",
                    0) == 0);
  CHECK(count_lines(r.out) == 3);
  CHECK(run_cli("sweep --dynamic --report somewhere --n 16,64").exit_code == 2);
}

TEST_CASE("sweep rejects malformed size lists") {
  CHECK(run_cli("sweep --n 16,12").exit_code == 2);
  CHECK(run_cli("sweep --n 64,16").exit_code == 2);
  CHECK(run_cli("sweep --gamma -1").exit_code == 2);
}

TEST_CASE("area prints the frozen answer byte for byte") {
  const auto r = run_cli("area --a 3 --grid 101");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "argmin_p=0.5,min_integral=0.25\n");

  const auto shifted = run_cli("area --a 12 --c 1 --grid 11");
  CHECK(shifted.out == "argmin_p=0.5,min_integral=2\n");

  CHECK(run_cli("area --a 0").exit_code == 2);
  CHECK(run_cli("area --a 3 --grid 100").exit_code == 2);
  CHECK(run_cli("area --grid 101").exit_code == 2);
}

TEST_CASE("model source must be unambiguous") {
  CHECK(run_cli("gap --n 4").exit_code == 2);
  CHECK(run_cli("gap --preset farhi").exit_code == 2);
  CHECK(run_cli("gap --preset farhi --coeffs a1=0 --n 4").exit_code == 2);
  CHECK(run_cli("gap --preset nosuch --n 4").exit_code == 2);
  CHECK(run_cli("gap --coeffs a1=0,a2=0,a3=1,b1=0 --n 4").exit_code == 2);
  const auto r = run_cli("gap --coeffs a1=0,a2=1,a3=0,b1=0,b2=1,b3=0 --n 4");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("violated constraint: a3 > a2") != std::string::npos);
}

TEST_CASE("config file round trip") {
  const auto dump = run_cli("gap --preset scaled:0.5 --n 16 --points 3");
  CHECK(dump.exit_code == 0);
  std::string config;
  for (const char* key : {"n=", "marked_index=", "a1=", "a2=", "a3=", "b1=",
                          "b2=", "b3="}) {
    const std::size_t pos = dump.err.find(key);
    REQUIRE(pos != std::string::npos);
    const std::size_t end = dump.err.find('\n', pos);
    config += dump.err.substr(pos, end - pos) + "\n";
  }
  spit("cli_config.txt", config);
  const auto redo = run_cli("gap --config cli_config.txt --points 3");
  CHECK(redo.exit_code == 0);
  CHECK(redo.out == dump.out);
  CHECK(run_cli("gap --config cli_config.txt --n 16").exit_code == 2);
  std::remove("cli_config.txt");

  CHECK(run_cli("gap --config missing_config.txt --points 3").exit_code == 2);
}

TEST_CASE("gap output is thread independent") {
  const auto a = run_cli("gap --preset farhi --n 64 --points 41 --threads 1");
  const auto b = run_cli("gap --preset farhi --n 64 --points 41 --threads 3");
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("usage surface") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("nosuchcommand").exit_code == 2);
  const auto h = run_cli("schedule --help");
  CHECK(h.exit_code == 0);
  CHECK(h.out.find("--epsilon") != std::string::npos);
}
