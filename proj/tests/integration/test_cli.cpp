// SPDX-License-Identifier: Apache-2.0
//
// Runs the nilbridge binary end to end in a scratch directory.
#include <cstdlib>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include "doctest.h"

#include "../oracles.hpp"
#include "nilbridge/bridging.hpp"
#include "nilbridge/fixtures.hpp"
#include "nilbridge/io.hpp"

using namespace nilbridge;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path& scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "nilbridge_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string at(const std::string& name) { return (scratch() / name).string(); }

int run(const std::string& args) {
  const std::string cmd = "cd '" + scratch().string() + "' && '" NILBRIDGE_CLI "' " + args +
                          " >last.out 2>last.err";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& name) { return io::read_text_file(at(name)); }

/// Coefficients <f, g_j> by direct inner products, minus the erased ones.
std::string coefficient_csv(const DualFramePair& pair, const Vector& f,
                            const std::vector<std::size_t>& erased_one_based) {
  std::string out = "index,re,im\n";
  for (std::size_t j = 0; j < pair.size(); ++j) {
    bool erased = false;
    for (std::size_t e : erased_one_based) erased = erased || e == j + 1;
    if (erased) continue;
    const Vector g = pair.analysis().vector(j);
    Complex acc = 0.0;
    for (Eigen::Index i = 0; i < f.size(); ++i) acc += f(i) * std::conj(g(i));
    out += std::to_string(j + 1) + "," + io::format_double(acc.real()) + "," +
           io::format_double(acc.imag()) + "\n";
  }
  return out;
}

}  // namespace

TEST_CASE("gen writes the fixtures exactly") {
  REQUIRE(run("gen paper-2d --out sq") == 0);
  const auto f = io::read_frame(slurp("sq_F.json"));
  const auto g = io::read_frame(slurp("sq_G.json"));
  CHECK(f.role == std::optional<std::string>("synthesis"));
  CHECK(g.role == std::optional<std::string>("analysis"));
  Matrix want(2, 4);
  want << 1, -1, -1, 1, 1, 1, -1, -1;
  CHECK(f.frame.matrix() == want);
  CHECK(g.frame.matrix() == paper_2d_pair().analysis().matrix());

  REQUIRE(run("gen example-3-3 --out ex") == 0);
  Matrix ef(2, 4), eg(2, 4);
  ef << 1, -1, 1, 0, 0, 0, 0, 1;
  eg << 0, 0, 1, 0, 1, 1, 0, 1;
  CHECK(io::read_frame(slurp("ex_F.json")).frame.matrix() == ef);
  CHECK(io::read_frame(slurp("ex_G.json")).frame.matrix() == eg);

  REQUIRE(run("gen mercedes --out mb") == 0);
  CHECK(frame_bounds(io::read_frame(slurp("mb_F.json")).frame).is_parseval);
}

TEST_CASE("gen is deterministic and validates its arguments") {
  REQUIRE(run("--seed 7 gen random-parseval --n 2 --N 5 --out a") == 0);
  REQUIRE(run("gen random-parseval --n 2 --N 5 --out b --seed 7") == 0);
  CHECK(slurp("a_F.json") == slurp("b_F.json"));
  CHECK(slurp("a_G.json") == slurp("b_G.json"));
  REQUIRE(run("--seed 8 gen random-parseval --n 2 --N 5 --out c") == 0);
  CHECK(slurp("a_F.json") != slurp("c_F.json"));
  CHECK(frame_bounds(io::read_frame(slurp("a_F.json")).frame).is_parseval);

  REQUIRE(run("--seed 3 gen random-dual-pair --n 3 --N 6 --complex --out d") == 0);
  const auto f = io::read_frame(slurp("d_F.json"));
  const auto g = io::read_frame(slurp("d_G.json"));
  CHECK(f.field == Field::complex);
  CHECK(verify_dual_pair(f.frame, g.frame).is_dual);

  CHECK(run("gen wavelet --out w") == 2);
  CHECK(run("gen random-parseval --n 3 --N 2 --out w") == 2);
  CHECK(run("gen paper-2d --n 3 --out w") == 2);
  CHECK(run("") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("--help") == 0);
}

TEST_CASE("bridge recovers the erased coefficients") {
  REQUIRE(run("gen paper-2d --out sq") == 0);
  const DualFramePair pair = paper_2d_pair();
  Vector f(2);
  f << 4, 2;
  io::write_text_file(at("known.csv"), coefficient_csv(pair, f, {2, 4}));

  REQUIRE(run("bridge --F sq_F.json --G sq_G.json --coeffs known.csv --erase 2,4 "
              "--bridge 1,3 --solution basic --out rec.csv --json-report rep.json") == 0);
  const auto rec = io::read_coefficients(slurp("rec.csv"), 4);
  REQUIRE(rec.size() == 4);
  CHECK(std::abs(rec.at(1) - Complex(3.0)) < 1e-12);
  CHECK(std::abs(rec.at(3) - Complex(4.0)) < 1e-12);
  const json rep = json::parse(slurp("rep.json"));
  CHECK(rep.at("command") == "bridge");
  CHECK(rep.at("exit_code") == 0);
  CHECK(rep.at("result").at("robust") == true);
  CHECK(rep.at("result").at("bridge") == json::array({1, 3}));
  const auto& v = rep.at("result").at("reconstruction").at("recovered_vector");
  CHECK(std::abs(v[0][0].get<double>() - 4.0) < 1e-12);
  CHECK(std::abs(v[1][0].get<double>() - 2.0) < 1e-12);

  // Erasures inferred from the missing rows, bridge set searched.
  REQUIRE(run("bridge --F sq_F.json --G sq_G.json --coeffs known.csv --out auto.csv") == 0);
  const auto autorec = io::read_coefficients(slurp("auto.csv"), 4);
  CHECK(std::abs(autorec.at(1) - Complex(3.0)) < 1e-12);
  CHECK(std::abs(autorec.at(3) - Complex(4.0)) < 1e-12);
}

TEST_CASE("bridge failure and trivial cases") {
  REQUIRE(run("gen paper-2d --out sq") == 0);
  const DualFramePair pair = paper_2d_pair();
  Vector f(2);
  f << 4, 2;
  io::write_text_file(at("k1.csv"), coefficient_csv(pair, f, {1}));
  CHECK(run("bridge --F sq_F.json --G sq_G.json --coeffs k1.csv --erase 1 --bridge 3 "
            "--out x.csv --json-report bad.json") == 3);
  CHECK(slurp("last.err").find("not robust") != std::string::npos);
  CHECK(slurp("last.err").find("minimal redundancy holds") != std::string::npos);
  const json rep = json::parse(slurp("bad.json"));
  CHECK(rep.at("exit_code") == 3);
  CHECK(rep.at("status") == "error");
  CHECK(run("bridge --F sq_F.json --G sq_G.json --coeffs k1.csv --erase 1 --bridge 2 "
            "--out x.csv") == 0);

  // Erasing three of four analysis vectors in R^2 leaves no spanning set.
  io::write_text_file(at("k3.csv"), coefficient_csv(pair, f, {1, 2, 3}));
  CHECK(run("bridge --F sq_F.json --G sq_G.json --coeffs k3.csv --out x.csv") == 3);
  CHECK(slurp("last.err").find("minimal redundancy fails") != std::string::npos);

  io::write_text_file(at("all.csv"), coefficient_csv(pair, f, {}));
  REQUIRE(run("bridge --F sq_F.json --G sq_G.json --coeffs all.csv --out same.csv") == 0);
  CHECK(slurp("same.csv") == slurp("all.csv"));

  CHECK(run("bridge --F sq_F.json --G sq_G.json --coeffs k1.csv --erase 1 --bridge 1 "
            "--out x.csv") == 2);
  CHECK(run("bridge --F sq_F.json --G sq_G.json --coeffs k1.csv --erase 9 --out x.csv") == 2);
  CHECK(run("bridge --F missing.json --G sq_G.json --coeffs k1.csv --out x.csv") == 2);
  CHECK(run("bridge --F sq_F.json --G sq_F.json --coeffs k1.csv --out x.csv") == 2);
  CHECK(run("bridge --F sq_F.json --G sq_G.json --coeffs k1.csv --out x.csv "
            "--solution fancy") == 2);
}

TEST_CASE("invert") {
  REQUIRE(run("gen paper-2d --out sq") == 0);
  const DualFramePair pair = paper_2d_pair();
  Vector f(2);
  f << 4, 2;
  io::write_text_file(at("k1.csv"), coefficient_csv(pair, f, {1}));
  CHECK(run("invert --F sq_F.json --G sq_G.json --coeffs k1.csv --out x.csv "
            "--json-report inv.json") == 4);
  CHECK(slurp("last.err").find("nilbridge bridge") != std::string::npos);
  CHECK(json::parse(slurp("inv.json")).at("exit_code") == 4);

  REQUIRE(run("--seed 4 gen random-dual-pair --n 3 --N 7 --out r") == 0);
  const auto rf = io::read_frame(slurp("r_F.json")).frame;
  const auto rg = io::read_frame(slurp("r_G.json")).frame;
  const DualFramePair rp(rf, rg);
  Vector x(3);
  x << 1.5, -2.0, 0.25;
  io::write_text_file(at("r.csv"), coefficient_csv(rp, x, {2}));
  REQUIRE(run("invert --F r_F.json --G r_G.json --coeffs r.csv --out r_out.csv") == 0);
  const auto got = io::read_coefficients(slurp("r_out.csv"), 7);
  const Complex want = rg.vector(1).dot(x);
  CHECK(std::abs(got.at(1) - want) < 1e-9);
}

TEST_CASE("sample") {
  REQUIRE(run("--seed 5 sample --scheme trig --n 3 --N 6 --erase 2 --json-report s.json "
              "--scheme-out trig.json") == 0);
  const json rep = json::parse(slurp("s.json"));
  CHECK(rep.at("result").at("max_abs_error").get<double>() < 1e-8);

  // Same recovery from an exported scheme and an explicit samples file.
  const auto scheme = io::scheme_from_json(json::parse(slurp("trig.json")));
  Rng rng = make_rng(9);
  const Vector coords = random_vector(3, rng, Field::complex);
  std::string csv = "index,re,im\n";
  for (std::size_t k = 0; k < 6; ++k) {
    if (k == 1 || k == 4) continue;
    const Complex v = evaluate_trig(scheme, coords, static_cast<double>(k) / 6.0);
    csv += std::to_string(k + 1) + "," + io::format_double(v.real()) + "," +
           io::format_double(v.imag()) + "\n";
  }
  io::write_text_file(at("samples.csv"), csv);
  REQUIRE(run("sample --scheme-in trig.json --samples samples.csv --out filled.csv") == 0);
  const auto filled = io::read_coefficients(slurp("filled.csv"), 6);
  CHECK(std::abs(filled.at(1) - evaluate_trig(scheme, coords, 1.0 / 6.0)) < 1e-8);
  CHECK(std::abs(filled.at(4) - evaluate_trig(scheme, coords, 4.0 / 6.0)) < 1e-8);

  REQUIRE(run("sample --scheme shannon --p 0.5 --K 16 --erase 17 --json-report sh.json") == 0);
  CHECK(json::parse(slurp("sh.json")).at("result").at("max_abs_error").get<double>() < 0.2);

  CHECK(run("sample --scheme trig --n 4 --N 3 --erase 1") == 2);
  CHECK(run("sample --scheme fourier --n 2 --N 3 --erase 1") == 2);
  CHECK(run("sample --scheme trig --n 2 --N 3") == 2);
}

TEST_CASE("audit") {
  REQUIRE(run("gen paper-2d --out sq") == 0);
  REQUIRE(run("audit --F sq_F.json --G sq_G.json --k 1 --json-report a.json") == 0);
  const json rep = json::parse(slurp("a.json"));
  const auto& au = rep.at("result").at("audit");
  CHECK(au.at("skew_spark") == 0);
  CHECK(au.at("complete") == true);
  CHECK(au.at("full") == false);
  bool saw = false;
  for (const auto& f : au.at("failures")) {
    saw = saw || (f.at("erased") == json::array({1}) && f.at("bridge") == json::array({3}));
  }
  CHECK(saw);

  REQUIRE(run("--seed 2 gen random-dual-pair --n 3 --N 8 --out big") == 0);
  CHECK(run("audit --F big_F.json --G big_G.json --k 3 --budget 10 --json-report b.json") == 5);
  const json part = json::parse(slurp("b.json"));
  CHECK(part.at("status") == "partial");
  CHECK(part.at("result").at("audit").at("complete") == false);

  REQUIRE(run("--seed 1 audit --genericity --n 2 --N 4 --k 2 --trials 20 --out g1.csv") == 0);
  REQUIRE(run("--seed 1 audit --genericity --n 2 --N 4 --k 2 --trials 20 --serial --out g2.csv") ==
          0);
  const std::string g1 = slurp("g1.csv");
  CHECK(g1 == slurp("g2.csv"));
  CHECK(g1.rfind("trial,n,N,k,failures,worst_condition\n0,2,4,2,0,", 0) == 0);

  CHECK(run("audit --k 1") == 2);
  CHECK(run("audit --genericity --n 2 --N 4 --k 3") == 2);
}

TEST_CASE("global tolerance flags are validated") {
  REQUIRE(run("gen paper-2d --out sq") == 0);
  CHECK(run("--tol-rank 2 gen paper-2d --out p2") == 2);
  CHECK(run("--tol-residual 0 gen paper-2d --out p2") == 2);
  CHECK(run("--tol-rank 1e-8 --tol-residual 1e-6 audit --F sq_F.json --G sq_G.json --k 1") ==
        0);
}
