#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "hdef/formula.hpp"
#include "hdef/report.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

fs::path scratch() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / ("hdef_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run run(const std::string& args) {
  const fs::path out = scratch() / "stdout", err = scratch() / "stderr";
  const std::string cmd =
      std::string("'") + HDEF_CLI + "' " + args + " >'" + out.string() + "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run("synth finite --q 2").code == 0);
  CHECK(run("verify finite --q 2 --V 2 --N 4").code == 0);
  CHECK(run("verify eta_f --f X^2-2 --kind padic --p 5 --N 4 --V 1").code == 1);
  CHECK(run("density --N 2 --X 1000").code == 1);
  CHECK(run("density --X 100000").code == 0);
  CHECK(run("pac-check --q 7 --f X^3+2").code == 1);
  CHECK(run("pac-check --q 83").code == 0);
  CHECK(run("counterexample --d 2 --q-lo 3 --q-hi 20").code == 0);

  const Run bad = run("verify finite --q 6");
  CHECK(bad.code == 2);
  CHECK(bad.err.find("6") != std::string::npos);
  CHECK(run("synth nonsense").code == 2);
  CHECK(run("synth eta_f").code == 2);  // missing --f
  CHECK(run("density --epsilon 1.5").code == 2);
  CHECK(run("bogus").code == 2);
  CHECK(run("verify uniform --p 4").code == 2);
}

TEST_CASE("uniform verification regimes") {
  CHECK(run("verify uniform --p 83 --N 4 --V 1 --lead-cap 4 --no-refute").code == 0);
  CHECK(run("verify uniform --p 311 --N 4 --V 1 --lead-cap 4").code == 0);
  const Run partial = run("verify uniform --p 7 --N 4 --V 1 --lead-cap 4 --no-refute");
  CHECK(partial.code == 1);
  CHECK(partial.out.find("EXPECTED-PARTIAL") != std::string::npos);
}

TEST_CASE("--json keeps stdout machine-readable") {
  const Run r = run("density --N 3 --X 1000 --json");
  const auto j = hdef::Json::parse(r.out);
  CHECK(j["kind"] == "density");
  CHECK(j["N"] == 3);
  CHECK(j["covered"] == oracle::odd_primes(1000).size() - [] {
          std::size_t c = 0;
          for (auto p : oracle::odd_primes(1000)) c += oracle::jacobi(2, p) == 1 && oracle::jacobi(3, p) == 1;
          return c;
        }());
  CHECK(r.err.find("N = 3") != std::string::npos);
}

TEST_CASE("--out files are byte-identical across runs") {
  const fs::path a = scratch() / "a.json", b = scratch() / "b.json", c = scratch() / "c.json";
  const std::string args = "verify finite --q 3 --V 2 --N 4 --tails 2 --seed 9 --budget 500";
  REQUIRE(run(args + " --out '" + a.string() + "'").code == 0);
  REQUIRE(run(args + " --out '" + b.string() + "'").code == 0);
  REQUIRE(run(args + " --serial --out '" + c.string() + "'").code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a) == slurp(c));
  CHECK_FALSE(slurp(a).empty());
}

TEST_CASE("synth") {
  const Run u = run("synth uniformk --p 2 --m 2 --json");
  const auto j = hdef::Json::parse(u.out);
  CHECK(j["kind"] == "synth");
  CHECK(j["existential_positive"] == true);
  const hdef::Formula f = hdef::parse_formula(j["text"].get<std::string>());
  CHECK(f.children().size() == 4);
  CHECK(u.err == hdef::print(f) + "\n");

  const Run ps = run("synth psi_k --p 2 --k 1");
  CHECK(ps.out == "(= (sub (mul x x) x) 0)\n");
  CHECK(run("synth uniform --N 3").out.rfind("(and ", 0) == 0);
}

TEST_CASE("golden outputs") {
  CHECK(testsupport::check_golden("synth_finite_q2.txt", run("synth finite --q 2").out));
  CHECK(testsupport::check_golden("verify_finite_q2.json", run("verify finite --q 2 --V 2 --N 4 --json").out));
  CHECK(testsupport::check_golden("density_N2_X1000.json", run("density --N 2 --X 1000 --json").out));
  CHECK(testsupport::check_golden("counterexample_d2.json",
                                  run("counterexample --d 2 --q-lo 3 --q-hi 81 --json").out));
}
