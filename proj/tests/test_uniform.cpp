#include <doctest.h>

#include <cmath>

#include "hdef/uniform.hpp"
#include "oracles.hpp"

using namespace hdef;

namespace {

// Counts odd primes <= X with some n in [2, N] a non-residue.
std::uint64_t oracle_union_count(int N, std::uint64_t X) {
  std::uint64_t c = 0;
  for (auto p : oracle::odd_primes(X)) {
    for (int n = 2; n <= N; ++n) {
      if (oracle::jacobi(n, p) == -1) {
        ++c;
        break;
      }
    }
  }
  return c;
}

}  // namespace

TEST_CASE("odd primes") {
  CHECK(odd_primes_up_to(2).empty());
  CHECK(odd_primes_up_to(20) == std::vector<std::uint32_t>{3, 5, 7, 11, 13, 17, 19});
  for (std::uint64_t X : {3u, 100u, 4999u, 5000u, 100000u}) CHECK(odd_primes_up_to(X) == oracle::odd_primes(X));
  CHECK_THROWS(odd_primes_up_to(kMaxSieveBound + 1));
}

TEST_CASE("P_n membership") {
  // 19 = 3 mod 8, so 2 is a non-residue there as well
  CHECK(build_Pn(2, 20).primes == std::vector<std::uint32_t>{3, 5, 11, 13, 19});
  CHECK(build_Pn(4, 100).primes.empty());
  CHECK(build_Pn(9, 1000).primes.empty());
  CHECK(build_Pn(2, 2).primes.empty());
  for (std::int64_t n = 2; n <= 12; ++n) {
    std::vector<std::uint32_t> expect;
    for (auto p : oracle::odd_primes(3000)) {
      if (oracle::jacobi(n, p) == -1) expect.push_back(p);
    }
    CHECK(build_Pn(n, 3000).primes == expect);
  }
}

TEST_CASE("union density at 10^6") {
  // frozen from the prime-count oracle (oracle_union_count)
  const std::uint64_t odd = 78497;
  const std::pair<int, std::uint64_t> frozen[] = {{2, 39276}, {3, 58920}, {7, 73666}};
  const double expect[] = {0.5, 0.75, 0.9375};
  for (int i = 0; i < 3; ++i) {
    const auto [N, covered] = frozen[i];
    const DensityReport r = union_density(N, 1'000'000);
    CHECK(r.odd_primes == odd);
    CHECK(r.covered == covered);
    CHECK(std::fabs(r.density - expect[i]) < 0.01);
    CHECK(r.marginal.size() == static_cast<std::size_t>(N - 1));
  }
  CHECK(oracle_union_count(7, 1'000'000) == 73666);
}

TEST_CASE("union density agrees with the oracle and the serial kernel") {
  for (int N : {2, 3, 4, 5, 9}) {
    for (std::uint64_t X : {10u, 1000u, 50000u}) {
      const DensityReport a = union_density(N, X, 0.2);
      const DensityReport b = serial::union_density(N, X, 0.2);
      CHECK(a.covered == oracle_union_count(N, X));
      CHECK(a.covered == b.covered);
      CHECK(a.odd_primes == b.odd_primes);
      CHECK(a.marginal == b.marginal);
      CHECK(a.achieved == (a.density > 0.8));
      CHECK(a.achieved == b.achieved);
    }
  }
}

TEST_CASE("marginal densities") {
  const DensityReport r = union_density(5, 200000);
  REQUIRE(r.marginal.size() == 4);
  CHECK(std::fabs(r.marginal[0] - 0.5) < 0.01);  // n = 2
  CHECK(std::fabs(r.marginal[1] - 0.5) < 0.01);  // n = 3
  CHECK(r.marginal[2] == 0.0);                   // n = 4 is a square
  CHECK(std::fabs(r.marginal[3] - 0.5) < 0.01);  // n = 5
}

TEST_CASE("choose_N") {
  CHECK(choose_N(0.6, 1'000'000).N == 2);
  CHECK(choose_N(0.3, 1'000'000).N == 3);
  const DensityReport r = choose_N(0.1, 1'000'000);
  CHECK(r.N == 7);
  CHECK(r.achieved);
  CHECK(std::fabs(r.density - 0.9375) < 0.01);
  CHECK(union_density(6, 1'000'000).density <= 0.9);
  const DensityReport small = choose_N(0.1, 100);
  CHECK(small.achieved == (small.density > 0.9));
}

TEST_CASE("build_M") {
  CHECK(build_M(2, 2) == std::vector<int>{1, 3, 5});
  CHECK(build_M(3, 2) == std::vector<int>{1, 3});
  CHECK(build_M(13, 2) == std::vector<int>{1});
  CHECK(build_M(2, 3) == std::vector<int>{1, 2, 4, 5, 7, 8});
  CHECK(build_M(83, 2).empty());
}

TEST_CASE("in_union") {
  CHECK(in_union(3, 2));
  CHECK_FALSE(in_union(7, 2));
  CHECK(in_union(7, 3));
  CHECK_FALSE(in_union(311, 7));
  CHECK(in_union(83, 7));
  for (auto p : oracle::odd_primes(2000)) {
    bool expect = false;
    for (int n = 2; n <= 7; ++n) expect = expect || oracle::jacobi(n, p) == -1;
    CHECK(in_union(p, 7) == expect);
  }
}
