#pragma once

// Prime families P_n = {odd p : (n/p) = -1}, their union densities over
// primes <= X, and the index sets M of the uniform-in-p constructions.

#include <cstdint>
#include <vector>

namespace hdef {

inline constexpr std::uint64_t kMaxSieveBound = 10'000'000;
inline constexpr int kMaxUnionN = 64;

/// Odd primes <= X, ascending (sieve of Eratosthenes).
std::vector<std::uint32_t> odd_primes_up_to(std::uint64_t X);

struct PrimeFamily {
  std::int64_t n = 0;
  std::uint64_t X = 0;
  std::vector<std::uint32_t> primes;
};

PrimeFamily build_Pn(std::int64_t n, std::uint64_t X);

struct DensityReport {
  int N = 0;
  std::uint64_t X = 0;
  std::uint64_t odd_primes = 0;
  std::uint64_t covered = 0;
  double density = 0.0;
  std::vector<double> marginal;  // marginal[i] = density of P_{i+2}
  double epsilon = 0.0;
  bool achieved = false;         // density > 1 - epsilon
};

/// Natural density of P_2 u ... u P_N among odd primes <= X. OpenMP over
/// primes.
DensityReport union_density(int N, std::uint64_t X, double epsilon = 0.0);

/// Smallest N <= kMaxUnionN with union density > 1 - epsilon; the report of
/// the last N tried is returned (achieved = false if the cap was hit).
DensityReport choose_N(double epsilon, std::uint64_t X);

/// {k >= 1 : m does not divide k and p^k <= c(m)}
std::vector<int> build_M(std::uint32_t p, int m);

/// p in P_2 u ... u P_N
bool in_union(std::uint32_t p, int N);

namespace serial {
DensityReport union_density(int N, std::uint64_t X, double epsilon = 0.0);
}  // namespace serial

}  // namespace hdef
