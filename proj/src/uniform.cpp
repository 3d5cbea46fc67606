#include "hdef/uniform.hpp"

#include <stdexcept>

#include "hdef/errors.hpp"
#include "hdef/ffield.hpp"
#include "hdef/residue.hpp"

namespace hdef {

namespace {

void guard_bound(std::uint64_t X) {
  if (X > kMaxSieveBound) throw SizeGuardExceeded("prime scan bound limited to 10^7");
}

// (n/p) = -1 for odd prime p not dividing n; no primality check.
bool nonresidue(std::int64_t n, std::uint32_t p) {
  std::int64_t r = n % p;
  if (r < 0) r += p;
  if (r == 0) return false;
  return powmod(static_cast<std::uint64_t>(r), (p - 1) / 2, p) == p - 1;
}

DensityReport finish(int N, std::uint64_t X, double epsilon, std::uint64_t total, std::uint64_t covered,
                     const std::vector<std::uint64_t>& per_n) {
  DensityReport r;
  r.N = N;
  r.X = X;
  r.odd_primes = total;
  r.covered = covered;
  r.density = total == 0 ? 0.0 : static_cast<double>(covered) / static_cast<double>(total);
  for (auto c : per_n) r.marginal.push_back(total == 0 ? 0.0 : static_cast<double>(c) / static_cast<double>(total));
  r.epsilon = epsilon;
  r.achieved = total > 0 && r.density > 1.0 - epsilon;
  return r;
}

void guard_N(int N) {
  if (N < 2) throw std::invalid_argument("N must be >= 2");
  if (N > kMaxUnionN) throw SizeGuardExceeded("N limited to 64");
}

}  // namespace

std::vector<std::uint32_t> odd_primes_up_to(std::uint64_t X) {
  guard_bound(X);
  std::vector<std::uint32_t> out;
  if (X < 3) return out;
  std::vector<char> composite(X + 1, 0);
  for (std::uint64_t i = 3; i * i <= X; i += 2) {
    if (composite[i]) continue;
    for (std::uint64_t j = i * i; j <= X; j += 2 * i) composite[j] = 1;
  }
  for (std::uint64_t i = 3; i <= X; i += 2) {
    if (!composite[i]) out.push_back(static_cast<std::uint32_t>(i));
  }
  return out;
}

PrimeFamily build_Pn(std::int64_t n, std::uint64_t X) {
  if (n < 2) throw std::invalid_argument("n must be >= 2");
  PrimeFamily fam{n, X, {}};
  const auto primes = odd_primes_up_to(X);
  std::vector<char> keep(primes.size(), 0);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(primes.size()); ++i) {
    keep[i] = nonresidue(n, primes[i]) ? 1 : 0;
  }
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (keep[i]) fam.primes.push_back(primes[i]);
  }
  return fam;
}

DensityReport union_density(int N, std::uint64_t X, double epsilon) {
  guard_N(N);
  const auto primes = odd_primes_up_to(X);
  const std::int64_t count = static_cast<std::int64_t>(primes.size());
  std::uint64_t covered = 0;
  std::vector<std::uint64_t> per_n(N - 1, 0);
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(N - 1, 0);
#pragma omp for schedule(static) reduction(+ : covered)
    for (std::int64_t i = 0; i < count; ++i) {
      bool any = false;
      for (int n = 2; n <= N; ++n) {
        if (nonresidue(n, primes[i])) {
          ++local[n - 2];
          any = true;
        }
      }
      if (any) ++covered;
    }
#pragma omp critical
    for (int j = 0; j < N - 1; ++j) per_n[j] += local[j];
  }
  return finish(N, X, epsilon, primes.size(), covered, per_n);
}

DensityReport choose_N(double epsilon, std::uint64_t X) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  const auto primes = odd_primes_up_to(X);
  const std::int64_t count = static_cast<std::int64_t>(primes.size());
  // least[i] = smallest n <= kMaxUnionN with p_i in P_n, or 0
  std::vector<int> least(primes.size(), 0);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    for (int n = 2; n <= kMaxUnionN; ++n) {
      if (nonresidue(n, primes[i])) {
        least[i] = n;
        break;
      }
    }
  }
  std::vector<std::uint64_t> first_at(kMaxUnionN + 1, 0);
  for (int l : least) {
    if (l != 0) ++first_at[l];
  }
  std::uint64_t covered = 0;
  for (int N = 2; N <= kMaxUnionN; ++N) {
    covered += first_at[N];
    const double density = count == 0 ? 0.0 : static_cast<double>(covered) / static_cast<double>(count);
    if (count > 0 && density > 1.0 - epsilon) return union_density(N, X, epsilon);
  }
  return union_density(kMaxUnionN, X, epsilon);
}

std::vector<int> build_M(std::uint32_t p, int m) {
  if (!is_prime(p)) throw std::invalid_argument("p must be prime");
  if (m < 2) throw std::invalid_argument("m must be >= 2");
  const std::int64_t bound = c_bound(m);
  std::vector<int> M;
  std::int64_t pk = p;
  for (int k = 1; pk <= bound; ++k, pk *= p) {
    if (k % m != 0) M.push_back(k);
  }
  return M;
}

bool in_union(std::uint32_t p, int N) {
  for (int n = 2; n <= N; ++n) {
    if (legendre(n, p) == -1) return true;
  }
  return false;
}

namespace serial {

DensityReport union_density(int N, std::uint64_t X, double epsilon) {
  guard_N(N);
  const auto primes = odd_primes_up_to(X);
  std::uint64_t covered = 0;
  std::vector<std::uint64_t> per_n(N - 1, 0);
  for (auto p : primes) {
    bool any = false;
    for (int n = 2; n <= N; ++n) {
      if (legendre(n, p) == -1) {
        ++per_n[n - 2];
        any = true;
      }
    }
    if (any) ++covered;
  }
  return finish(N, X, epsilon, primes.size(), covered, per_n);
}

}  // namespace serial
}  // namespace hdef
