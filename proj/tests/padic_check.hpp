#pragma once

// Integer-mod-p^N checks of p-adic witnesses, using only digits and
// valuations read off the elements.

#include <stdexcept>
#include <string>

#include "hdef/intpoly.hpp"
#include "hdef/localfield.hpp"
#include "hdef/refute.hpp"
#include "oracles.hpp"

namespace padic_check {

using oracle::i128;

/// Integral p-adic element as an integer mod p^N.
inline i128 to_int(const hdef::LocalElem& x, std::int64_t p, int N) {
  if (x.is_zero()) return 0;
  if (x.valuation() < 0) throw std::logic_error("padic_check::to_int needs an integral element");
  const std::vector<std::uint32_t> d(x.digits().begin(), x.digits().end());
  const i128 m = oracle::ipow(p, N);
  return oracle::mulmod(oracle::from_digits(d, p), oracle::ipow(p, std::min(x.valuation(), N)), m);
}

inline i128 eval(const hdef::IntPoly& f, i128 y, i128 m) {
  i128 r = 0;
  for (int i = f.degree(); i >= 0; --i) r = oracle::mod(oracle::mulmod(r, y, m) + f.coeffs()[i], m);
  return r;
}

/// The eta block with prefix `pre` holds at x mod p^N.
inline bool eta_holds(const hdef::Assignment& w, const std::string& pre, const hdef::IntPoly& f, i128 x,
                      std::int64_t p, int N) {
  const i128 m = oracle::ipow(p, N);
  auto mul = [&](i128 a, i128 b) { return oracle::mulmod(a, b, m); };
  auto get = [&](const std::string& n) { return to_int(w.at(pre + n), p, N); };
  const i128 u = get("u"), t = get("t");
  if (oracle::mod(u + t - x, m) != 0) return false;
  const i128 y = get("phi.y"), z = get("phi.z"), y1 = get("phi.y1"), z1 = get("phi.z1");
  if (oracle::mod(y1 - z1 - u, m) != 0) return false;
  if (oracle::mod(mul(y1, eval(f, y, m)) - 1, m) != 0) return false;
  if (oracle::mod(mul(z1, eval(f, z, m)) - 1, m) != 0) return false;
  if (t == 0) return true;
  const i128 py = get("psi.y"), pz = get("psi.z"), py1 = get("psi.y1"), pz1 = get("psi.z1");
  return oracle::mod(mul(py1, pz1) - t, m) == 0 && oracle::mod(mul(py1, eval(f, py, m)) - 1, m) == 0 &&
         oracle::mod(mul(pz1, eval(f, pz, m)) - 1, m) == 0;
}

}  // namespace padic_check
