#include "wsp/real.hpp"

#include <array>
#include <vector>

#include <quadmath.h>

namespace wsp {

namespace {

// e(t) = e(k/kTable) e(delta) with |delta| <= 1/(2 kTable): a table lookup
// and short Taylor series, about twice as fast as sincosq.
constexpr int kTable = 4096;

struct PhaseTable {
  std::vector<__float128> cos_k, sin_k;
  std::array<__float128, 5> sin_c; // x^3/3! .. x^11/11! signs included
  std::array<__float128, 6> cos_c; // x^2/2! .. x^12/12!
  __float128 two_pi;

  PhaseTable() : cos_k(kTable + 1), sin_k(kTable + 1) {
    two_pi = 2 * pi().backend().value();
    for (int k = 0; k <= kTable; ++k) {
      const __float128 a = two_pi * (__float128(k - kTable / 2) / kTable);
      sincosq(a, &sin_k[k], &cos_k[k]);
    }
    __float128 fact = 1;
    for (int m = 1; m <= 12; ++m) {
      fact *= m;
      const __float128 term = ((m / 2) % 2 == 1 ? -1 : 1) / fact;
      if (m % 2 == 1 && m >= 3)
        sin_c[static_cast<std::size_t>((m - 3) / 2)] = term;
      if (m % 2 == 0)
        cos_c[static_cast<std::size_t>((m - 2) / 2)] = term;
    }
  }
};

const PhaseTable &table() {
  static const PhaseTable t;
  return t;
}

} // namespace

complex unit_phase(const real &t) {
  const PhaseTable &tab = table();
  const __float128 v = t.backend().value();
  const __float128 frac = v - roundq(v);       // exact, in [-1/2, 1/2]
  const __float128 scaled = frac * kTable;     // exact: power of two
  const __float128 k = roundq(scaled);
  const __float128 delta = (scaled - k) / kTable; // exact
  const __float128 x = tab.two_pi * delta;
  const __float128 x2 = x * x;

  __float128 s = tab.sin_c[4];
  for (int i = 3; i >= 0; --i)
    s = tab.sin_c[static_cast<std::size_t>(i)] + x2 * s;
  s = x + x * x2 * s;
  __float128 c = tab.cos_c[5];
  for (int i = 4; i >= 0; --i)
    c = tab.cos_c[static_cast<std::size_t>(i)] + x2 * c;
  c = 1 + x2 * c;

  const auto idx = static_cast<std::size_t>(static_cast<int>(k) + kTable / 2);
  const __float128 ck = tab.cos_k[idx], sk = tab.sin_k[idx];
  return {real(ck * c - sk * s), real(sk * c + ck * s)};
}

} // namespace wsp
