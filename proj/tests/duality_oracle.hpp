#pragma once

// Duality sums over GF(2)[T] evaluated on actual divisor polynomials,
// using only the bitmask arithmetic of oracle.hpp.

#include <functional>

#include "oracle.hpp"

namespace oracle {

struct Gf2World {
  explicit Gf2World(int max_deg) : irr(irreducibles2(max_deg)) {
    for (std::uint64_t a = 1; a < (std::uint64_t{2} << max_deg); ++a) fac.push_back(factor2(a, irr));
  }
  const std::vector<std::pair<std::uint64_t, unsigned>>& factors(std::uint64_t a) const {
    return fac[a - 1];
  }

  std::vector<std::vector<std::uint64_t>> irr;
  std::vector<std::vector<std::pair<std::uint64_t, unsigned>>> fac;
};

using PrimePred = std::function<bool(std::uint64_t prime)>;
using IntFn = std::function<std::int64_t(std::int64_t)>;

struct DivisorInfo {
  std::uint64_t mask;
  int mu;
  unsigned omega;
  unsigned delta1;
  bool min_unique;
  std::uint64_t min_prime;
};

/// Every monic divisor of `a` (including 1), found by trial division.
inline std::vector<DivisorInfo> divisors(const Gf2World& w, std::uint64_t a) {
  std::vector<DivisorInfo> out;
  const int d = deg2(a);
  for (std::uint64_t b = 1; b < (std::uint64_t{2} << d); ++b) {
    if (!divides2(b, a)) continue;
    const auto& f = w.factors(b);
    const auto st = stats(f, [](std::uint64_t p) { return deg2(p); });
    DivisorInfo info{b, st.mu, static_cast<unsigned>(st.degrees.size()), 0, false, 0};
    if (!f.empty()) {
      info.delta1 = st.degrees.front();
      unsigned at_min = 0;
      for (const auto& [p, m] : f) {
        if (static_cast<unsigned>(deg2(p)) == info.delta1) {
          ++at_min;
          info.min_prime = p;
        }
      }
      info.min_unique = at_min == 1;
    }
    out.push_back(info);
  }
  return out;
}

/// sum over B | A, B in D(S), of mu(B) C(Omega(B)-1, k-1) f(delta_1(B)).
inline std::int64_t duality_lhs(const std::vector<DivisorInfo>& divs, const PrimePred& in_s,
                                const IntFn& f, unsigned k) {
  std::int64_t total = 0;
  for (const auto& b : divs) {
    if (b.mask == 1 || b.mu == 0 || !b.min_unique || !in_s(b.min_prime)) continue;
    total += b.mu * static_cast<std::int64_t>(binom(static_cast<std::int64_t>(b.omega) - 1, k - 1)) *
             f(b.delta1);
  }
  return total;
}

/// (-1)^k Q_S^(k)(A) f(Delta_k(A)).
inline std::int64_t duality_rhs(const Gf2World& w, std::uint64_t a, const PrimePred& in_s,
                                const IntFn& f, unsigned k) {
  const auto& fa = w.factors(a);
  const auto st = stats(fa, [](std::uint64_t p) { return deg2(p); });
  if (k > st.degrees.size()) return 0;
  const unsigned dk = st.degrees[st.degrees.size() - k];
  std::int64_t q = 0;
  for (const auto& [p, m] : fa) {
    if (static_cast<unsigned>(deg2(p)) == dk && in_s(p)) ++q;
  }
  return (k % 2 == 0 ? 1 : -1) * q * f(dk);
}

}  // namespace oracle
