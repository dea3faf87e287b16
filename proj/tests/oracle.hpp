#pragma once

// Brute-force reference arithmetic, deliberately independent of the library:
// GF(2)[T] as bitmasks and GF(p)[T] as little-endian int vectors.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

// ---- GF(2)[T] as bitmasks; bit i is the coefficient of T^i ----

inline int deg2(std::uint64_t a) { return 63 - std::countl_zero(a); }

inline std::uint64_t mul2(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  for (; b != 0; b >>= 1, a <<= 1) {
    if (b & 1) r ^= a;
  }
  return r;
}

inline std::pair<std::uint64_t, std::uint64_t> divrem2(std::uint64_t a, std::uint64_t b) {
  std::uint64_t quo = 0;
  const int db = deg2(b);
  while (a != 0 && deg2(a) >= db) {
    const int s = deg2(a) - db;
    quo |= std::uint64_t{1} << s;
    a ^= b << s;
  }
  return {quo, a};
}

inline bool divides2(std::uint64_t d, std::uint64_t a) { return divrem2(a, d).second == 0; }

/// Irreducibles of degree 1..max_deg, by sieving with smaller irreducibles.
inline std::vector<std::vector<std::uint64_t>> irreducibles2(int max_deg) {
  std::vector<std::vector<std::uint64_t>> out(max_deg + 1);
  for (int d = 1; d <= max_deg; ++d) {
    for (std::uint64_t a = std::uint64_t{1} << d; a < (std::uint64_t{2} << d); ++a) {
      bool irreducible = true;
      for (int e = 1; 2 * e <= d && irreducible; ++e) {
        for (auto p : out[e]) {
          if (divides2(p, a)) {
            irreducible = false;
            break;
          }
        }
      }
      if (irreducible) out[d].push_back(a);
    }
  }
  return out;
}

/// Trial-division factorization: (prime, multiplicity), primes increasing as masks.
inline std::vector<std::pair<std::uint64_t, unsigned>> factor2(
    std::uint64_t a, const std::vector<std::vector<std::uint64_t>>& irr) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (int d = 1; d < static_cast<int>(irr.size()) && deg2(a) > 0; ++d) {
    for (auto p : irr[d]) {
      unsigned m = 0;
      while (deg2(a) >= d && divides2(p, a)) {
        a = divrem2(a, p).first;
        ++m;
      }
      if (m > 0) out.emplace_back(p, m);
    }
  }
  return out;
}

/// Big-endian bit string, as the library writes q = 2 polynomials.
inline std::string str2(std::uint64_t a) {
  std::string s;
  for (int i = deg2(a); i >= 0; --i) s.push_back(((a >> i) & 1) ? '1' : '0');
  return s;
}

// ---- GF(p)[T], p prime, little-endian coefficient vectors ----

using PolyP = std::vector<int>;

inline void trim(PolyP& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline PolyP mulp(const PolyP& a, const PolyP& b, int p) {
  if (a.empty() || b.empty()) return {};
  PolyP r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  trim(r);
  return r;
}

inline int inv_mod(int a, int p) {
  for (int x = 1; x < p; ++x) {
    if (a * x % p == 1) return x;
  }
  return 0;
}

inline std::pair<PolyP, PolyP> divremp(PolyP a, const PolyP& b, int p) {
  trim(a);
  if (a.size() < b.size()) return {{}, a};
  PolyP quo(a.size() - b.size() + 1, 0);
  const int lead_inv = inv_mod(b.back(), p);
  while (!a.empty() && a.size() >= b.size()) {
    const std::size_t s = a.size() - b.size();
    const int c = a.back() * lead_inv % p;
    quo[s] = c;
    for (std::size_t i = 0; i < b.size(); ++i) a[s + i] = ((a[s + i] - c * b[i]) % p + p) % p;
    trim(a);
  }
  trim(quo);
  return {quo, a};
}

/// Monic polynomial of degree d whose lower coefficients are the base-p digits of idx
/// (c_0 least significant). Independent of the library's index convention.
inline PolyP monic_p(int d, std::uint64_t idx, int p) {
  PolyP a(d + 1, 0);
  for (int i = 0; i < d; ++i) {
    a[i] = static_cast<int>(idx % p);
    idx /= p;
  }
  a[d] = 1;
  return a;
}

inline std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

inline std::vector<std::vector<PolyP>> irreduciblesp(int max_deg, int p) {
  std::vector<std::vector<PolyP>> out(max_deg + 1);
  for (int d = 1; d <= max_deg; ++d) {
    for (std::uint64_t idx = 0; idx < ipow(p, d); ++idx) {
      const PolyP a = monic_p(d, idx, p);
      bool irreducible = true;
      for (int e = 1; 2 * e <= d && irreducible; ++e) {
        for (const auto& q : out[e]) {
          if (divremp(a, q, p).second.empty()) {
            irreducible = false;
            break;
          }
        }
      }
      if (irreducible) out[d].push_back(a);
    }
  }
  return out;
}

inline std::vector<std::pair<PolyP, unsigned>> factorp(PolyP a,
                                                      const std::vector<std::vector<PolyP>>& irr,
                                                      int p) {
  std::vector<std::pair<PolyP, unsigned>> out;
  for (std::size_t d = 1; d < irr.size() && a.size() > 1; ++d) {
    for (const auto& q : irr[d]) {
      unsigned m = 0;
      while (a.size() > d) {
        auto [quo, rem] = divremp(a, q, p);
        if (!rem.empty()) break;
        a = quo;
        ++m;
      }
      if (m > 0) out.emplace_back(q, m);
    }
  }
  return out;
}

/// Big-endian digits, comma separated when p > 10.
inline std::string strp(const PolyP& a, int p) {
  std::string s;
  for (auto it = a.rbegin(); it != a.rend(); ++it) {
    if (!s.empty() && p > 10) s.push_back(',');
    s += std::to_string(*it);
  }
  return s;
}

// ---- arithmetic functions from a factorization given as (degree, multiplicity) ----

struct Stats {
  int mu;
  std::vector<unsigned> degrees;  // distinct, increasing
};

template <class Factors, class DegreeOf>
Stats stats(const Factors& f, DegreeOf degree_of) {
  Stats s{1, {}};
  for (const auto& [prime, mult] : f) {
    if (mult > 1) s.mu = 0;
    if (s.mu != 0) s.mu = -s.mu;
    s.degrees.push_back(static_cast<unsigned>(degree_of(prime)));
  }
  std::sort(s.degrees.begin(), s.degrees.end());
  s.degrees.erase(std::unique(s.degrees.begin(), s.degrees.end()), s.degrees.end());
  return s;
}

inline std::uint64_t binom(std::int64_t m, std::int64_t j) {
  if (j < 0 || m < 0 || j > m) return 0;
  std::uint64_t r = 1;
  for (std::int64_t i = 1; i <= j; ++i) r = r * (m - j + i) / i;
  return r;
}

inline std::int64_t divisor_count_formula(std::uint64_t q, unsigned n) {
  // Moebius inversion on integers, computed here without the library.
  auto mu = [](unsigned d) {
    int r = 1;
    for (unsigned p = 2; p * p <= d; ++p) {
      if (d % p == 0) {
        d /= p;
        if (d % p == 0) return 0;
        r = -r;
      }
    }
    if (d > 1) r = -r;
    return r;
  };
  std::int64_t total = 0;
  for (unsigned d = 1; d <= n; ++d) {
    if (n % d == 0) total += mu(d) * static_cast<std::int64_t>(ipow(q, static_cast<int>(n / d)));
  }
  return total / n;
}

}  // namespace oracle
