#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ffmu/layer.hpp"
#include "ffmu/numeric.hpp"
#include "ffmu/prime_subset.hpp"

namespace ffmu {

enum class SeriesWeight { kMu, kMuOmega };

struct Restriction {
  enum class Kind { kNone, kDS, kDelta1Eq, kDelta1Ge };
  Kind kind = Kind::kNone;
  /// Degree for the delta_1 restrictions.
  unsigned n = 0;

  static Restriction none() { return {}; }
  static Restriction d_s() { return {Kind::kDS, 0}; }
  static Restriction delta1_eq(unsigned n) { return {Kind::kDelta1Eq, n}; }
  /// Every prime factor has degree >= n (the constant 1 qualifies vacuously).
  static Restriction delta1_ge(unsigned n) { return {Kind::kDelta1Ge, n}; }
};

const char* to_string(SeriesWeight w);
std::string to_string(const Restriction& r);

/// Exact partial sums of sum' weight(A) / q^{deg A} over a restricted set of
/// monics, for every cutoff x up to the requested one.
struct SeriesLedger {
  std::uint32_t q = 0;
  std::string subset;
  SeriesWeight weight = SeriesWeight::kMu;
  Restriction restriction;
  /// Whether A = 1 (degree 0) is part of the sum.
  bool include_constant = false;
  /// layer_sums[d] = sum of weight(A) over admitted A of degree d.
  std::vector<std::int64_t> layer_sums;
  /// partials[x] = sum_{d <= x} layer_sums[d] / q^d, for x = 1..x_max.
  std::map<unsigned, Rational> partials;

  unsigned x_max() const { return partials.empty() ? 0 : partials.rbegin()->first; }
  const Rational& at(unsigned x) const;
  /// The degree-x layer as the exact rational layer_sums[x] / q^x.
  Rational layer(unsigned x) const;
};

/// `include_constant` defaults to true for the mu weight and false for mu*Omega
/// (where A = 1 contributes 0 either way).
SeriesLedger partial_sum(SeriesWeight weight, const Restriction& restriction,
                         const PrimeSubset& subset, const PrimeTable& table, unsigned x,
                         const RunOptions& options = {},
                         std::optional<bool> include_constant = std::nullopt);

/// Monics of degree x all of whose prime factors share one degree.
BigInt w_count_enum(const PrimeTable& table, unsigned x, const RunOptions& options = {});
/// sum_{d | x} C(pi(d) + x/d - 1, x/d) from exact prime counts.
BigInt w_count_formula(std::uint64_t q, unsigned x);

struct IdentityCheck {
  Rational lhs;
  Rational rhs;
  bool equal = false;
};

/// sum'_{1 <= deg A <= x} mu(A) Omega(A) / q^{deg A} against -W(x) / q^x.
IdentityCheck finite_landau2_identity(const PrimeTable& table, unsigned x,
                                      const RunOptions& options = {});

enum class CountMethod { kEnumeration, kRecurrence };
const char* to_string(CountMethod m);

struct SmoothCount {
  unsigned n;
  unsigned m;
  BigInt value;
  CountMethod method;
};

/// Psi_1(n, m): degree-n monics whose prime factors all have degree <= m.
BigInt psi1_recurrence(std::uint64_t q, unsigned n, unsigned m);
/// Psi_2(n, m): degree-n monics whose second-largest distinct prime degree is <= m.
BigInt psi2_recurrence(std::uint64_t q, unsigned n, unsigned m);

struct SmoothTable {
  unsigned n;
  /// psi1[m], psi2[m] for m = 0..n.
  std::vector<BigInt> psi1;
  std::vector<BigInt> psi2;
};
SmoothTable smooth_table_enum(const PrimeTable& table, unsigned n, const RunOptions& options = {});
SmoothTable smooth_table_recurrence(std::uint64_t q, unsigned n);

SmoothCount psi1(const PrimeTable& table, unsigned n, unsigned m, CountMethod method,
                 const RunOptions& options = {});
SmoothCount psi2(const PrimeTable& table, unsigned n, unsigned m, CountMethod method,
                 const RunOptions& options = {});

/// Advisory comparison of Psi_2(n, m) with q^n / n^eps + q^n m / n and of
/// Psi_1(n, m) with q^n m e^{-n/m}. Implicit constants are unknown, so
/// nothing here passes or fails.
struct Psi2BoundReport {
  unsigned n;
  unsigned m;
  double epsilon;
  BigInt psi1;
  BigInt psi2;
  double psi2_bound;
  double psi2_ratio;
  double psi1_bound;
  double psi1_ratio;
};
Psi2BoundReport psi2_bound_diagnostic(std::uint64_t q, unsigned n, unsigned m,
                                      double epsilon = 0.5);

/// Degree-n monics with at least two distinct primes of the top degree.
BigInt multi_top_count(const PrimeTable& table, unsigned n, const RunOptions& options = {});

/// sum over degree-n monics of Q_S^(k)(A), for k = 1..k_max (index k-1).
std::vector<BigInt> q_sums(const PrimeTable& table, const PrimeSubset& subset, unsigned n,
                           unsigned k_max, const RunOptions& options = {});
BigInt q_sum(const PrimeTable& table, const PrimeSubset& subset, unsigned k, unsigned n,
             const RunOptions& options = {});

/// sum'_{1 <= deg B <= n, B in D(S)} mu(B) Omega(B) / q^{deg B} against
/// (sum_{deg A = n} Q_S^(2)(A) - Q_S^(1)(A)) / q^n.
IdentityCheck equivalence_identity(const PrimeTable& table, const PrimeSubset& subset, unsigned n,
                                   const RunOptions& options = {});

inline constexpr double kEulerGamma = 0.5772156649015329;

struct MertensReport {
  unsigned n;
  /// prod_{deg P <= n} (1 - q^{-deg P})^{-1}
  Rational product;
  /// n e^gamma
  double reference;
  /// product / reference; NaN for n = 0.
  double ratio;
};
MertensReport mertens(std::uint64_t q, unsigned n);

/// Integer coefficients c_0..c_x of prod_{lo <= d <= x} (1 - u^d)^{pi(d)}
/// truncated at u^x. c_j equals the sum of mu(A) over degree-j monics whose
/// prime factors all have degree in [lo, x].
std::vector<BigInt> euler_tail_layers(std::uint64_t q, unsigned lo, unsigned x);

}  // namespace ffmu
