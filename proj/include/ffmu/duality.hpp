#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ffmu/arith.hpp"
#include "ffmu/numeric.hpp"

namespace ffmu {

/// An effective divisor given only by what the duality identities see: a
/// multiset of labeled primes, each with a degree and an S-membership flag.
/// Sub-profiles (component-wise smaller multiplicities) play the role of
/// divisors B | A.
class DivisorProfile {
 public:
  struct Prime {
    std::string label;
    unsigned degree;
    bool in_s;
    unsigned multiplicity;
  };

  DivisorProfile() = default;
  explicit DivisorProfile(std::vector<Prime> primes);

  static DivisorProfile from_factorization(const Factorization& f, const PrimeMembership& subset);
  /// Parses "d:1,S d:1,S d:2,S": one token per prime, `,S` marks membership
  /// in S (`,N` or nothing marks non-membership), optional `*m` multiplicity.
  static DivisorProfile parse(const std::string& text);

  const std::vector<Prime>& primes() const { return primes_; }
  std::size_t size() const { return primes_.size(); }
  /// Distinct prime degrees, increasing.
  const std::vector<unsigned>& degree_set() const { return degrees_; }
  unsigned omega() const { return static_cast<unsigned>(degrees_.size()); }
  unsigned largest(unsigned k) const;
  unsigned smallest(unsigned k) const;
  /// Number of primes in S whose degree is largest(k); 0 when k > omega().
  unsigned q_s(unsigned k) const;
  unsigned max_degree() const { return degrees_.empty() ? 0 : degrees_.back(); }

  std::string to_string() const;

  /// 1..max_primes primes with degrees in 1..max_degree, random S flags and
  /// multiplicities in 1..max_multiplicity.
  static DivisorProfile random(std::mt19937_64& rng, unsigned max_primes = 8,
                               unsigned max_degree = 6, unsigned max_multiplicity = 3);

 private:
  std::vector<Prime> primes_;
  std::vector<unsigned> degrees_;
};

/// A function on the non-negative integers known on 0..max_arg.
/// Evaluation outside the table is an error.
class TabulatedFunction {
 public:
  TabulatedFunction() = default;
  explicit TabulatedFunction(std::vector<Rational> values) : values_(std::move(values)) {}

  /// sum_i coeffs[i] * x^i tabulated on 0..max_arg.
  static TabulatedFunction polynomial(const std::vector<BigInt>& coeffs, unsigned max_arg);
  static TabulatedFunction constant(const Rational& c, unsigned max_arg);

  const Rational& operator()(std::int64_t x) const;
  unsigned max_arg() const { return values_.empty() ? 0 : static_cast<unsigned>(values_.size() - 1); }
  bool empty() const { return values_.empty(); }
  const std::vector<Rational>& values() const { return values_; }

 private:
  std::vector<Rational> values_;
};

/// A tabulated weight with f(0) = 0.
class FWeight {
 public:
  /// Values f(1), ..., f(n); f(0) is 0 by construction.
  explicit FWeight(std::vector<Rational> from_one);
  /// Rejects a table whose f(0) is nonzero.
  static FWeight from_table(const TabulatedFunction& f);
  static FWeight zero(unsigned max_arg);
  static FWeight indicator_positive(unsigned max_arg);
  static FWeight polynomial(const std::vector<BigInt>& coeffs, unsigned max_arg);
  /// Parses "x", "x^2", "3x^2-x", "ind" (1 for x > 0), "zero".
  static FWeight parse(const std::string& expr, unsigned max_arg);

  const Rational& operator()(std::int64_t x) const { return table_(x); }
  const TabulatedFunction& table() const { return table_; }

 private:
  explicit FWeight(TabulatedFunction t) : table_(std::move(t)) {}
  TabulatedFunction table_;
};

/// n-th forward difference sum_{k=0}^{n} (-1)^{n-k} C(n,k) f(x+k).
Rational forward_difference(const TabulatedFunction& f, unsigned n, std::int64_t x);

/// sum over squarefree sub-profiles B of mu(B) f(Omega(B)), by enumeration.
Rational divisor_mobius_sum(const DivisorProfile& a, const TabulatedFunction& f);
/// (-1)^{Omega(A)} D_{Omega(A)} f(0).
Rational divisor_mobius_closed_form(const DivisorProfile& a, const TabulatedFunction& f);

/// sum over B | A of mu(B) (Omega(B)+1) Omega(B) ... (Omega(B) - l), by enumeration.
BigInt falling_factorial_sum(const DivisorProfile& a, unsigned l);
/// (-1)^Omega (Omega+1)! if l = Omega-1, (-1)^Omega Omega! if l = Omega-2, else 0.
BigInt falling_factorial_closed_form(const DivisorProfile& a, unsigned l);

/// sum over B <= A with B in D(S) of mu(B) C(Omega(B)-1, k-1) f(delta_1(B)).
Rational duality_lhs(const DivisorProfile& a, const FWeight& f, unsigned k);
/// (-1)^k Q_S^(k)(A) f(Delta_k(A)).
Rational duality_rhs(const DivisorProfile& a, const FWeight& f, unsigned k);
/// sum over B <= A with B in D(S) of mu(B) C(Omega(B), r) f(delta_1(B)).
/// Pascal's rule gives duality_lhs(r+1) + duality_rhs(r) == this.
Rational pascal_weighted_sum(const DivisorProfile& a, const FWeight& f, unsigned r);

struct DualityRow {
  unsigned k;
  Rational lhs;
  Rational rhs;
  bool equal;
};

struct DualityReport {
  std::string profile;
  std::vector<DualityRow> rows;
  bool passed = true;
};

DualityReport verify_duality(const DivisorProfile& a, const FWeight& f, unsigned k_max);

}  // namespace ffmu
