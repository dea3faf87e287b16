#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ffmu/poly.hpp"
#include "ffmu/prime_store.hpp"
#include "ffmu/prime_subset.hpp"

namespace ffmu {

struct PrimePower {
  const PrimeRecord* prime;  // points into the PrimeTable used to factor
  unsigned multiplicity;
};

/// Complete factorization of a monic polynomial. Factors are sorted by
/// (degree, lexicographic) and refer to records of the table that produced
/// them, so a Factorization must not outlive its table.
struct Factorization {
  MonicPoly input;
  std::vector<PrimePower> factors;
};

/// Squarefree decomposition, distinct-degree splitting, and equal-degree
/// splitting by trial division against the table's primes.
Factorization factor(const MonicPoly& a, const PrimeTable& table);

bool is_squarefree(const MonicPoly& a);

/// Product of prime^multiplicity over the factor list.
MonicPoly expand(const Factorization& f);

int mobius(const Factorization& f);
int mobius(const MonicPoly& a, const PrimeTable& table);

/// Number of prime factors counted with multiplicity. Not to be confused
/// with omega() below, which counts distinct prime degrees.
unsigned count_with_multiplicity(const Factorization& f);

/// The set of distinct prime degrees of A and the primes at each degree.
class DegreeData {
 public:
  explicit DegreeData(const Factorization& f);

  /// Distinct prime degrees in increasing order.
  const std::vector<unsigned>& degree_set() const { return degrees_; }
  unsigned omega() const { return static_cast<unsigned>(degrees_.size()); }
  /// k-th largest distinct prime degree (k >= 1); 0 when k > omega().
  unsigned largest(unsigned k) const;
  /// k-th smallest distinct prime degree (k >= 1); 0 when k > omega().
  unsigned smallest(unsigned k) const;
  /// Primes dividing A whose degree is degree_set()[i].
  const std::vector<const PrimeRecord*>& primes_at_rank(std::size_t i) const {
    return primes_[i];
  }
  /// Primes dividing A of the given degree (empty if none).
  std::span<const PrimeRecord* const> primes_of_degree(unsigned degree) const;

 private:
  std::vector<unsigned> degrees_;
  std::vector<std::vector<const PrimeRecord*>> primes_;
};

DegreeData degree_data(const Factorization& f);

/// Prime divisors of minimal degree. Throws for constant input.
std::vector<const PrimeRecord*> p_min_set(const Factorization& f);
/// A is in D(S): its minimal-degree prime divisor is unique and lies in S.
bool in_D_S(const Factorization& f, const PrimeMembership& subset);
/// Number of primes of S dividing A with degree equal to the k-th largest
/// distinct prime degree; 0 when k > omega.
unsigned q_S_k(const Factorization& f, const PrimeMembership& subset, unsigned k);

std::vector<const PrimeRecord*> p_min_set(const MonicPoly& a, const PrimeTable& table);
bool in_D_S(const MonicPoly& a, const PrimeMembership& subset, const PrimeTable& table);
unsigned q_S_k(const MonicPoly& a, const PrimeMembership& subset, unsigned k,
               const PrimeTable& table);

/// Visits every monic divisor as an exponent vector over f.factors, in
/// lexicographic order of the exponent vector (the zero vector first).
void for_each_divisor(const Factorization& f,
                      const std::function<void(std::span<const unsigned>)>& visit);
MonicPoly divisor_from_exponents(const Factorization& f, std::span<const unsigned> exponents);

}  // namespace ffmu
