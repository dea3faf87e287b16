#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ffmu/numeric.hpp"
#include "ffmu/poly.hpp"
#include "ffmu/prime_store.hpp"

namespace ffmu {

/// Membership predicate over primes.
class PrimeMembership {
 public:
  virtual ~PrimeMembership() = default;
  virtual bool contains(const PrimeRecord& prime) const = 0;
};

/// A subset of the primes of GF(q)[T] given by a textual spec:
///
///   all | none | list:<poly>[,<poly>...] | ap:<modulus>:<residue>
///   | bernoulli:<rho>:<seed> | degmod:<r>:<m>
///
/// Membership is a pure function of the prime. Bernoulli subsets hash the
/// prime's coefficient string with the seed, so repeated queries agree.
class PrimeSubset : public PrimeMembership {
 public:
  enum class Kind { kAll, kNone, kList, kArithmeticProgression, kBernoulli, kDegreeMod };

  static PrimeSubset parse(const std::string& text, const Field& field);

  Kind kind() const { return kind_; }
  const std::string& text() const { return text_; }
  const Field& field() const { return *field_; }

  bool contains(const PrimeRecord& prime) const override { return contains(prime.poly); }
  bool contains(const MonicPoly& prime) const;

  /// Natural density; std::nullopt where none is declared (degmod).
  const std::optional<Rational>& declared_density() const { return density_; }
  /// Declared density or a kDensityUndefined error.
  const Rational& require_density() const;

 private:
  PrimeSubset(const Field& field, std::string text, Kind kind)
      : field_(&field), text_(std::move(text)), kind_(kind) {}

  const Field* field_;
  std::string text_;
  Kind kind_;
  std::optional<Rational> density_;
  std::vector<MonicPoly> list_;
  std::optional<Poly> ap_modulus_;
  std::optional<Poly> ap_residue_;
  std::uint64_t seed_ = 0;
  // Member iff hash < threshold; threshold == 2^64 encoded by `all_below_`.
  std::uint64_t threshold_ = 0;
  bool all_below_ = false;
  unsigned deg_residue_ = 0;
  unsigned deg_modulus_ = 1;
};

/// Membership of every prime in a table, precomputed for hot loops.
class BoundSubset : public PrimeMembership {
 public:
  BoundSubset(const PrimeSubset& subset, const PrimeTable& table);

  bool contains(const PrimeRecord& prime) const override {
    return flags_[prime.degree][prime.ordinal] != 0;
  }
  const PrimeSubset& subset() const { return *subset_; }

 private:
  const PrimeSubset* subset_;
  std::vector<std::vector<std::uint8_t>> flags_;
};

std::uint64_t pi_S(const PrimeMembership& subset, unsigned n, const PrimeTable& table);

struct DensityErrorRow {
  unsigned d;
  std::uint64_t pi_s;
  std::uint64_t pi_p;
  /// sup over 1 <= e <= d of pi_S(e) - delta * pi_P(e).
  Rational e_s;
  /// sup over d <= e <= truncated_at of e_S(e) / q^e.
  Rational v_s;
  unsigned truncated_at;
};

std::vector<DensityErrorRow> density_error_stats(const PrimeSubset& subset,
                                                 const PrimeTable& table);

}  // namespace ffmu
