#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ffmu/field.hpp"
#include "ffmu/numeric.hpp"

namespace ffmu {

/// A polynomial over GF(q), possibly zero or non-monic. Coefficients are
/// stored lowest degree first with no trailing zeros, so the zero
/// polynomial has an empty coefficient vector and no degree.
class Poly {
 public:
  explicit Poly(const Field& field) : field_(&field) {}
  Poly(const Field& field, std::vector<Elem> low_first);

  static Poly constant(const Field& field, Elem c);
  static Poly monomial(const Field& field, Elem c, std::size_t power);

  const Field& field() const { return *field_; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  /// Degree, or std::nullopt for the zero polynomial.
  std::optional<std::size_t> degree() const {
    if (c_.empty()) return std::nullopt;
    return c_.size() - 1;
  }
  Elem coeff(std::size_t power) const { return power < c_.size() ? c_[power] : 0; }
  Elem leading() const { return c_.empty() ? 0 : c_.back(); }
  std::span<const Elem> coeffs() const { return c_; }

  Poly monic() const;
  Poly scaled(Elem c) const;

  Poly& operator+=(const Poly& other);
  Poly& operator-=(const Poly& other);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend bool operator==(const Poly& a, const Poly& b) {
    return a.field_ == b.field_ && a.c_ == b.c_;
  }

 private:
  void trim();

  const Field* field_;
  std::vector<Elem> c_;
};

struct PolyPair {
  Poly quotient;
  Poly remainder;
};

void require_same_field(const Poly& a, const Poly& b);

PolyPair divrem(const Poly& dividend, const Poly& divisor);
Poly mod(const Poly& a, const Poly& modulus);
/// Monic gcd; gcd(0, 0) is rejected.
Poly gcd(Poly a, Poly b);
Poly powmod(const Poly& base, const BigInt& exponent, const Poly& modulus);
Poly powmod(const Poly& base, std::uint64_t exponent, const Poly& modulus);
Poly derivative(const Poly& a);
/// Coefficient-wise p-th root of a polynomial whose exponents are all
/// multiples of p (the inverse of the Frobenius map on GF(q)[T]).
Poly pth_root(const Poly& a);

/// A monic polynomial. The constant 1 is the unique value of degree 0.
class MonicPoly {
 public:
  static MonicPoly from_poly(Poly poly);
  static MonicPoly one(const Field& field);
  /// The variable T.
  static MonicPoly variable(const Field& field);
  /// Monic polynomial of the given degree whose lower coefficients are the
  /// base-q digits of `index` (coefficient of T^{degree-1} most significant).
  static MonicPoly from_index(const Field& field, unsigned degree, std::uint64_t index);

  const Field& field() const { return poly_.field(); }
  const Poly& poly() const { return poly_; }
  unsigned degree() const { return static_cast<unsigned>(*poly_.degree()); }
  bool is_one() const { return poly_.is_one(); }
  std::uint64_t index() const;

  /// Big-endian coefficient string; digits are comma separated when q > 10.
  std::string to_string() const;
  /// Human readable form such as "T^2+T+1".
  std::string to_symbolic() const;

  friend bool operator==(const MonicPoly& a, const MonicPoly& b) { return a.poly_ == b.poly_; }
  /// Ordered by degree, then lexicographically by coefficient string.
  friend std::strong_ordering operator<=>(const MonicPoly& a, const MonicPoly& b);

 private:
  explicit MonicPoly(Poly poly) : poly_(std::move(poly)) {}

  Poly poly_;
};

/// Parses a polynomial written either as big-endian digits ("111", "1,2,0";
/// bare bit strings for q = 2) or symbolically ("T^2+T+1", "2T+1").
Poly parse_any_poly(std::string_view text, const Field& field);
MonicPoly parse_poly(std::string_view text, const Field& field);
std::string format_digits(const Poly& poly);
std::string format_symbolic(const Poly& poly);

MonicPoly poly_mul(const MonicPoly& a, const MonicPoly& b);
PolyPair poly_divrem(const MonicPoly& a, const MonicPoly& d);
MonicPoly poly_gcd(const MonicPoly& a, const MonicPoly& b);
Poly poly_powmod(const MonicPoly& base, const BigInt& exponent, const MonicPoly& modulus);
Poly formal_derivative(const MonicPoly& a);

}  // namespace ffmu
