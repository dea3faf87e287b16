#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ffmu {

/// An element of GF(q). Prime-field elements are residues 0..p-1; elements
/// of GF(p^e) encode c_0 + c_1*a + ... + c_{e-1}*a^{e-1} as sum c_i * p^i,
/// where a is a root of the field modulus.
using Elem = std::uint32_t;

struct FieldSpec {
  std::uint32_t p = 2;
  std::uint32_t e = 1;
  /// Monic degree-e irreducible over GF(p), leading coefficient first.
  /// Empty for prime fields.
  std::vector<std::uint32_t> modulus;

  std::uint32_t q() const;

  /// Built-in spec for a prime q or for q in {4, 8, 9}.
  static FieldSpec builtin(std::uint32_t q);
  /// Spec for q = p^e with a user supplied modulus digit string over GF(p).
  static FieldSpec with_modulus(std::uint32_t q, const std::string& modulus_digits);

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

/// Arithmetic of GF(q). Instances are interned: `Field::get` returns a
/// reference that lives for the rest of the program, so two polynomials
/// share a field exactly when their field pointers are equal.
class Field {
 public:
  static const Field& get(std::uint32_t q);
  static const Field& get(const FieldSpec& spec);

  const FieldSpec& spec() const { return spec_; }
  std::uint32_t p() const { return spec_.p; }
  std::uint32_t e() const { return spec_.e; }
  std::uint32_t q() const { return q_; }
  bool is_prime_field() const { return spec_.e == 1; }

  Elem add(Elem a, Elem b) const {
    if (is_prime_field()) {
      const Elem s = a + b;
      return s >= q_ ? s - q_ : s;
    }
    return add_[a * q_ + b];
  }
  Elem neg(Elem a) const {
    if (is_prime_field()) return a == 0 ? 0 : q_ - a;
    return neg_[a];
  }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const {
    if (is_prime_field()) {
      return static_cast<Elem>((static_cast<std::uint64_t>(a) * b) % q_);
    }
    return mul_[a * q_ + b];
  }
  /// Multiplicative inverse; `a` must be nonzero.
  Elem inv(Elem a) const { return inv_[a]; }
  /// The unique b with b^p = a.
  Elem pth_root(Elem a) const { return is_prime_field() ? a : root_[a]; }
  /// Image of the integer k in the prime subfield.
  Elem from_int(std::uint64_t k) const { return static_cast<Elem>(k % spec_.p); }

 private:
  explicit Field(FieldSpec spec);

  FieldSpec spec_;
  std::uint32_t q_;
  std::vector<Elem> add_, neg_, mul_, inv_, root_;
};

bool is_prime(std::uint64_t n);

}  // namespace ffmu
