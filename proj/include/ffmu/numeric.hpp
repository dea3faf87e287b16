#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace ffmu {

using BigInt = mpz_class;
using Rational = mpq_class;

inline BigInt to_big(std::uint64_t v) { return BigInt(static_cast<unsigned long>(v)); }
inline BigInt to_big(std::int64_t v) { return BigInt(static_cast<long>(v)); }

BigInt big_pow(std::uint64_t base, unsigned exponent);

/// Binomial coefficient with C(m, j) = 0 whenever j < 0 or j > m.
BigInt binomial(std::int64_t m, std::int64_t j);

/// Classical Moebius function on positive integers.
int integer_mobius(std::uint64_t n);

/// Exact q^n as an unsigned 64-bit value; throws when it does not fit.
std::uint64_t checked_pow(std::uint64_t base, unsigned exponent);

std::string to_string(const BigInt& value);
/// "num/den" with den > 0; integers still carry "/1".
std::string to_string(const Rational& value);
Rational parse_rational(const std::string& text);

}  // namespace ffmu
