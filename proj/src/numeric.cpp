#include "ffmu/numeric.hpp"

#include <limits>

#include "ffmu/error.hpp"

namespace ffmu {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kFieldMismatch: return "field-mismatch";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kTableTooSmall: return "table-too-small";
    case ErrorKind::kCountMismatch: return "count-mismatch";
    case ErrorKind::kVersionMismatch: return "version-mismatch";
    case ErrorKind::kDensityUndefined: return "density-undefined";
    case ErrorKind::kCeilingExceeded: return "ceiling-exceeded";
    case ErrorKind::kDomain: return "domain";
  }
  return "unknown";
}

BigInt big_pow(std::uint64_t base, unsigned exponent) {
  BigInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), base, exponent);
  return out;
}

BigInt binomial(std::int64_t m, std::int64_t j) {
  if (j < 0 || m < 0 || j > m) return 0;
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(m),
               static_cast<unsigned long>(j));
  return out;
}

int integer_mobius(std::uint64_t n) {
  if (n == 0) throw Error(ErrorKind::kDomain, "mobius(0) is undefined");
  int sign = 1;
  for (std::uint64_t r = 2; r * r <= n; ++r) {
    if (n % r != 0) continue;
    n /= r;
    if (n % r == 0) return 0;
    sign = -sign;
  }
  if (n > 1) sign = -sign;
  return sign;
}

std::uint64_t checked_pow(std::uint64_t base, unsigned exponent) {
  std::uint64_t out = 1;
  for (unsigned i = 0; i < exponent; ++i) {
    if (base != 0 && out > std::numeric_limits<std::uint64_t>::max() / base) {
      throw Error(ErrorKind::kDomain, "q^n overflows 64 bits");
    }
    out *= base;
  }
  return out;
}

std::string to_string(const BigInt& value) { return value.get_str(); }

std::string to_string(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw Error(ErrorKind::kParse, "empty rational");
  const auto dot = text.find('.');
  try {
    if (dot != std::string::npos) {
      std::string digits = text.substr(0, dot) + text.substr(dot + 1);
      const auto scale = text.size() - dot - 1;
      if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
        throw Error(ErrorKind::kParse, "malformed decimal '" + text + "'");
      }
      Rational out(BigInt(digits), big_pow(10, static_cast<unsigned>(scale)));
      out.canonicalize();
      return out;
    }
    const auto slash = text.find('/');
    const std::string num = text.substr(0, slash);
    const std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
    auto is_int = [](const std::string& s) {
      const auto body = (!s.empty() && s[0] == '-') ? s.substr(1) : s;
      return !body.empty() && body.find_first_not_of("0123456789") == std::string::npos;
    };
    if (!is_int(num) || !is_int(den)) {
      throw Error(ErrorKind::kParse, "malformed rational '" + text + "'");
    }
    BigInt d(den);
    if (d == 0) throw Error(ErrorKind::kParse, "zero denominator in '" + text + "'");
    Rational out(BigInt(num), d);
    out.canonicalize();
    return out;
  } catch (const std::invalid_argument&) {
    throw Error(ErrorKind::kParse, "malformed rational '" + text + "'");
  }
}

}  // namespace ffmu
