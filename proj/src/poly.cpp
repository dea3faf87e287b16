#include "ffmu/poly.hpp"

#include <algorithm>
#include <cctype>

#include "ffmu/error.hpp"

namespace ffmu {

Poly::Poly(const Field& field, std::vector<Elem> low_first)
    : field_(&field), c_(std::move(low_first)) {
  for (auto c : c_) {
    if (c >= field.q()) throw Error(ErrorKind::kInvalidArgument, "coefficient out of range");
  }
  trim();
}

Poly Poly::constant(const Field& field, Elem c) { return Poly(field, {c}); }

Poly Poly::monomial(const Field& field, Elem c, std::size_t power) {
  std::vector<Elem> v(power + 1, 0);
  v[power] = c;
  return Poly(field, std::move(v));
}

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Poly Poly::monic() const {
  if (is_zero() || is_monic()) return *this;
  return scaled(field_->inv(leading()));
}

Poly Poly::scaled(Elem c) const {
  Poly out(*field_);
  if (c == 0) return out;
  out.c_.resize(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) out.c_[i] = field_->mul(c_[i], c);
  return out;
}

void require_same_field(const Poly& a, const Poly& b) {
  if (&a.field() != &b.field()) {
    throw Error(ErrorKind::kFieldMismatch, "polynomials live over different fields");
  }
}

Poly& Poly::operator+=(const Poly& other) {
  require_same_field(*this, other);
  if (other.c_.size() > c_.size()) c_.resize(other.c_.size(), 0);
  for (std::size_t i = 0; i < other.c_.size(); ++i) c_[i] = field_->add(c_[i], other.c_[i]);
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& other) {
  require_same_field(*this, other);
  if (other.c_.size() > c_.size()) c_.resize(other.c_.size(), 0);
  for (std::size_t i = 0; i < other.c_.size(); ++i) c_[i] = field_->sub(c_[i], other.c_[i]);
  trim();
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  Poly out(a.field());
  if (a.is_zero() || b.is_zero()) return out;
  const Field& f = a.field();
  out.c_.assign(a.c_.size() + b.c_.size() - 1, 0);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    const Elem ai = a.c_[i];
    if (ai == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) {
      out.c_[i + j] = f.add(out.c_[i + j], f.mul(ai, b.c_[j]));
    }
  }
  out.trim();
  return out;
}

PolyPair divrem(const Poly& dividend, const Poly& divisor) {
  require_same_field(dividend, divisor);
  if (divisor.is_zero()) throw Error(ErrorKind::kDomain, "division by the zero polynomial");
  const Field& f = dividend.field();
  const auto dd = *divisor.degree();
  std::vector<Elem> rem(dividend.coeffs().begin(), dividend.coeffs().end());
  if (rem.size() <= dd) return {Poly(f), dividend};
  std::vector<Elem> quo(rem.size() - dd, 0);
  const Elem lead_inv = f.inv(divisor.leading());
  const auto dv = divisor.coeffs();
  for (std::size_t k = rem.size() - 1; k + 1 > dd; --k) {
    const Elem c = f.mul(rem[k], lead_inv);
    if (c == 0) continue;
    quo[k - dd] = c;
    for (std::size_t i = 0; i <= dd; ++i) {
      rem[k - dd + i] = f.sub(rem[k - dd + i], f.mul(c, dv[i]));
    }
  }
  rem.resize(dd);
  return {Poly(f, std::move(quo)), Poly(f, std::move(rem))};
}

Poly mod(const Poly& a, const Poly& modulus) { return divrem(a, modulus).remainder; }

Poly gcd(Poly a, Poly b) {
  require_same_field(a, b);
  if (a.is_zero() && b.is_zero()) throw Error(ErrorKind::kDomain, "gcd(0, 0) is undefined");
  while (!b.is_zero()) {
    Poly r = mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

namespace {

Poly powmod_bits(const Poly& base, const BigInt& exponent, const Poly& modulus) {
  require_same_field(base, modulus);
  if (modulus.is_zero()) throw Error(ErrorKind::kDomain, "powmod with zero modulus");
  if (exponent < 0) throw Error(ErrorKind::kDomain, "negative exponent");
  const Field& f = base.field();
  Poly result = mod(Poly::constant(f, 1), modulus);
  const Poly b = mod(base, modulus);
  const auto bits = mpz_sizeinbase(exponent.get_mpz_t(), 2);
  if (exponent == 0) return result;
  for (std::size_t i = bits; i-- > 0;) {
    result = mod(result * result, modulus);
    if (mpz_tstbit(exponent.get_mpz_t(), i)) result = mod(result * b, modulus);
  }
  return result;
}

}  // namespace

Poly powmod(const Poly& base, const BigInt& exponent, const Poly& modulus) {
  return powmod_bits(base, exponent, modulus);
}

Poly powmod(const Poly& base, std::uint64_t exponent, const Poly& modulus) {
  require_same_field(base, modulus);
  if (modulus.is_zero()) throw Error(ErrorKind::kDomain, "powmod with zero modulus");
  const Field& f = base.field();
  Poly result = mod(Poly::constant(f, 1), modulus);
  Poly b = mod(base, modulus);
  while (exponent > 0) {
    if (exponent & 1U) result = mod(result * b, modulus);
    exponent >>= 1U;
    if (exponent > 0) b = mod(b * b, modulus);
  }
  return result;
}

Poly derivative(const Poly& a) {
  const Field& f = a.field();
  const auto c = a.coeffs();
  if (c.size() <= 1) return Poly(f);
  std::vector<Elem> out(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) out[i - 1] = f.mul(c[i], f.from_int(i));
  return Poly(f, std::move(out));
}

Poly pth_root(const Poly& a) {
  const Field& f = a.field();
  const auto c = a.coeffs();
  const std::size_t p = f.p();
  if (c.empty()) return a;
  std::vector<Elem> out((c.size() - 1) / p + 1, 0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    if (i % p != 0) throw Error(ErrorKind::kDomain, "polynomial is not a p-th power");
    out[i / p] = f.pth_root(c[i]);
  }
  return Poly(f, std::move(out));
}

MonicPoly MonicPoly::from_poly(Poly poly) {
  if (!poly.is_monic()) throw Error(ErrorKind::kInvalidArgument, "polynomial is not monic");
  return MonicPoly(std::move(poly));
}

MonicPoly MonicPoly::one(const Field& field) { return MonicPoly(Poly::constant(field, 1)); }

MonicPoly MonicPoly::variable(const Field& field) {
  return MonicPoly(Poly::monomial(field, 1, 1));
}

MonicPoly MonicPoly::from_index(const Field& field, unsigned degree, std::uint64_t index) {
  std::vector<Elem> c(degree + 1);
  const std::uint64_t q = field.q();
  for (unsigned i = 0; i < degree; ++i) {
    c[i] = static_cast<Elem>(index % q);
    index /= q;
  }
  if (index != 0) throw Error(ErrorKind::kInvalidArgument, "index exceeds q^degree");
  c[degree] = 1;
  return MonicPoly(Poly(field, std::move(c)));
}

std::uint64_t MonicPoly::index() const {
  const auto c = poly_.coeffs();
  const std::uint64_t q = field().q();
  std::uint64_t out = 0;
  for (std::size_t i = c.size() - 1; i-- > 0;) out = out * q + c[i];
  return out;
}

std::string MonicPoly::to_string() const { return format_digits(poly_); }
std::string MonicPoly::to_symbolic() const { return format_symbolic(poly_); }

std::strong_ordering operator<=>(const MonicPoly& a, const MonicPoly& b) {
  if (auto cmp = a.degree() <=> b.degree(); cmp != 0) return cmp;
  const auto ca = a.poly().coeffs();
  const auto cb = b.poly().coeffs();
  for (std::size_t i = ca.size(); i-- > 0;) {
    if (auto cmp = ca[i] <=> cb[i]; cmp != 0) return cmp;
  }
  return std::strong_ordering::equal;
}

std::string format_digits(const Poly& poly) {
  if (poly.is_zero()) return "0";
  const bool commas = poly.field().q() > 10;
  std::string out;
  const auto c = poly.coeffs();
  for (std::size_t i = c.size(); i-- > 0;) {
    if (commas && i + 1 != c.size()) out.push_back(',');
    out += std::to_string(c[i]);
  }
  return out;
}

std::string format_symbolic(const Poly& poly) {
  if (poly.is_zero()) return "0";
  std::string out;
  const auto c = poly.coeffs();
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i] == 0) continue;
    if (!out.empty()) out.push_back('+');
    if (c[i] != 1 || i == 0) out += std::to_string(c[i]);
    if (i >= 1) out.push_back('T');
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out;
}

namespace {

std::string strip_spaces(std::string_view text) {
  std::string out;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) out.push_back(ch);
  }
  return out;
}

std::uint64_t parse_uint(std::string_view s, std::string_view context) {
  if (s.empty() || s.size() > 18 || s.find_first_not_of("0123456789") != std::string_view::npos) {
    throw Error(ErrorKind::kParse, "malformed number in '" + std::string(context) + "'");
  }
  return std::stoull(std::string(s));
}

Poly parse_digits(const std::string& text, const Field& field) {
  std::vector<std::uint64_t> digits;
  if (text.find(',') != std::string::npos) {
    std::size_t start = 0;
    while (true) {
      const auto comma = text.find(',', start);
      digits.push_back(parse_uint(
          std::string_view(text).substr(start, comma == std::string::npos ? std::string::npos
                                                                          : comma - start),
          text));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  } else {
    for (char ch : text) {
      if (ch < '0' || ch > '9') {
        throw Error(ErrorKind::kParse, "malformed digit string '" + text + "'");
      }
      digits.push_back(static_cast<std::uint64_t>(ch - '0'));
    }
  }
  std::vector<Elem> low(digits.size());
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (digits[i] >= field.q()) {
      throw Error(ErrorKind::kParse, "digit " + std::to_string(digits[i]) + " >= q in '" +
                                         text + "'");
    }
    low[digits.size() - 1 - i] = static_cast<Elem>(digits[i]);
  }
  return Poly(field, std::move(low));
}

Poly parse_symbolic(const std::string& text, const Field& field) {
  Poly out(field);
  std::size_t pos = 0;
  bool first = true;
  while (pos < text.size()) {
    bool negative = false;
    if (text[pos] == '+' || text[pos] == '-') {
      negative = text[pos] == '-';
      ++pos;
    } else if (!first) {
      throw Error(ErrorKind::kParse, "expected '+' or '-' in '" + text + "'");
    }
    first = false;
    std::size_t end = pos;
    while (end < text.size() && text[end] != '+' && text[end] != '-') ++end;
    std::string term = text.substr(pos, end - pos);
    pos = end;
    if (term.empty()) throw Error(ErrorKind::kParse, "empty term in '" + text + "'");
    std::uint64_t coeff = 1;
    std::size_t power = 0;
    const auto t = term.find_first_of("Tt");
    if (t == std::string::npos) {
      coeff = parse_uint(term, text);
    } else {
      std::string head = term.substr(0, t);
      if (!head.empty() && head.back() == '*') head.pop_back();
      if (!head.empty()) coeff = parse_uint(head, text);
      const std::string tail = term.substr(t + 1);
      if (tail.empty()) {
        power = 1;
      } else if (tail[0] == '^') {
        power = parse_uint(std::string_view(tail).substr(1), text);
      } else {
        throw Error(ErrorKind::kParse, "malformed term '" + term + "'");
      }
    }
    if (coeff >= field.q()) {
      throw Error(ErrorKind::kParse, "coefficient >= q in '" + text + "'");
    }
    Poly term_poly = Poly::monomial(field, static_cast<Elem>(coeff), power);
    if (negative) {
      out -= term_poly;
    } else {
      out += term_poly;
    }
  }
  return out;
}

}  // namespace

Poly parse_any_poly(std::string_view text, const Field& field) {
  const std::string s = strip_spaces(text);
  if (s.empty()) throw Error(ErrorKind::kParse, "empty polynomial string");
  if (s.find_first_of("Tt") != std::string::npos) return parse_symbolic(s, field);
  return parse_digits(s, field);
}

MonicPoly parse_poly(std::string_view text, const Field& field) {
  Poly poly = parse_any_poly(text, field);
  const std::string s = strip_spaces(text);
  const bool digit_form = s.find_first_of("Tt") == std::string::npos;
  if (digit_form && s[0] != '1') {
    throw Error(ErrorKind::kParse, "leading digit must be 1 in '" + s + "'");
  }
  if (!poly.is_monic()) throw Error(ErrorKind::kParse, "polynomial '" + s + "' is not monic");
  return MonicPoly::from_poly(std::move(poly));
}

MonicPoly poly_mul(const MonicPoly& a, const MonicPoly& b) {
  return MonicPoly::from_poly(a.poly() * b.poly());
}

PolyPair poly_divrem(const MonicPoly& a, const MonicPoly& d) { return divrem(a.poly(), d.poly()); }

MonicPoly poly_gcd(const MonicPoly& a, const MonicPoly& b) {
  return MonicPoly::from_poly(gcd(a.poly(), b.poly()));
}

Poly poly_powmod(const MonicPoly& base, const BigInt& exponent, const MonicPoly& modulus) {
  return powmod(base.poly(), exponent, modulus.poly());
}

Poly formal_derivative(const MonicPoly& a) { return derivative(a.poly()); }

}  // namespace ffmu
