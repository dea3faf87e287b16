#include "ffmu/field.hpp"

#include <map>
#include <memory>
#include <mutex>

#include "ffmu/error.hpp"

namespace ffmu {

namespace {

// Extension-field tables are q x q; keep them small.
constexpr std::uint32_t kMaxTableQ = 256;
constexpr std::uint32_t kMaxPrimeQ = 65521;

std::vector<std::uint32_t> digits_of(std::uint32_t x, std::uint32_t p, std::uint32_t e) {
  std::vector<std::uint32_t> out(e);
  for (std::uint32_t i = 0; i < e; ++i) {
    out[i] = x % p;
    x /= p;
  }
  return out;
}

std::uint32_t encode(const std::vector<std::uint32_t>& low_first, std::uint32_t p) {
  std::uint32_t out = 0;
  for (auto it = low_first.rbegin(); it != low_first.rend(); ++it) out = out * p + *it;
  return out;
}

// Multiplication in GF(p)[a]/(modulus), coefficient vectors low-first.
std::vector<std::uint32_t> mul_mod(const std::vector<std::uint32_t>& a,
                                   const std::vector<std::uint32_t>& b,
                                   const std::vector<std::uint32_t>& mod_low, std::uint32_t p) {
  const std::size_t e = mod_low.size() - 1;
  std::vector<std::uint64_t> prod(2 * e, 0);
  for (std::size_t i = 0; i < e; ++i) {
    for (std::size_t j = 0; j < e; ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
  }
  for (std::size_t k = 2 * e - 1; k >= e; --k) {
    const std::uint64_t c = prod[k];
    if (c == 0) continue;
    prod[k] = 0;
    // a^k = a^{k-e} * a^e and a^e = -sum mod_low[i] a^i.
    for (std::size_t i = 0; i < e; ++i) {
      prod[k - e + i] = (prod[k - e + i] + (p - mod_low[i]) % p * c) % p;
    }
  }
  return {prod.begin(), prod.begin() + static_cast<std::ptrdiff_t>(e)};
}

// Irreducibility of a small monic polynomial over GF(p) by exhaustive trial
// division against all monic polynomials of degree <= e/2.
bool small_irreducible(const std::vector<std::uint32_t>& mod_low, std::uint32_t p) {
  const std::size_t e = mod_low.size() - 1;
  for (std::size_t d = 1; d <= e / 2; ++d) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      std::vector<std::int64_t> div(d + 1);
      std::uint64_t t = idx;
      for (std::size_t i = 0; i < d; ++i) {
        div[i] = static_cast<std::int64_t>(t % p);
        t /= p;
      }
      div[d] = 1;
      std::vector<std::int64_t> rem(mod_low.begin(), mod_low.end());
      for (std::size_t k = e; k + 1 > d; --k) {
        const std::int64_t c = rem[k] % static_cast<std::int64_t>(p);
        if (c == 0) continue;
        for (std::size_t i = 0; i <= d; ++i) {
          rem[k - d + i] = ((rem[k - d + i] - c * div[i]) % static_cast<std::int64_t>(p) +
                            static_cast<std::int64_t>(p)) % static_cast<std::int64_t>(p);
        }
      }
      bool zero = true;
      for (std::size_t i = 0; i < d; ++i) zero = zero && rem[i] % static_cast<std::int64_t>(p) == 0;
      if (zero) return false;
    }
  }
  return true;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t r = 2; r * r <= n; ++r) {
    if (n % r == 0) return false;
  }
  return true;
}

std::uint32_t FieldSpec::q() const {
  std::uint32_t out = 1;
  for (std::uint32_t i = 0; i < e; ++i) out *= p;
  return out;
}

FieldSpec FieldSpec::builtin(std::uint32_t q) {
  if (is_prime(q)) {
    if (q > kMaxPrimeQ) throw Error(ErrorKind::kInvalidArgument, "prime q too large");
    return FieldSpec{q, 1, {}};
  }
  switch (q) {
    case 4: return FieldSpec{2, 2, {1, 1, 1}};
    case 8: return FieldSpec{2, 3, {1, 0, 1, 1}};
    case 9: return FieldSpec{3, 2, {1, 0, 1}};
    default: break;
  }
  throw Error(ErrorKind::kInvalidArgument,
              "q=" + std::to_string(q) +
                  " needs an explicit extension modulus (built-ins: primes, 4, 8, 9)");
}

FieldSpec FieldSpec::with_modulus(std::uint32_t q, const std::string& modulus_digits) {
  std::uint32_t p = 0;
  std::uint32_t e = 0;
  for (std::uint32_t cand = 2; cand <= q; ++cand) {
    if (q % cand == 0) {
      p = cand;
      break;
    }
  }
  if (p == 0 || !is_prime(p)) throw Error(ErrorKind::kInvalidArgument, "q must be a prime power");
  for (std::uint32_t t = q; t > 1; t /= p) {
    if (t % p != 0) throw Error(ErrorKind::kInvalidArgument, "q must be a prime power");
    ++e;
  }
  if (e == 1) {
    if (!modulus_digits.empty()) {
      throw Error(ErrorKind::kInvalidArgument, "prime fields take no extension modulus");
    }
    return builtin(q);
  }
  std::vector<std::uint32_t> modulus;
  std::string token;
  const bool comma = modulus_digits.find(',') != std::string::npos;
  for (std::size_t i = 0; i <= modulus_digits.size(); ++i) {
    const bool end = i == modulus_digits.size();
    const char ch = end ? ',' : modulus_digits[i];
    if (!comma && !end) {
      if (ch < '0' || ch > '9') throw Error(ErrorKind::kParse, "bad modulus digit");
      modulus.push_back(static_cast<std::uint32_t>(ch - '0'));
      continue;
    }
    if (ch == ',') {
      if (comma) {
        if (token.empty()) throw Error(ErrorKind::kParse, "empty modulus digit");
        modulus.push_back(static_cast<std::uint32_t>(std::stoul(token)));
        token.clear();
      }
    } else if (ch >= '0' && ch <= '9') {
      token.push_back(ch);
    } else {
      throw Error(ErrorKind::kParse, "bad modulus digit");
    }
  }
  if (modulus.size() != e + 1 || modulus.front() != 1) {
    throw Error(ErrorKind::kInvalidArgument,
                "extension modulus must be monic of degree " + std::to_string(e));
  }
  for (auto d : modulus) {
    if (d >= p) throw Error(ErrorKind::kInvalidArgument, "modulus digit >= p");
  }
  if (!small_irreducible(std::vector<std::uint32_t>(modulus.rbegin(), modulus.rend()), p)) {
    throw Error(ErrorKind::kInvalidArgument, "extension modulus is reducible over GF(p)");
  }
  return FieldSpec{p, e, modulus};
}

Field::Field(FieldSpec spec) : spec_(std::move(spec)), q_(spec_.q()) {
  if (!is_prime(spec_.p) || spec_.e < 1) {
    throw Error(ErrorKind::kInvalidArgument, "field characteristic must be prime");
  }
  const std::uint32_t p = spec_.p;
  if (is_prime_field()) {
    if (q_ > kMaxPrimeQ) throw Error(ErrorKind::kInvalidArgument, "prime q too large");
    inv_.assign(q_, 0);
    for (std::uint32_t a = 1; a < q_; ++a) {
      // Fermat inverse a^{p-2}.
      std::uint64_t r = 1, b = a;
      for (std::uint32_t k = q_ - 2; k > 0; k >>= 1) {
        if (k & 1U) r = r * b % q_;
        b = b * b % q_;
      }
      inv_[a] = static_cast<Elem>(r);
    }
    return;
  }
  if (q_ > kMaxTableQ) {
    throw Error(ErrorKind::kInvalidArgument, "extension fields are limited to q <= 256");
  }
  if (spec_.modulus.size() != spec_.e + 1 || spec_.modulus.front() != 1) {
    throw Error(ErrorKind::kInvalidArgument, "extension modulus must be monic of degree e");
  }
  std::vector<std::uint32_t> mod_low(spec_.modulus.rbegin(), spec_.modulus.rend());
  if (!small_irreducible(mod_low, p)) {
    throw Error(ErrorKind::kInvalidArgument, "extension modulus is reducible over GF(p)");
  }
  const std::uint32_t e = spec_.e;
  add_.assign(static_cast<std::size_t>(q_) * q_, 0);
  mul_.assign(static_cast<std::size_t>(q_) * q_, 0);
  neg_.assign(q_, 0);
  inv_.assign(q_, 0);
  root_.assign(q_, 0);
  for (std::uint32_t a = 0; a < q_; ++a) {
    const auto da = digits_of(a, p, e);
    std::vector<std::uint32_t> dn(e);
    for (std::uint32_t i = 0; i < e; ++i) dn[i] = (p - da[i]) % p;
    neg_[a] = encode(dn, p);
    for (std::uint32_t b = 0; b < q_; ++b) {
      const auto db = digits_of(b, p, e);
      std::vector<std::uint32_t> ds(e);
      for (std::uint32_t i = 0; i < e; ++i) ds[i] = (da[i] + db[i]) % p;
      add_[a * q_ + b] = encode(ds, p);
      mul_[a * q_ + b] = encode(mul_mod(da, db, mod_low, p), p);
    }
  }
  for (std::uint32_t a = 1; a < q_; ++a) {
    for (std::uint32_t b = 1; b < q_; ++b) {
      if (mul_[a * q_ + b] == 1) {
        inv_[a] = b;
        break;
      }
    }
  }
  // x -> x^p is a bijection; invert it.
  for (std::uint32_t b = 0; b < q_; ++b) {
    Elem pow = 1;
    for (std::uint32_t k = 0; k < p; ++k) pow = mul_[pow * q_ + b];
    root_[pow] = b;
  }
}

const Field& Field::get(std::uint32_t q) { return get(FieldSpec::builtin(q)); }

const Field& Field::get(const FieldSpec& spec) {
  static std::mutex mutex;
  static std::map<std::pair<std::uint32_t, std::vector<std::uint32_t>>,
                  std::unique_ptr<const Field>>
      registry;
  std::lock_guard lock(mutex);
  auto key = std::make_pair(spec.p, spec.modulus);
  if (spec.e == 1) key.second.clear();
  auto it = registry.find(key);
  if (it != registry.end()) return *it->second;
  auto field = std::unique_ptr<const Field>(new Field(spec));
  const Field& ref = *field;
  registry.emplace(std::move(key), std::move(field));
  return ref;
}

}  // namespace ffmu
