#include "ffmu/prime_subset.hpp"

#include <algorithm>

#include "ffmu/error.hpp"

namespace ffmu {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31U);
}

std::uint64_t keyed_hash(const std::string& s, std::uint64_t seed) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(h ^ splitmix64(seed));
}

std::uint64_t parse_count(const std::string& s, const std::string& context) {
  if (s.empty() || s.size() > 18 || s.find_first_not_of("0123456789") != std::string::npos) {
    throw Error(ErrorKind::kParse, "malformed integer in subset '" + context + "'");
  }
  return std::stoull(s);
}

}  // namespace

PrimeSubset PrimeSubset::parse(const std::string& text, const Field& field) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : text.substr(colon + 1);
  auto malformed = [&](const std::string& why) {
    return Error(ErrorKind::kParse, "subset '" + text + "': " + why);
  };

  if (head == "all" || head == "none") {
    if (colon != std::string::npos) throw malformed("takes no arguments");
    PrimeSubset s(field, text, head == "all" ? Kind::kAll : Kind::kNone);
    s.density_ = Rational(head == "all" ? 1 : 0);
    return s;
  }
  if (colon == std::string::npos) throw malformed("unknown subset kind");

  if (head == "list") {
    PrimeSubset s(field, text, Kind::kList);
    for (const auto& item : split(body, ',')) {
      if (field.q() > 10 && item.find_first_of("Tt") == std::string::npos) {
        throw malformed("list entries must be written symbolically when q > 10");
      }
      MonicPoly p = parse_poly(item, field);
      if (p.degree() == 0 || !is_irreducible(p)) throw malformed("'" + item + "' is not prime");
      s.list_.push_back(std::move(p));
    }
    std::sort(s.list_.begin(), s.list_.end());
    s.list_.erase(std::unique(s.list_.begin(), s.list_.end()), s.list_.end());
    s.density_ = Rational(0);
    return s;
  }

  const auto parts = split(body, ':');
  if (parts.size() != 2) throw malformed("expected two ':'-separated arguments");

  if (head == "ap") {
    PrimeSubset s(field, text, Kind::kArithmeticProgression);
    MonicPoly modulus = parse_poly(parts[0], field);
    if (modulus.degree() == 0 || !is_irreducible(modulus)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "subset '" + text + "': AP modulus must be irreducible");
    }
    Poly residue = mod(parse_any_poly(parts[1], field), modulus.poly());
    if (residue.is_zero()) {
      throw Error(ErrorKind::kInvalidArgument,
                  "subset '" + text + "': residue is not coprime to the modulus");
    }
    // Units of GF(q)[T]/(M) for irreducible M number q^{deg M} - 1.
    s.density_ = Rational(1, big_pow(field.q(), modulus.degree()) - 1);
    s.ap_modulus_ = modulus.poly();
    s.ap_residue_ = std::move(residue);
    return s;
  }
  if (head == "bernoulli") {
    PrimeSubset s(field, text, Kind::kBernoulli);
    const Rational rho = parse_rational(parts[0]);
    if (rho < 0 || rho > 1) throw malformed("rho must lie in [0, 1]");
    s.seed_ = parse_count(parts[1], text);
    if (rho == 1) {
      s.all_below_ = true;
    } else {
      BigInt scaled = rho.get_num() * big_pow(2, 64) / rho.get_den();
      s.threshold_ = scaled.get_ui();
      if (sizeof(unsigned long) < 8) throw malformed("64-bit platform required");
    }
    s.density_ = rho;
    return s;
  }
  if (head == "degmod") {
    PrimeSubset s(field, text, Kind::kDegreeMod);
    s.deg_residue_ = static_cast<unsigned>(parse_count(parts[0], text));
    s.deg_modulus_ = static_cast<unsigned>(parse_count(parts[1], text));
    if (s.deg_modulus_ == 0 || s.deg_residue_ >= s.deg_modulus_) {
      throw malformed("degmod needs 0 <= r < m");
    }
    return s;
  }
  throw malformed("unknown subset kind");
}

bool PrimeSubset::contains(const MonicPoly& prime) const {
  switch (kind_) {
    case Kind::kAll: return true;
    case Kind::kNone: return false;
    case Kind::kList: return std::binary_search(list_.begin(), list_.end(), prime);
    case Kind::kArithmeticProgression: return mod(prime.poly(), *ap_modulus_) == *ap_residue_;
    case Kind::kBernoulli:
      return all_below_ || keyed_hash(prime.to_string(), seed_) < threshold_;
    case Kind::kDegreeMod: return prime.degree() % deg_modulus_ == deg_residue_;
  }
  return false;
}

const Rational& PrimeSubset::require_density() const {
  if (!density_) {
    throw Error(ErrorKind::kDensityUndefined,
                "subset '" + text_ + "' has no natural density");
  }
  return *density_;
}

BoundSubset::BoundSubset(const PrimeSubset& subset, const PrimeTable& table)
    : subset_(&subset), flags_(table.max_degree() + 1) {
  if (&subset.field() != &table.field()) {
    throw Error(ErrorKind::kFieldMismatch, "subset and table use different fields");
  }
  for (unsigned d = 1; d <= table.max_degree(); ++d) {
    const auto& list = table.primes(d);
    flags_[d].resize(list.size());
    for (std::size_t i = 0; i < list.size(); ++i) flags_[d][i] = subset.contains(list[i]) ? 1 : 0;
  }
}

std::uint64_t pi_S(const PrimeMembership& subset, unsigned n, const PrimeTable& table) {
  table.require_degree(n, "pi_S");
  if (n == 0) return 0;
  const auto& list = table.primes(n);
  return static_cast<std::uint64_t>(
      std::count_if(list.begin(), list.end(), [&](const auto& p) { return subset.contains(p); }));
}

std::vector<DensityErrorRow> density_error_stats(const PrimeSubset& subset,
                                                 const PrimeTable& table) {
  const Rational delta = subset.require_density();
  const unsigned top = table.max_degree();
  std::vector<DensityErrorRow> rows;
  rows.reserve(top);
  Rational running;
  for (unsigned d = 1; d <= top; ++d) {
    const auto ps = pi_S(subset, d, table);
    const auto pp = table.count(d);
    Rational diff = Rational(to_big(ps)) - delta * to_big(pp);
    if (d == 1 || diff > running) running = diff;
    rows.push_back({d, ps, pp, running, Rational(0), top});
  }
  // v_S(d) = sup_{e >= d} e_S(e) / q^e, truncated at the table's top degree.
  Rational best;
  for (unsigned d = top; d >= 1; --d) {
    Rational ratio = rows[d - 1].e_s / big_pow(table.field().q(), d);
    if (d == top || ratio > best) best = ratio;
    rows[d - 1].v_s = best;
  }
  return rows;
}

}  // namespace ffmu
