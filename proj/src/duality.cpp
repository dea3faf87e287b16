#include "ffmu/duality.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <set>
#include <sstream>

#include "ffmu/error.hpp"

namespace ffmu {

namespace {

constexpr std::size_t kMaxLabels = 24;

// Signed counts sum mu(B) over squarefree sub-profiles B, keyed by what the
// identities read off B.
struct SubProfileTally {
  // by_omega[w] = sum of mu(B) over all B with Omega(B) = w.
  std::vector<std::int64_t> by_omega;
  // d_s[w][r] = sum of mu(B) over B in D(S) with Omega(B) = w and
  // delta_1(B) = degree_set()[r].
  std::vector<std::vector<std::int64_t>> d_s;
};

SubProfileTally tally(const DivisorProfile& a) {
  const auto& primes = a.primes();
  const std::size_t n = primes.size();
  if (n > kMaxLabels) {
    throw Error(ErrorKind::kInvalidArgument, "profile has too many primes to enumerate");
  }
  const auto& degrees = a.degree_set();
  const std::size_t m = degrees.size();
  std::vector<unsigned> rank(n);
  for (std::size_t i = 0; i < n; ++i) {
    rank[i] = static_cast<unsigned>(
        std::lower_bound(degrees.begin(), degrees.end(), primes[i].degree) - degrees.begin());
  }
  SubProfileTally t{std::vector<std::int64_t>(m + 1, 0),
                    std::vector<std::vector<std::int64_t>>(m + 1, std::vector<std::int64_t>(m, 0))};
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    std::uint64_t rank_mask = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1U) rank_mask |= std::uint64_t{1} << rank[i];
    }
    const int mu = std::popcount(mask) % 2 == 0 ? 1 : -1;
    const auto omega = static_cast<std::size_t>(std::popcount(rank_mask));
    t.by_omega[omega] += mu;
    if (rank_mask == 0) continue;
    const auto low = static_cast<unsigned>(std::countr_zero(rank_mask));
    int at_low = 0;
    bool low_in_s = false;
    for (std::size_t i = 0; i < n; ++i) {
      if ((mask >> i & 1U) && rank[i] == low) {
        ++at_low;
        low_in_s = primes[i].in_s;
      }
    }
    if (at_low == 1 && low_in_s) t.d_s[omega][low] += mu;
  }
  return t;
}

void check_domain(const DivisorProfile& a, const TabulatedFunction& f, unsigned top) {
  if (f.empty() || f.max_arg() < top) {
    throw Error(ErrorKind::kDomain,
                "weight table too short: needs values up to " + std::to_string(top) +
                    " for profile '" + a.to_string() + "'");
  }
}

}  // namespace

DivisorProfile::DivisorProfile(std::vector<Prime> primes) : primes_(std::move(primes)) {
  std::set<std::string> labels;
  std::set<unsigned> degrees;
  for (const auto& p : primes_) {
    if (p.degree == 0) throw Error(ErrorKind::kInvalidArgument, "prime degrees must be positive");
    if (p.multiplicity == 0) throw Error(ErrorKind::kInvalidArgument, "multiplicity must be >= 1");
    if (!labels.insert(p.label).second) {
      throw Error(ErrorKind::kInvalidArgument, "duplicate prime label '" + p.label + "'");
    }
    degrees.insert(p.degree);
  }
  degrees_.assign(degrees.begin(), degrees.end());
}

DivisorProfile DivisorProfile::from_factorization(const Factorization& f,
                                                  const PrimeMembership& subset) {
  std::vector<Prime> primes;
  primes.reserve(f.factors.size());
  for (const auto& pp : f.factors) {
    primes.push_back({pp.prime->poly.to_string(), pp.prime->degree, subset.contains(*pp.prime),
                      pp.multiplicity});
  }
  return DivisorProfile(std::move(primes));
}

DivisorProfile DivisorProfile::random(std::mt19937_64& rng, unsigned max_primes,
                                     unsigned max_degree, unsigned max_multiplicity) {
  // Plain modular reduction keeps the stream identical across standard libraries.
  const auto draw = [&rng](unsigned n) { return static_cast<unsigned>(rng() % n); };
  const unsigned count = 1 + draw(max_primes);
  std::vector<Prime> primes;
  for (unsigned i = 0; i < count; ++i) {
    const unsigned degree = 1 + draw(max_degree);
    const bool in_s = draw(2) == 1;
    const unsigned mult = 1 + draw(max_multiplicity);
    primes.push_back({"p" + std::to_string(i), degree, in_s, mult});
  }
  return DivisorProfile(std::move(primes));
}

DivisorProfile DivisorProfile::parse(const std::string& text) {
  std::istringstream in(text);
  std::string token;
  std::vector<Prime> primes;
  auto bad = [&](const std::string& why) {
    return Error(ErrorKind::kParse, "profile token '" + token + "': " + why);
  };
  auto number = [&](const std::string& s) -> unsigned {
    if (s.empty() || s.size() > 9 || s.find_first_not_of("0123456789") != std::string::npos) {
      throw bad("expected a positive integer");
    }
    return static_cast<unsigned>(std::stoul(s));
  };
  while (in >> token) {
    if (token.rfind("d:", 0) != 0) throw bad("expected 'd:<degree>'");
    std::string body = token.substr(2);
    unsigned mult = 1;
    if (const auto star = body.find('*'); star != std::string::npos) {
      mult = number(body.substr(star + 1));
      body = body.substr(0, star);
    }
    bool in_s = false;
    if (const auto comma = body.find(','); comma != std::string::npos) {
      const std::string flag = body.substr(comma + 1);
      if (flag == "S") {
        in_s = true;
      } else if (flag != "N") {
        throw bad("flag must be S or N");
      }
      body = body.substr(0, comma);
    }
    const unsigned degree = number(body);
    if (degree == 0 || mult == 0) throw bad("degree and multiplicity must be positive");
    primes.push_back({"p" + std::to_string(primes.size()), degree, in_s, mult});
  }
  return DivisorProfile(std::move(primes));
}

unsigned DivisorProfile::largest(unsigned k) const {
  if (k == 0) throw Error(ErrorKind::kDomain, "rank k starts at 1");
  return k > omega() ? 0 : degrees_[degrees_.size() - k];
}

unsigned DivisorProfile::smallest(unsigned k) const {
  if (k == 0) throw Error(ErrorKind::kDomain, "rank k starts at 1");
  return k > omega() ? 0 : degrees_[k - 1];
}

unsigned DivisorProfile::q_s(unsigned k) const {
  const unsigned d = largest(k);
  if (d == 0) return 0;
  return static_cast<unsigned>(std::count_if(primes_.begin(), primes_.end(), [&](const Prime& p) {
    return p.degree == d && p.in_s;
  }));
}

std::string DivisorProfile::to_string() const {
  std::string out;
  for (const auto& p : primes_) {
    if (!out.empty()) out.push_back(' ');
    out += "d:" + std::to_string(p.degree) + (p.in_s ? ",S" : ",N");
    if (p.multiplicity != 1) out += "*" + std::to_string(p.multiplicity);
  }
  return out;
}

TabulatedFunction TabulatedFunction::polynomial(const std::vector<BigInt>& coeffs,
                                                unsigned max_arg) {
  std::vector<Rational> values(max_arg + 1);
  for (unsigned x = 0; x <= max_arg; ++x) {
    BigInt acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    values[x] = Rational(acc);
  }
  return TabulatedFunction(std::move(values));
}

TabulatedFunction TabulatedFunction::constant(const Rational& c, unsigned max_arg) {
  return TabulatedFunction(std::vector<Rational>(max_arg + 1, c));
}

const Rational& TabulatedFunction::operator()(std::int64_t x) const {
  if (x < 0 || static_cast<std::uint64_t>(x) >= values_.size()) {
    throw Error(ErrorKind::kDomain, "function evaluated outside its table at " + std::to_string(x));
  }
  return values_[static_cast<std::size_t>(x)];
}

FWeight::FWeight(std::vector<Rational> from_one) {
  std::vector<Rational> values;
  values.reserve(from_one.size() + 1);
  values.emplace_back(0);
  for (auto& v : from_one) values.push_back(std::move(v));
  table_ = TabulatedFunction(std::move(values));
}

FWeight FWeight::from_table(const TabulatedFunction& f) {
  if (f.empty() || f(0) != 0) throw Error(ErrorKind::kDomain, "weight must satisfy f(0) = 0");
  return FWeight(f);
}

FWeight FWeight::zero(unsigned max_arg) {
  return FWeight(TabulatedFunction::constant(Rational(0), max_arg));
}

FWeight FWeight::indicator_positive(unsigned max_arg) {
  return FWeight(std::vector<Rational>(max_arg, Rational(1)));
}

FWeight FWeight::polynomial(const std::vector<BigInt>& coeffs, unsigned max_arg) {
  return from_table(TabulatedFunction::polynomial(coeffs, max_arg));
}

FWeight FWeight::parse(const std::string& expr, unsigned max_arg) {
  std::string s;
  for (char ch : expr) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  if (s == "zero" || s == "0") return zero(max_arg);
  if (s == "ind") return indicator_positive(max_arg);
  if (s.empty()) throw Error(ErrorKind::kParse, "empty weight expression");
  std::vector<BigInt> coeffs;
  std::size_t pos = 0;
  while (pos < s.size()) {
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (pos != 0) {
      throw Error(ErrorKind::kParse, "malformed weight expression '" + expr + "'");
    }
    std::size_t end = pos;
    while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
    std::string term = s.substr(pos, end - pos);
    pos = end;
    BigInt c = 1;
    std::size_t power = 0;
    const auto x = term.find('x');
    std::string head = x == std::string::npos ? term : term.substr(0, x);
    if (!head.empty() && head.back() == '*') head.pop_back();
    if (!head.empty()) {
      if (head.find_first_not_of("0123456789") != std::string::npos) {
        throw Error(ErrorKind::kParse, "malformed weight term '" + term + "'");
      }
      c = BigInt(head);
    } else if (x == std::string::npos) {
      throw Error(ErrorKind::kParse, "empty weight term in '" + expr + "'");
    }
    if (x != std::string::npos) {
      const std::string tail = term.substr(x + 1);
      if (tail.empty()) {
        power = 1;
      } else if (tail.size() >= 2 && tail[0] == '^' &&
                 tail.find_first_not_of("0123456789", 1) == std::string::npos && tail.size() < 4) {
        power = std::stoul(tail.substr(1));
      } else {
        throw Error(ErrorKind::kParse, "malformed weight term '" + term + "'");
      }
    }
    if (coeffs.size() <= power) coeffs.resize(power + 1, 0);
    coeffs[power] += sign * c;
  }
  return polynomial(coeffs, max_arg);
}

Rational forward_difference(const TabulatedFunction& f, unsigned n, std::int64_t x) {
  Rational sum = 0;
  for (unsigned k = 0; k <= n; ++k) {
    const BigInt c = binomial(n, k);
    Rational term = f(x + k) * c;
    if ((n - k) % 2 == 1) {
      sum -= term;
    } else {
      sum += term;
    }
  }
  return sum;
}

Rational divisor_mobius_sum(const DivisorProfile& a, const TabulatedFunction& f) {
  check_domain(a, f, a.omega());
  const auto t = tally(a);
  Rational sum = 0;
  for (std::size_t w = 0; w < t.by_omega.size(); ++w) {
    if (t.by_omega[w] != 0) sum += f(static_cast<std::int64_t>(w)) * to_big(t.by_omega[w]);
  }
  return sum;
}

Rational divisor_mobius_closed_form(const DivisorProfile& a, const TabulatedFunction& f) {
  Rational d = forward_difference(f, a.omega(), 0);
  return a.omega() % 2 == 0 ? d : Rational(-d);
}

namespace {

// (w+1) w (w-1) ... (w-l)
BigInt rising_product(std::int64_t w, unsigned l) {
  BigInt out = 1;
  for (std::int64_t j = -1; j <= static_cast<std::int64_t>(l); ++j) out *= to_big(w - j);
  return out;
}

BigInt factorial(unsigned n) {
  BigInt out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

}  // namespace

BigInt falling_factorial_sum(const DivisorProfile& a, unsigned l) {
  const auto t = tally(a);
  BigInt sum = 0;
  for (std::size_t w = 0; w < t.by_omega.size(); ++w) {
    sum += rising_product(static_cast<std::int64_t>(w), l) * to_big(t.by_omega[w]);
  }
  return sum;
}

BigInt falling_factorial_closed_form(const DivisorProfile& a, unsigned l) {
  const unsigned w = a.omega();
  const int sign = w % 2 == 0 ? 1 : -1;
  if (w >= 1 && l == w - 1) return sign * factorial(w + 1);
  if (w >= 2 && l == w - 2) return sign * factorial(w);
  return 0;
}

namespace {

Rational weighted_d_s_sum(const DivisorProfile& a, const FWeight& f, std::int64_t top,
                          std::int64_t choose) {
  check_domain(a, f.table(), a.max_degree());
  const auto t = tally(a);
  const auto& degrees = a.degree_set();
  Rational sum = 0;
  for (std::size_t w = 1; w < t.d_s.size(); ++w) {
    const BigInt c = binomial(static_cast<std::int64_t>(w) + top, choose);
    if (c == 0) continue;
    for (std::size_t r = 0; r < degrees.size(); ++r) {
      if (t.d_s[w][r] == 0) continue;
      sum += f(degrees[r]) * c * to_big(t.d_s[w][r]);
    }
  }
  return sum;
}

}  // namespace

Rational duality_lhs(const DivisorProfile& a, const FWeight& f, unsigned k) {
  if (k == 0) throw Error(ErrorKind::kDomain, "duality order k starts at 1");
  return weighted_d_s_sum(a, f, -1, static_cast<std::int64_t>(k) - 1);
}

Rational duality_rhs(const DivisorProfile& a, const FWeight& f, unsigned k) {
  if (k == 0) throw Error(ErrorKind::kDomain, "duality order k starts at 1");
  const unsigned top = a.largest(k);
  check_domain(a, f.table(), top);
  Rational out = f(top) * a.q_s(k);
  return k % 2 == 0 ? out : Rational(-out);
}

Rational pascal_weighted_sum(const DivisorProfile& a, const FWeight& f, unsigned r) {
  return weighted_d_s_sum(a, f, 0, r);
}

DualityReport verify_duality(const DivisorProfile& a, const FWeight& f, unsigned k_max) {
  if (k_max == 0) throw Error(ErrorKind::kDomain, "k_max must be >= 1");
  DualityReport report{a.to_string(), {}, true};
  for (unsigned k = 1; k <= k_max; ++k) {
    DualityRow row{k, duality_lhs(a, f, k), duality_rhs(a, f, k), false};
    row.equal = row.lhs == row.rhs;
    report.passed = report.passed && row.equal;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace ffmu
