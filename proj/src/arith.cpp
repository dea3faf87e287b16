#include "ffmu/arith.hpp"

#include <algorithm>
#include <map>

#include "ffmu/error.hpp"

namespace ffmu {

namespace {

struct SquarefreePart {
  Poly poly;
  unsigned multiplicity;
};

Poly exact_div(const Poly& a, const Poly& b) { return divrem(a, b).quotient; }

// Squarefree factorization in characteristic p: a = prod part.poly^mult with
// every part squarefree and the parts pairwise coprime.
void squarefree_decompose(const Poly& f, unsigned scale, std::vector<SquarefreePart>& out) {
  if (f.is_one()) return;
  const unsigned p = f.field().p();
  const Poly df = derivative(f);
  if (df.is_zero()) {
    squarefree_decompose(pth_root(f), scale * p, out);
    return;
  }
  Poly c = gcd(f, df);
  Poly w = exact_div(f, c);
  unsigned i = 1;
  while (!w.is_one()) {
    Poly y = gcd(w, c);
    Poly part = exact_div(w, y);
    if (!part.is_one()) out.push_back({std::move(part), i * scale});
    ++i;
    w = std::move(y);
    c = exact_div(c, w);
  }
  if (!c.is_one()) squarefree_decompose(pth_root(c), scale * p, out);
}

// Splits a squarefree monic z into (product of all degree-d primes, d).
std::vector<std::pair<Poly, unsigned>> distinct_degree_split(Poly z) {
  std::vector<std::pair<Poly, unsigned>> out;
  const Field& field = z.field();
  const Poly t = Poly::monomial(field, 1, 1);
  Poly h = mod(t, z);
  for (unsigned d = 1; *z.degree() >= 2 * d; ++d) {
    h = powmod(h, static_cast<std::uint64_t>(field.q()), z);
    Poly g = gcd(h - t, z);
    if (!g.is_one()) {
      z = exact_div(z, g);
      h = mod(h, z);
      out.emplace_back(std::move(g), d);
    }
  }
  if (*z.degree() > 0) {
    const auto d = static_cast<unsigned>(*z.degree());
    out.emplace_back(std::move(z), d);
  }
  return out;
}

const PrimeRecord& lookup(const PrimeTable& table, const Poly& p) {
  const PrimeRecord* rec = table.find(MonicPoly::from_poly(p));
  if (rec == nullptr) {
    throw Error(ErrorKind::kDomain, "factor " + format_digits(p) + " missing from prime table");
  }
  return *rec;
}

// g is a product of distinct primes of degree d; peel them off by trial
// division against the table.
void equal_degree_split(Poly g, unsigned d, const PrimeTable& table,
                        std::vector<const PrimeRecord*>& out) {
  std::size_t remaining = *g.degree() / d;
  if (remaining == 1) {
    out.push_back(&lookup(table, g));
    return;
  }
  for (const auto& rec : table.primes(d)) {
    auto [quo, rem] = divrem(g, rec.poly.poly());
    if (!rem.is_zero()) continue;
    out.push_back(&rec);
    g = std::move(quo);
    if (--remaining == 1) {
      out.push_back(&lookup(table, g));
      return;
    }
  }
  throw Error(ErrorKind::kDomain, "equal-degree split failed; table inconsistent");
}

bool by_degree_then_lex(const PrimePower& a, const PrimePower& b) {
  if (a.prime->degree != b.prime->degree) return a.prime->degree < b.prime->degree;
  return a.prime->ordinal < b.prime->ordinal;
}

}  // namespace

Factorization factor(const MonicPoly& a, const PrimeTable& table) {
  if (&a.field() != &table.field()) throw Error(ErrorKind::kFieldMismatch, "table field differs");
  table.require_degree(a.degree(), "factor");
  Factorization out{a, {}};
  if (a.is_one()) return out;
  std::vector<SquarefreePart> parts;
  squarefree_decompose(a.poly(), 1, parts);
  std::vector<const PrimeRecord*> primes;
  for (auto& part : parts) {
    primes.clear();
    for (auto& [g, d] : distinct_degree_split(std::move(part.poly))) {
      equal_degree_split(std::move(g), d, table, primes);
    }
    for (const auto* rec : primes) out.factors.push_back({rec, part.multiplicity});
  }
  std::sort(out.factors.begin(), out.factors.end(), by_degree_then_lex);
  // Parts are coprime, but merge defensively if a prime shows up twice.
  std::vector<PrimePower> merged;
  for (const auto& pp : out.factors) {
    if (!merged.empty() && merged.back().prime == pp.prime) {
      merged.back().multiplicity += pp.multiplicity;
    } else {
      merged.push_back(pp);
    }
  }
  out.factors = std::move(merged);
  return out;
}

bool is_squarefree(const MonicPoly& a) {
  if (a.degree() == 0) return true;
  const Poly df = derivative(a.poly());
  if (df.is_zero()) return false;
  return gcd(a.poly(), df).is_one();
}

MonicPoly expand(const Factorization& f) {
  Poly out = Poly::constant(f.input.field(), 1);
  for (const auto& pp : f.factors) {
    for (unsigned i = 0; i < pp.multiplicity; ++i) out = out * pp.prime->poly.poly();
  }
  return MonicPoly::from_poly(std::move(out));
}

int mobius(const Factorization& f) {
  for (const auto& pp : f.factors) {
    if (pp.multiplicity > 1) return 0;
  }
  return f.factors.size() % 2 == 0 ? 1 : -1;
}

int mobius(const MonicPoly& a, const PrimeTable& table) { return mobius(factor(a, table)); }

unsigned count_with_multiplicity(const Factorization& f) {
  unsigned total = 0;
  for (const auto& pp : f.factors) total += pp.multiplicity;
  return total;
}

DegreeData::DegreeData(const Factorization& f) {
  for (const auto& pp : f.factors) {
    if (degrees_.empty() || degrees_.back() != pp.prime->degree) {
      degrees_.push_back(pp.prime->degree);
      primes_.emplace_back();
    }
    primes_.back().push_back(pp.prime);
  }
}

unsigned DegreeData::largest(unsigned k) const {
  if (k == 0) throw Error(ErrorKind::kDomain, "rank k starts at 1");
  return k > omega() ? 0 : degrees_[degrees_.size() - k];
}

unsigned DegreeData::smallest(unsigned k) const {
  if (k == 0) throw Error(ErrorKind::kDomain, "rank k starts at 1");
  return k > omega() ? 0 : degrees_[k - 1];
}

std::span<const PrimeRecord* const> DegreeData::primes_of_degree(unsigned degree) const {
  const auto it = std::lower_bound(degrees_.begin(), degrees_.end(), degree);
  if (it == degrees_.end() || *it != degree) return {};
  return primes_[static_cast<std::size_t>(it - degrees_.begin())];
}

DegreeData degree_data(const Factorization& f) { return DegreeData(f); }

namespace {

void require_nonconstant(const Factorization& f, const char* what) {
  if (f.input.degree() == 0) {
    throw Error(ErrorKind::kDomain, std::string(what) + " needs a nonconstant polynomial");
  }
}

}  // namespace

std::vector<const PrimeRecord*> p_min_set(const Factorization& f) {
  require_nonconstant(f, "p_min_set");
  std::vector<const PrimeRecord*> out;
  const unsigned low = f.factors.front().prime->degree;
  for (const auto& pp : f.factors) {
    if (pp.prime->degree != low) break;
    out.push_back(pp.prime);
  }
  return out;
}

bool in_D_S(const Factorization& f, const PrimeMembership& subset) {
  require_nonconstant(f, "in_D_S");
  const auto& fs = f.factors;
  if (fs.size() >= 2 && fs[1].prime->degree == fs[0].prime->degree) return false;
  return subset.contains(*fs[0].prime);
}

unsigned q_S_k(const Factorization& f, const PrimeMembership& subset, unsigned k) {
  require_nonconstant(f, "q_S_k");
  if (k == 0) throw Error(ErrorKind::kDomain, "rank k starts at 1");
  // Walk distinct degrees from the top.
  unsigned rank = 0;
  unsigned current = 0;
  unsigned count = 0;
  for (auto it = f.factors.rbegin(); it != f.factors.rend(); ++it) {
    const unsigned d = it->prime->degree;
    if (d != current) {
      if (rank == k) break;
      current = d;
      ++rank;
    }
    if (rank == k && subset.contains(*it->prime)) ++count;
  }
  return rank == k ? count : 0;
}

std::vector<const PrimeRecord*> p_min_set(const MonicPoly& a, const PrimeTable& table) {
  return p_min_set(factor(a, table));
}

bool in_D_S(const MonicPoly& a, const PrimeMembership& subset, const PrimeTable& table) {
  return in_D_S(factor(a, table), subset);
}

unsigned q_S_k(const MonicPoly& a, const PrimeMembership& subset, unsigned k,
               const PrimeTable& table) {
  return q_S_k(factor(a, table), subset, k);
}

void for_each_divisor(const Factorization& f,
                      const std::function<void(std::span<const unsigned>)>& visit) {
  const std::size_t n = f.factors.size();
  std::vector<unsigned> exps(n, 0);
  while (true) {
    visit(exps);
    // Odometer with the last coordinate fastest gives lexicographic order.
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (exps[i] < f.factors[i].multiplicity) {
        ++exps[i];
        std::fill(exps.begin() + static_cast<std::ptrdiff_t>(i) + 1, exps.end(), 0U);
        break;
      }
      if (i == 0) return;
    }
    if (n == 0) return;
  }
}

MonicPoly divisor_from_exponents(const Factorization& f, std::span<const unsigned> exponents) {
  if (exponents.size() != f.factors.size()) {
    throw Error(ErrorKind::kInvalidArgument, "exponent vector length mismatch");
  }
  Poly out = Poly::constant(f.input.field(), 1);
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] > f.factors[i].multiplicity) {
      throw Error(ErrorKind::kInvalidArgument, "exponent exceeds multiplicity");
    }
    for (unsigned j = 0; j < exponents[i]; ++j) out = out * f.factors[i].prime->poly.poly();
  }
  return MonicPoly::from_poly(std::move(out));
}

}  // namespace ffmu
