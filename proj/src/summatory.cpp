#include "ffmu/summatory.hpp"

#include <cmath>
#include <limits>

#include "ffmu/error.hpp"

namespace ffmu {

const char* to_string(SeriesWeight w) {
  return w == SeriesWeight::kMu ? "mu" : "mu_omega";
}

std::string to_string(const Restriction& r) {
  switch (r.kind) {
    case Restriction::Kind::kNone: return "none";
    case Restriction::Kind::kDS: return "D_S";
    case Restriction::Kind::kDelta1Eq: return "delta1_eq_" + std::to_string(r.n);
    case Restriction::Kind::kDelta1Ge: return "delta1_ge_" + std::to_string(r.n);
  }
  return "unknown";
}

const char* to_string(CountMethod m) {
  return m == CountMethod::kEnumeration ? "enumeration" : "recurrence";
}

const Rational& SeriesLedger::at(unsigned x) const {
  const auto it = partials.find(x);
  if (it == partials.end()) {
    throw Error(ErrorKind::kDomain, "series ledger has no partial sum at x=" + std::to_string(x));
  }
  return it->second;
}

Rational SeriesLedger::layer(unsigned x) const {
  if (x >= layer_sums.size()) throw Error(ErrorKind::kDomain, "layer outside ledger");
  Rational out(to_big(layer_sums[x]), big_pow(q, x));
  out.canonicalize();
  return out;
}

namespace {

unsigned distinct_degrees(const Factorization& f) {
  unsigned count = 0;
  unsigned last = 0;
  for (const auto& pp : f.factors) {
    if (pp.prime->degree != last) {
      ++count;
      last = pp.prime->degree;
    }
  }
  return count;
}

bool admits_constant(const Restriction& r) {
  return r.kind == Restriction::Kind::kNone || r.kind == Restriction::Kind::kDelta1Ge;
}

}  // namespace

SeriesLedger partial_sum(SeriesWeight weight, const Restriction& restriction,
                         const PrimeSubset& subset, const PrimeTable& table, unsigned x,
                         const RunOptions& options, std::optional<bool> include_constant) {
  if (&subset.field() != &table.field()) {
    throw Error(ErrorKind::kFieldMismatch, "subset and table use different fields");
  }
  table.require_degree(x, "partial_sum");
  check_ceiling(table.field(), x, options);
  SeriesLedger ledger;
  ledger.q = table.field().q();
  ledger.subset = subset.text();
  ledger.weight = weight;
  ledger.restriction = restriction;
  ledger.include_constant = include_constant.value_or(weight == SeriesWeight::kMu);
  ledger.layer_sums.assign(x + 1, 0);
  if (ledger.include_constant && admits_constant(restriction) && weight == SeriesWeight::kMu) {
    ledger.layer_sums[0] = 1;
  }

  const BoundSubset bound(subset, table);
  const LayerVisitor visit = [&](const Factorization& f, std::span<std::int64_t> acc) {
    const unsigned low = f.factors.front().prime->degree;
    switch (restriction.kind) {
      case Restriction::Kind::kNone: break;
      case Restriction::Kind::kDS:
        if (!in_D_S(f, bound)) return;
        break;
      case Restriction::Kind::kDelta1Eq:
        if (low != restriction.n) return;
        break;
      case Restriction::Kind::kDelta1Ge:
        if (low < restriction.n) return;
        break;
    }
    const std::int64_t mu = f.factors.size() % 2 == 0 ? 1 : -1;
    acc[0] += weight == SeriesWeight::kMu ? mu : mu * distinct_degrees(f);
  };

  Rational running = ledger.layer_sums[0];
  for (unsigned d = 1; d <= x; ++d) {
    ledger.layer_sums[d] = accumulate_layer(table, {d, 1, true}, visit, options)[0];
    running += Rational(to_big(ledger.layer_sums[d]), big_pow(ledger.q, d));
    running.canonicalize();
    ledger.partials.emplace(d, running);
  }
  return ledger;
}

BigInt w_count_enum(const PrimeTable& table, unsigned x, const RunOptions& options) {
  if (x == 0) throw Error(ErrorKind::kDomain, "W(x) needs x >= 1");
  table.require_degree(x, "w_count_enum");
  const auto acc = accumulate_layer(
      table, {x, 1, false},
      [](const Factorization& f, std::span<std::int64_t> a) {
        if (distinct_degrees(f) == 1) ++a[0];
      },
      options);
  return to_big(acc[0]);
}

BigInt w_count_formula(std::uint64_t q, unsigned x) {
  if (x == 0) throw Error(ErrorKind::kDomain, "W(x) needs x >= 1");
  BigInt total = 0;
  for (unsigned d = 1; d <= x; ++d) {
    if (x % d != 0) continue;
    const BigInt pi = prime_count_exact(q, d);
    const unsigned t = x / d;
    BigInt c;
    // C(pi + t - 1, t)
    mpz_bin_ui(c.get_mpz_t(), BigInt(pi + t - 1).get_mpz_t(), t);
    total += c;
  }
  return total;
}

IdentityCheck finite_landau2_identity(const PrimeTable& table, unsigned x,
                                      const RunOptions& options) {
  const PrimeSubset all = PrimeSubset::parse("all", table.field());
  IdentityCheck out;
  out.lhs = partial_sum(SeriesWeight::kMuOmega, Restriction::none(), all, table, x, options).at(x);
  out.rhs = Rational(-w_count_formula(table.field().q(), x), big_pow(table.field().q(), x));
  out.rhs.canonicalize();
  out.equal = out.lhs == out.rhs;
  return out;
}

namespace {

// Coefficients of prod_{d <= m} (1 - u^d)^{-pi(d)} up to u^n.
std::vector<BigInt> smooth_series(std::uint64_t q, unsigned n, unsigned m) {
  std::vector<BigInt> c(n + 1, 0);
  c[0] = 1;
  for (unsigned d = 1; d <= std::min(m, n); ++d) {
    const BigInt pi = prime_count_exact(q, d);
    std::vector<BigInt> next(n + 1, 0);
    for (unsigned j = 0; j <= n; ++j) {
      if (c[j] == 0) continue;
      for (unsigned t = 0; j + t * d <= n; ++t) {
        BigInt coeff;
        mpz_bin_ui(coeff.get_mpz_t(), BigInt(pi + t - 1).get_mpz_t(), t);
        if (t == 0) coeff = 1;
        next[j + t * d] += c[j] * coeff;
      }
    }
    c = std::move(next);
  }
  return c;
}

BigInt psi2_from_series(std::uint64_t q, unsigned n, unsigned m, const std::vector<BigInt>& c) {
  BigInt total = c[n];
  for (unsigned top = m + 1; top <= n; ++top) {
    const BigInt pi = prime_count_exact(q, top);
    for (unsigned t = 1; t * top <= n; ++t) {
      BigInt multisets;
      mpz_bin_ui(multisets.get_mpz_t(), BigInt(pi + t - 1).get_mpz_t(), t);
      total += multisets * c[n - t * top];
    }
  }
  return total;
}

}  // namespace

BigInt psi1_recurrence(std::uint64_t q, unsigned n, unsigned m) {
  return smooth_series(q, n, m)[n];
}

BigInt psi2_recurrence(std::uint64_t q, unsigned n, unsigned m) {
  return psi2_from_series(q, n, m, smooth_series(q, n, m));
}

SmoothTable smooth_table_recurrence(std::uint64_t q, unsigned n) {
  SmoothTable out{n, {}, {}};
  for (unsigned m = 0; m <= n; ++m) {
    const auto c = smooth_series(q, n, m);
    out.psi1.push_back(c[n]);
    out.psi2.push_back(psi2_from_series(q, n, m, c));
  }
  return out;
}

SmoothTable smooth_table_enum(const PrimeTable& table, unsigned n, const RunOptions& options) {
  table.require_degree(n, "smooth_table_enum");
  const std::size_t width = 2 * (static_cast<std::size_t>(n) + 1);
  const auto acc = accumulate_layer(
      table, {n, width, false},
      [n](const Factorization& f, std::span<std::int64_t> a) {
        const DegreeData dd(f);
        ++a[dd.omega() == 0 ? 0 : dd.largest(1)];
        ++a[n + 1 + (dd.omega() < 2 ? 0 : dd.largest(2))];
      },
      options);
  SmoothTable out{n, {}, {}};
  std::int64_t run1 = 0;
  std::int64_t run2 = 0;
  for (unsigned m = 0; m <= n; ++m) {
    run1 += acc[m];
    run2 += acc[n + 1 + m];
    out.psi1.push_back(to_big(run1));
    out.psi2.push_back(to_big(run2));
  }
  return out;
}

SmoothCount psi1(const PrimeTable& table, unsigned n, unsigned m, CountMethod method,
                 const RunOptions& options) {
  if (method == CountMethod::kRecurrence) {
    return {n, m, psi1_recurrence(table.field().q(), n, m), method};
  }
  const auto t = smooth_table_enum(table, n, options);
  return {n, m, t.psi1[std::min(m, n)], method};
}

SmoothCount psi2(const PrimeTable& table, unsigned n, unsigned m, CountMethod method,
                 const RunOptions& options) {
  if (method == CountMethod::kRecurrence) {
    return {n, m, psi2_recurrence(table.field().q(), n, m), method};
  }
  const auto t = smooth_table_enum(table, n, options);
  return {n, m, t.psi2[std::min(m, n)], method};
}

Psi2BoundReport psi2_bound_diagnostic(std::uint64_t q, unsigned n, unsigned m, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorKind::kDomain, "epsilon must lie in (0, 1)");
  }
  if (n == 0) throw Error(ErrorKind::kDomain, "psi2 bound needs n >= 1");
  Psi2BoundReport r{};
  r.n = n;
  r.m = m;
  r.epsilon = epsilon;
  const auto c = smooth_series(q, n, m);
  r.psi1 = c[n];
  r.psi2 = psi2_from_series(q, n, m, c);
  const double qn = std::pow(static_cast<double>(q), n);
  r.psi2_bound = qn / std::pow(static_cast<double>(n), epsilon) + qn * m / n;
  r.psi2_ratio = r.psi2.get_d() / r.psi2_bound;
  r.psi1_bound = m == 0 ? 0.0 : qn * m * std::exp(-static_cast<double>(n) / m);
  r.psi1_ratio = m == 0 ? std::numeric_limits<double>::quiet_NaN() : r.psi1.get_d() / r.psi1_bound;
  return r;
}

BigInt multi_top_count(const PrimeTable& table, unsigned n, const RunOptions& options) {
  table.require_degree(n, "multi_top_count");
  const auto acc = accumulate_layer(
      table, {n, 1, false},
      [](const Factorization& f, std::span<std::int64_t> a) {
        const auto& fs = f.factors;
        if (fs.size() >= 2 && fs[fs.size() - 1].prime->degree == fs[fs.size() - 2].prime->degree) {
          ++a[0];
        }
      },
      options);
  return to_big(acc[0]);
}

std::vector<BigInt> q_sums(const PrimeTable& table, const PrimeSubset& subset, unsigned n,
                           unsigned k_max, const RunOptions& options) {
  if (k_max == 0) throw Error(ErrorKind::kDomain, "k_max must be >= 1");
  table.require_degree(n, "q_sum");
  std::vector<BigInt> out(k_max, 0);
  if (n == 0) return out;
  const BoundSubset bound(subset, table);
  const auto acc = accumulate_layer(
      table, {n, k_max, false},
      [&bound, k_max](const Factorization& f, std::span<std::int64_t> a) {
        for (unsigned k = 1; k <= k_max; ++k) a[k - 1] += q_S_k(f, bound, k);
      },
      options);
  for (unsigned k = 0; k < k_max; ++k) out[k] = to_big(acc[k]);
  return out;
}

BigInt q_sum(const PrimeTable& table, const PrimeSubset& subset, unsigned k, unsigned n,
             const RunOptions& options) {
  if (k == 0) throw Error(ErrorKind::kDomain, "k must be >= 1");
  return q_sums(table, subset, n, k, options)[k - 1];
}

IdentityCheck equivalence_identity(const PrimeTable& table, const PrimeSubset& subset, unsigned n,
                                   const RunOptions& options) {
  if (n == 0) throw Error(ErrorKind::kDomain, "equivalence identity needs n >= 1");
  IdentityCheck out;
  out.lhs = partial_sum(SeriesWeight::kMuOmega, Restriction::d_s(), subset, table, n, options)
                .at(n);
  const auto sums = q_sums(table, subset, n, 2, options);
  out.rhs = Rational(sums[1] - sums[0], big_pow(table.field().q(), n));
  out.rhs.canonicalize();
  out.equal = out.lhs == out.rhs;
  return out;
}

MertensReport mertens(std::uint64_t q, unsigned n) {
  MertensReport r{n, Rational(1), 0.0, std::numeric_limits<double>::quiet_NaN()};
  for (unsigned d = 1; d <= n; ++d) {
    const BigInt qd = big_pow(q, d);
    Rational factor(qd, qd - 1);
    factor.canonicalize();
    const BigInt pi = prime_count_exact(q, d);
    Rational power(1);
    mpz_pow_ui(power.get_num_mpz_t(), factor.get_num_mpz_t(), pi.get_ui());
    mpz_pow_ui(power.get_den_mpz_t(), factor.get_den_mpz_t(), pi.get_ui());
    r.product *= power;
  }
  r.product.canonicalize();
  if (n >= 1) {
    r.reference = n * std::exp(kEulerGamma);
    r.ratio = r.product.get_d() / r.reference;
  }
  return r;
}

std::vector<BigInt> euler_tail_layers(std::uint64_t q, unsigned lo, unsigned x) {
  std::vector<BigInt> c(x + 1, 0);
  c[0] = 1;
  for (unsigned d = std::max(lo, 1U); d <= x; ++d) {
    const BigInt pi = prime_count_exact(q, d);
    std::vector<BigInt> next(x + 1, 0);
    for (unsigned j = 0; j <= x; ++j) {
      if (c[j] == 0) continue;
      for (unsigned t = 0; j + t * d <= x; ++t) {
        BigInt choose;
        mpz_bin_ui(choose.get_mpz_t(), pi.get_mpz_t(), t);
        if (choose == 0) break;
        next[j + t * d] += (t % 2 == 0 ? 1 : -1) * c[j] * choose;
      }
    }
    c = std::move(next);
  }
  return c;
}

}  // namespace ffmu
