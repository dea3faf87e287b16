#include <cmath>
#include <random>

#include "doctest.h"
#include "duality_oracle.hpp"
#include "ffmu/summatory.hpp"
#include "support.hpp"

using namespace ffmu;

namespace {

const PrimeTable& table2() {
  static const PrimeTable t(Field::get(2), 12);
  return t;
}

const oracle::Gf2World& world() {
  static const oracle::Gf2World w(12);
  return w;
}

RunOptions serial() {
  RunOptions o;
  o.mode = Execution::kSerial;
  return o;
}

struct Shape {
  int mu;
  std::vector<unsigned> degrees;
  std::vector<std::pair<std::uint64_t, unsigned>> factors;
};

Shape shape(std::uint64_t a) {
  const auto& f = world().factors(a);
  const auto st = oracle::stats(f, [](std::uint64_t p) { return oracle::deg2(p); });
  return {st.mu, st.degrees, f};
}

// Q_S^(k) from the bitmask factorization.
long q_k(std::uint64_t a, unsigned k, const oracle::PrimePred& in_s) {
  const auto s = shape(a);
  if (k > s.degrees.size()) return 0;
  const unsigned dk = s.degrees[s.degrees.size() - k];
  long q = 0;
  for (const auto& [p, m] : s.factors) q += (oracle::deg2(p) == static_cast<int>(dk) && in_s(p)) ? 1 : 0;
  return q;
}

oracle::PrimePred pred(const PrimeSubset& s) {
  return [&s](std::uint64_t p) { return s.contains(parse_poly(oracle::str2(p), s.field())); };
}

}  // namespace

TEST_CASE("series examples") {
  const auto& t = table2();
  const auto all = PrimeSubset::parse("all", t.field());
  const auto mu = partial_sum(SeriesWeight::kMu, Restriction::none(), all, t, 12);
  for (unsigned x = 1; x <= 12; ++x) CHECK(mu.at(x) == 0);
  CHECK(mu.include_constant);
  const auto no_const =
      partial_sum(SeriesWeight::kMu, Restriction::none(), all, t, 6, {}, false);
  for (unsigned x = 1; x <= 6; ++x) CHECK(no_const.at(x) == -1);
  CHECK(partial_sum(SeriesWeight::kMuOmega, Restriction::d_s(), all, t, 2).at(2) == Rational(-5, 4));
  CHECK(partial_sum(SeriesWeight::kMuOmega, Restriction::delta1_eq(5), all, t, 4).at(4) == 0);
  CHECK(support::error_kind([&] { mu.at(13); }) == ErrorKind::kDomain);
  CHECK(support::error_kind([&] {
          partial_sum(SeriesWeight::kMu, Restriction::none(), all, t, 13);
        }) == ErrorKind::kTableTooSmall);
}

TEST_CASE("partial sums agree with brute force over GF(2)") {
  const auto& t = table2();
  const Field& f = t.field();
  const std::vector<std::pair<Restriction, const char*>> cases{
      {Restriction::none(), "all"},          {Restriction::d_s(), "all"},
      {Restriction::d_s(), "ap:111:1"},      {Restriction::d_s(), "list:T"},
      {Restriction::d_s(), "bernoulli:1/2:42"}, {Restriction::delta1_eq(1), "all"},
      {Restriction::delta1_eq(3), "all"},    {Restriction::delta1_ge(2), "all"},
      {Restriction::delta1_ge(4), "all"}};
  const unsigned x_max = 10;
  for (const auto& [restr, spec] : cases) {
    const auto subset = PrimeSubset::parse(spec, f);
    const auto in_s = pred(subset);
    for (auto weight : {SeriesWeight::kMu, SeriesWeight::kMuOmega}) {
      CAPTURE(spec);
      CAPTURE(to_string(restr));
      CAPTURE(to_string(weight));
      const auto ledger = partial_sum(weight, restr, subset, t, x_max, {}, false);
      Rational expected = 0;
      for (unsigned x = 1; x <= x_max; ++x) {
        for (std::uint64_t a = std::uint64_t{1} << x; a < (std::uint64_t{2} << x); ++a) {
          const auto s = shape(a);
          if (s.mu == 0) continue;
          const unsigned low = s.degrees.front();
          bool ok = true;
          switch (restr.kind) {
            case Restriction::Kind::kNone: break;
            case Restriction::Kind::kDS: {
              unsigned at_min = 0;
              std::uint64_t pmin = 0;
              for (const auto& [p, m] : s.factors) {
                if (oracle::deg2(p) == static_cast<int>(low)) {
                  ++at_min;
                  pmin = p;
                }
              }
              ok = at_min == 1 && in_s(pmin);
              break;
            }
            case Restriction::Kind::kDelta1Eq: ok = low == restr.n; break;
            case Restriction::Kind::kDelta1Ge: ok = low >= restr.n; break;
          }
          if (!ok) continue;
          const long w = weight == SeriesWeight::kMu ? s.mu : s.mu * static_cast<long>(s.degrees.size());
          expected += Rational(w, 1L << x);
        }
        expected.canonicalize();
        REQUIRE(ledger.at(x) == expected);
        const Rational prev = x == 1 ? Rational(0) : ledger.at(x - 1);
        REQUIRE(ledger.at(x) - prev == ledger.layer(x));
      }
    }
  }
}

TEST_CASE("landau2 identity") {
  const auto& t = table2();
  CHECK(finite_landau2_identity(t, 1).lhs == -1);
  const auto c4 = finite_landau2_identity(t, 4);
  CHECK(c4.lhs == Rational(-9, 16));
  CHECK(c4.rhs == Rational(-9, 16));
  for (unsigned x = 1; x <= 12; ++x) CHECK(finite_landau2_identity(t, x).equal);

  // q = 3 against a brute-force sum over GF(3) polynomials.
  const PrimeTable t3(Field::get(3), 6);
  const auto irr = oracle::irreduciblesp(6, 3);
  Rational brute = 0;
  for (int x = 1; x <= 6; ++x) {
    long layer = 0;
    for (std::uint64_t idx = 0; idx < oracle::ipow(3, x); ++idx) {
      const auto st = oracle::stats(oracle::factorp(oracle::monic_p(x, idx, 3), irr, 3),
                                    [](const oracle::PolyP& p) { return p.size() - 1; });
      layer += st.mu * static_cast<long>(st.degrees.size());
    }
    brute += Rational(layer, static_cast<long>(oracle::ipow(3, x)));
    brute.canonicalize();
    const auto check = finite_landau2_identity(t3, x);
    CAPTURE(x);
    CHECK(check.equal);
    CHECK(check.lhs == brute);
  }
}

TEST_CASE("W counts") {
  const auto& t = table2();
  for (std::uint32_t q : {2U, 3U, 4U, 5U}) CHECK(w_count_formula(q, 1) == q);
  CHECK(w_count_enum(t, 4) == 9);
  CHECK(w_count_formula(2, 4) == 9);
  for (unsigned x = 1; x <= 12; ++x) {
    long brute = 0;
    for (std::uint64_t a = std::uint64_t{1} << x; a < (std::uint64_t{2} << x); ++a) {
      brute += shape(a).degrees.size() == 1 ? 1 : 0;
    }
    CAPTURE(x);
    CHECK(w_count_enum(t, x) == brute);
    CHECK(w_count_formula(2, x) == brute);
  }
  // Stars and bars from the test-side prime count.
  for (std::uint64_t q : {2, 3}) {
    for (unsigned x = 1; x <= 16; ++x) {
      std::uint64_t total = 0;
      for (unsigned d = 1; d <= x; ++d) {
        if (x % d != 0) continue;
        total += oracle::binom(oracle::divisor_count_formula(q, d) + x / d - 1, x / d);
      }
      CHECK(w_count_formula(q, x) == to_big(total));
    }
  }
  const PrimeTable t3(Field::get(3), 7);
  for (unsigned x = 1; x <= 7; ++x) CHECK(w_count_enum(t3, x) == w_count_formula(3, x));
}

TEST_CASE("smooth counts") {
  const auto& t = table2();
  CHECK(psi1(t, 4, 1, CountMethod::kRecurrence).value == 5);
  CHECK(psi1(t, 4, 1, CountMethod::kEnumeration).value == 5);
  CHECK(psi2(t, 5, 1, CountMethod::kRecurrence).value == 30);
  CHECK(psi2(t, 5, 1, CountMethod::kEnumeration).value == 30);
  for (unsigned n = 0; n <= 12; ++n) {
    const auto en = smooth_table_enum(t, n);
    const auto rec = smooth_table_recurrence(2, n);
    CAPTURE(n);
    REQUIRE(en.psi1 == rec.psi1);
    REQUIRE(en.psi2 == rec.psi2);
    for (unsigned m = 0; m <= n; ++m) {
      CHECK(rec.psi1[m] <= rec.psi2[m]);
      CHECK(rec.psi2[m] <= big_pow(2, n));
      if (m > 0) CHECK(rec.psi1[m - 1] <= rec.psi1[m]);
      if (2 * m >= n) CHECK(rec.psi2[m] == big_pow(2, n));
    }
    CHECK(rec.psi1[n] == big_pow(2, n));
    if (n >= 1) {
      std::vector<long> p1(n + 1, 0), p2(n + 1, 0);
      for (std::uint64_t a = std::uint64_t{1} << n; a < (std::uint64_t{2} << n); ++a) {
        const auto& d = shape(a).degrees;
        const unsigned top = d.back();
        const unsigned second = d.size() >= 2 ? d[d.size() - 2] : 0;
        for (unsigned m = top; m <= n; ++m) ++p1[m];
        for (unsigned m = second; m <= n; ++m) ++p2[m];
      }
      for (unsigned m = 0; m <= n; ++m) {
        CHECK(rec.psi1[m] == p1[m]);
        CHECK(rec.psi2[m] == p2[m]);
      }
    }
  }
  const PrimeTable t3(Field::get(3), 7);
  for (unsigned n = 0; n <= 7; ++n) {
    const auto en = smooth_table_enum(t3, n);
    const auto rec = smooth_table_recurrence(3, n);
    CHECK(en.psi1 == rec.psi1);
    CHECK(en.psi2 == rec.psi2);
  }
}

TEST_CASE("psi2 bound diagnostic is advisory") {
  const auto r = psi2_bound_diagnostic(2, 12, 3);
  CHECK(r.epsilon == 0.5);
  CHECK(r.psi2 == psi2_recurrence(2, 12, 3));
  CHECK(r.psi2_ratio == doctest::Approx(r.psi2.get_d() / r.psi2_bound));
  CHECK(support::error_kind([] { psi2_bound_diagnostic(2, 8, 2, 1.0); }) == ErrorKind::kDomain);
  CHECK(support::error_kind([] { psi2_bound_diagnostic(2, 8, 2, 0.0); }) == ErrorKind::kDomain);
}

TEST_CASE("multiple top-degree primes") {
  const auto& t = table2();
  CHECK(multi_top_count(t, 1) == 0);
  CHECK(multi_top_count(t, 2) == 1);
  CHECK(multi_top_count(t, 3) == 2);
  for (unsigned n = 1; n <= 11; ++n) {
    long brute = 0;
    for (std::uint64_t a = std::uint64_t{1} << n; a < (std::uint64_t{2} << n); ++a) {
      const auto s = shape(a);
      int top = 0;
      for (const auto& [p, m] : s.factors) top += oracle::deg2(p) == static_cast<int>(s.degrees.back());
      brute += top >= 2 ? 1 : 0;
    }
    CHECK(multi_top_count(t, n) == brute);
  }
}

TEST_CASE("Q sums and the equivalence identity") {
  const auto& t = table2();
  const Field& f = t.field();
  const auto all = PrimeSubset::parse("all", f);
  CHECK(q_sum(t, all, 1, 1) == 2);
  CHECK(q_sum(t, all, 1, 2) == 5);
  CHECK(q_sum(t, all, 2, 2) == 0);
  const auto eq2 = equivalence_identity(t, all, 2);
  CHECK(eq2.lhs == Rational(-5, 4));
  CHECK(eq2.rhs == Rational(-5, 4));
  const auto none = PrimeSubset::parse("none", f);
  for (unsigned n = 1; n <= 8; ++n) {
    const auto c = equivalence_identity(t, none, n);
    CHECK(c.lhs == 0);
    CHECK(c.rhs == 0);
  }
  for (const char* spec : {"all", "ap:111:1", "list:T", "bernoulli:1/2:42"}) {
    const auto s = PrimeSubset::parse(spec, f);
    const auto in_s = pred(s);
    for (unsigned n = 1; n <= 10; ++n) {
      CAPTURE(spec);
      CAPTURE(n);
      const auto sums = q_sums(t, s, n, 3);
      for (unsigned k = 1; k <= 3; ++k) {
        long brute = 0;
        for (std::uint64_t a = std::uint64_t{1} << n; a < (std::uint64_t{2} << n); ++a) {
          brute += q_k(a, k, in_s);
        }
        CHECK(sums[k - 1] == brute);
      }
      CHECK(equivalence_identity(t, s, n).equal);
    }
  }
}

TEST_CASE("Mertens products") {
  CHECK(mertens(2, 0).product == 1);
  CHECK(std::isnan(mertens(2, 0).ratio));
  CHECK(mertens(2, 1).product == 4);
  CHECK(mertens(2, 2).product == Rational(16, 3));
  for (unsigned n = 1; n <= 10; ++n) CHECK(mertens(3, n).product > 1);
  // Independent floating evaluation of the same product.
  double log_product = 0;
  for (unsigned d = 1; d <= 16; ++d) {
    log_product += static_cast<double>(oracle::divisor_count_formula(2, d)) *
                   -std::log1p(-std::pow(2.0, -static_cast<double>(d)));
  }
  const auto r = mertens(2, 16);
  CHECK(r.product.get_d() == doctest::Approx(std::exp(log_product)).epsilon(1e-12));
  CHECK(r.ratio == doctest::Approx(std::exp(log_product) / (16 * std::exp(0.5772156649015329))));
}

TEST_CASE("tails telescope and match the truncated Euler product") {
  const auto& t = table2();
  const auto all = PrimeSubset::parse("all", t.field());
  for (unsigned n = 1; n <= 4; ++n) {
    const auto ge = partial_sum(SeriesWeight::kMuOmega, Restriction::delta1_ge(n), all, t, 12);
    const auto ge1 = partial_sum(SeriesWeight::kMuOmega, Restriction::delta1_ge(n + 1), all, t, 12);
    const auto eq = partial_sum(SeriesWeight::kMuOmega, Restriction::delta1_eq(n), all, t, 12);
    for (unsigned x = 1; x <= 12; ++x) CHECK(ge.at(x) - ge1.at(x) == eq.at(x));
  }
  for (unsigned k = 0; k <= 4; ++k) {
    const auto tail = partial_sum(SeriesWeight::kMu, Restriction::delta1_ge(k + 1), all, t, 12);
    const auto euler = euler_tail_layers(2, k + 1, 12);
    for (unsigned j = 0; j <= 12; ++j) {
      CAPTURE(k);
      CAPTURE(j);
      CHECK(to_big(tail.layer_sums[j]) == euler[j]);
    }
  }
}

TEST_CASE("serial and parallel kernels agree") {
  const auto& t = table2();
  const auto ap = PrimeSubset::parse("ap:111:1", t.field());
  for (int workers : {1, 2, 3, 5}) {
    RunOptions par;
    par.workers = workers;
    const auto a = partial_sum(SeriesWeight::kMuOmega, Restriction::d_s(), ap, t, 12, par);
    const auto b = partial_sum(SeriesWeight::kMuOmega, Restriction::d_s(), ap, t, 12, serial());
    CHECK(a.layer_sums == b.layer_sums);
    CHECK(q_sums(t, ap, 12, 2, par) == q_sums(t, ap, 12, 2, serial()));
    CHECK(smooth_table_enum(t, 11, par).psi2 == smooth_table_enum(t, 11, serial()).psi2);
  }
}

TEST_CASE("enumeration ceiling") {
  const auto& t = table2();
  const auto all = PrimeSubset::parse("all", t.field());
  RunOptions low;
  low.ceiling = 5;
  CHECK(support::error_kind([&] {
          partial_sum(SeriesWeight::kMu, Restriction::none(), all, t, 6, low);
        }) == ErrorKind::kCeilingExceeded);
  low.force = true;
  CHECK(partial_sum(SeriesWeight::kMu, Restriction::none(), all, t, 6, low).at(6) == 0);
  CHECK(default_ceiling(2) == 18);
  CHECK(default_ceiling(3) == 12);
  CHECK(default_ceiling(5) == 8);
  CHECK(default_ceiling(4) == 9);
}
