#include <cmath>
#include <sstream>

#include "doctest.h"
#include "ffmu/prime_store.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace ffmu;
using support::M;

namespace {

std::vector<std::string> strings(const std::vector<PrimeRecord>& list) {
  std::vector<std::string> out;
  for (const auto& r : list) out.push_back(r.poly.to_string());
  return out;
}

}  // namespace

TEST_CASE("irreducibility examples") {
  const Field& f = Field::get(2);
  CHECK(is_irreducible(M(f, "111")));
  CHECK(!is_irreducible(M(f, "101")));
  for (std::uint32_t q : {2U, 3U, 4U, 5U}) {
    const Field& fq = Field::get(q);
    for (std::uint64_t i = 0; i < q; ++i) CHECK(is_irreducible(MonicPoly::from_index(fq, 1, i)));
  }
  CHECK(support::error_kind([&] { is_irreducible(MonicPoly::one(f)); }).has_value());
}

TEST_CASE("small prime lists") {
  const Field& f = Field::get(2);
  CHECK(strings(enumerate_primes(f, 1)) == std::vector<std::string>{"10", "11"});
  CHECK(strings(enumerate_primes(f, 2)) == std::vector<std::string>{"111"});
  CHECK(strings(enumerate_primes(f, 3)) == std::vector<std::string>{"1011", "1101"});
  CHECK(prime_count_exact(2, 4) == 3);
  CHECK(prime_count_exact(3, 2) == 3);
  for (std::uint64_t q : {2, 3, 4, 5, 7, 9}) CHECK(prime_count_exact(q, 1) == q);
}

TEST_CASE("enumeration counts match the divisor-sum formula") {
  for (std::uint32_t q : {2U, 3U}) {
    const Field& f = Field::get(q);
    for (unsigned d = 1; d <= 10; ++d) {
      CAPTURE(q);
      CAPTURE(d);
      const auto list = enumerate_primes(f, d);
      CHECK(static_cast<std::int64_t>(list.size()) == oracle::divisor_count_formula(q, d));
      CHECK(to_big(static_cast<std::uint64_t>(list.size())) == prime_count_exact(q, d));
    }
  }
}

TEST_CASE("enumeration agrees with trial division for small degrees") {
  const auto irr2 = oracle::irreducibles2(6);
  const Field& f2 = Field::get(2);
  for (unsigned d = 1; d <= 6; ++d) {
    std::vector<std::string> expected;
    for (auto m : irr2[d]) expected.push_back(oracle::str2(m));
    CHECK(strings(enumerate_primes(f2, d)) == expected);
  }
  for (int p : {3, 5}) {
    const auto irr = oracle::irreduciblesp(4, p);
    const Field& f = Field::get(static_cast<std::uint32_t>(p));
    for (unsigned d = 1; d <= 4; ++d) {
      std::vector<std::string> expected;
      for (const auto& a : irr[d]) expected.push_back(oracle::strp(a, p));
      std::sort(expected.begin(), expected.end());
      CHECK(strings(enumerate_primes(f, d)) == expected);
    }
  }
  // GF(4): compare with a brute-force search for roots-free / factor-free polynomials.
  const Field& f4 = Field::get(4);
  const PrimeTable t4(f4, 1);
  for (unsigned d = 2; d <= 3; ++d) {
    std::size_t count = 0;
    for (std::uint64_t i = 0; i < 64; ++i) {
      if (d == 2 && i >= 16) break;
      const auto a = MonicPoly::from_index(f4, d, i);
      bool has_root = false;
      for (const auto& lin : t4.primes(1)) has_root = has_root || mod(a.poly(), lin.poly.poly()).is_zero();
      // Degrees 2 and 3 are irreducible exactly when root-free.
      CHECK(is_irreducible(a) == !has_root);
      count += has_root ? 0 : 1;
    }
    CHECK(to_big(static_cast<std::uint64_t>(count)) == prime_count_exact(4, d));
  }
}

TEST_CASE("products of primes are reducible") {
  const Field& f = Field::get(3);
  const PrimeTable t(f, 3);
  for (unsigned d = 1; d <= 3; ++d) {
    for (const auto& a : t.primes(d)) {
      CHECK(is_irreducible(a.poly));
      for (const auto& b : t.primes(1)) CHECK(!is_irreducible(poly_mul(a.poly, b.poly)));
    }
  }
}

TEST_CASE("prime counts obey the square-root error bound") {
  for (std::uint64_t q : {2, 3, 5}) {
    for (unsigned n = 1; n <= 24; ++n) {
      const double qn = std::pow(static_cast<double>(q), n);
      const double lhs = std::abs(prime_count_exact(q, n).get_d() * n / qn - 1.0);
      CHECK(lhs <= std::pow(static_cast<double>(q), -static_cast<double>(n) / 2 + 1));
    }
  }
}

TEST_CASE("serial and parallel enumeration agree") {
  const Field& f = Field::get(3);
  for (unsigned d = 1; d <= 8; ++d) {
    CHECK(strings(enumerate_primes(f, d, Execution::kSerial)) ==
          strings(enumerate_primes(f, d, Execution::kParallel)));
  }
}

TEST_CASE("table lookup") {
  const Field& f = Field::get(2);
  const PrimeTable t(f, 8);
  CHECK(t.count(8) == 30);
  const auto* rec = t.find(M(f, "111"));
  REQUIRE(rec != nullptr);
  CHECK(rec->degree == 2);
  CHECK(rec->ordinal == 0);
  CHECK(t.find(M(f, "101")) == nullptr);
  for (unsigned d = 1; d <= 8; ++d) {
    for (const auto& r : t.primes(d)) CHECK(t.find(r.poly) == &r);
  }
  CHECK(support::error_kind([&] { t.primes(9); }) == ErrorKind::kTableTooSmall);
}

TEST_CASE("cache round trip and validation") {
  const Field& f = Field::get(3);
  const PrimeTable t(f, 6);
  std::stringstream buf;
  write_table(t, buf);
  const std::string text = buf.str();
  std::istringstream in(text);
  CHECK(read_table(in) == t);

  std::stringstream empty_buf;
  write_table(PrimeTable(f, 0), empty_buf);
  std::istringstream empty_in(empty_buf.str());
  const auto empty = read_table(empty_in);
  CHECK(empty.max_degree() == 0);

  std::string tampered = text;
  const auto pos = tampered.find("D 2 3");
  REQUIRE(pos != std::string::npos);
  tampered.replace(pos, 5, "D 2 4");
  std::istringstream tin(tampered);
  CHECK(support::error_kind([&] { read_table(tin); }) == ErrorKind::kCountMismatch);

  std::string versioned = text;
  versioned.replace(0, 5, "FFMU9");
  std::istringstream vin(versioned);
  CHECK(support::error_kind([&] { read_table(vin); }) == ErrorKind::kVersionMismatch);

  std::string truncated = text.substr(0, text.rfind("END"));
  std::istringstream trin(truncated);
  CHECK(support::error_kind([&] { read_table(trin); }).has_value());
}
