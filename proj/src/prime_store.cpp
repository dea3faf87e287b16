#include "ffmu/prime_store.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <omp.h>

#include "ffmu/error.hpp"

namespace ffmu {

bool is_irreducible(const MonicPoly& f) {
  const unsigned n = f.degree();
  if (n == 0) throw Error(ErrorKind::kDomain, "irreducibility of a constant is undefined");
  if (n == 1) return true;
  const Field& field = f.field();
  const Poly& mod_f = f.poly();
  if (mod_f.coeff(0) == 0) return false;
  const Poly t = Poly::monomial(field, 1, 1);
  // frob[i] = T^{q^i} mod f
  std::vector<Poly> frob;
  frob.reserve(n + 1);
  frob.push_back(mod(t, mod_f));
  for (unsigned i = 1; i <= n; ++i) {
    frob.push_back(powmod(frob.back(), static_cast<std::uint64_t>(field.q()), mod_f));
    // Early exit on a factor of degree dividing i; most reducible inputs have a small one.
    if (2 * i <= n && i <= 3 && !gcd(frob[i] - t, mod_f).is_one()) return false;
  }
  if (!(frob[n] - t).is_zero()) return false;
  unsigned rest = n;
  for (unsigned r = 2; r <= rest; ++r) {
    if (rest % r != 0) continue;
    while (rest % r == 0) rest /= r;
    if (!gcd(frob[n / r] - t, mod_f).is_one()) return false;
  }
  return true;
}

BigInt prime_count_exact(std::uint64_t q, unsigned n) {
  if (n == 0) throw Error(ErrorKind::kDomain, "prime counts start at degree 1");
  BigInt sum = 0;
  for (unsigned d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    const int mu = integer_mobius(d);
    if (mu != 0) sum += mu * big_pow(q, n / d);
  }
  return sum / n;
}

std::vector<PrimeRecord> enumerate_primes(const Field& field, unsigned d, Execution mode) {
  if (d == 0) throw Error(ErrorKind::kDomain, "prime degree must be positive");
  const std::uint64_t total = checked_pow(field.q(), d);
  std::vector<MonicPoly> found;
  if (mode == Execution::kSerial) {
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      MonicPoly cand = MonicPoly::from_index(field, d, idx);
      if (is_irreducible(cand)) found.push_back(std::move(cand));
    }
  } else {
    const std::uint64_t block = 1024;
    const std::uint64_t blocks = (total + block - 1) / block;
    std::vector<std::vector<MonicPoly>> per_block(blocks);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
      const std::uint64_t lo = static_cast<std::uint64_t>(b) * block;
      const std::uint64_t hi = std::min(total, lo + block);
      for (std::uint64_t idx = lo; idx < hi; ++idx) {
        MonicPoly cand = MonicPoly::from_index(field, d, idx);
        if (is_irreducible(cand)) per_block[b].push_back(std::move(cand));
      }
    }
    for (auto& v : per_block) {
      for (auto& p : v) found.push_back(std::move(p));
    }
  }
  // Index order is lexicographic order of the coefficient strings.
  std::vector<PrimeRecord> out;
  out.reserve(found.size());
  for (std::size_t i = 0; i < found.size(); ++i) out.push_back({std::move(found[i]), d, i});
  return out;
}

PrimeTable::PrimeTable(const Field& field, unsigned max_degree, Execution mode)
    : field_(&field), max_degree_(max_degree), by_degree_(max_degree + 1) {
  for (unsigned d = 1; d <= max_degree; ++d) by_degree_[d] = enumerate_primes(field, d, mode);
  build_index();
}

PrimeTable::PrimeTable(const Field& field, unsigned max_degree,
                       std::vector<std::vector<PrimeRecord>> lists)
    : field_(&field), max_degree_(max_degree), by_degree_(std::move(lists)) {
  build_index();
}

void PrimeTable::build_index() {
  index_.assign(max_degree_ + 1, {});
  for (unsigned d = 1; d <= max_degree_; ++d) {
    index_[d].reserve(by_degree_[d].size());
    for (const auto& rec : by_degree_[d]) index_[d].push_back(rec.poly.index());
  }
}

const std::vector<PrimeRecord>& PrimeTable::primes(unsigned d) const {
  if (d == 0 || d > max_degree_) {
    throw Error(ErrorKind::kTableTooSmall,
                "prime table holds degrees 1.." + std::to_string(max_degree_) +
                    ", degree " + std::to_string(d) + " requested");
  }
  return by_degree_[d];
}

const PrimeRecord* PrimeTable::find(const MonicPoly& f) const {
  if (&f.field() != field_) throw Error(ErrorKind::kFieldMismatch, "table field differs");
  const unsigned d = f.degree();
  if (d == 0 || d > max_degree_) return nullptr;
  const auto& idx = index_[d];
  const auto key = f.index();
  const auto it = std::lower_bound(idx.begin(), idx.end(), key);
  if (it == idx.end() || *it != key) return nullptr;
  return &by_degree_[d][static_cast<std::size_t>(it - idx.begin())];
}

void PrimeTable::require_degree(unsigned d, const char* context) const {
  if (d > max_degree_) {
    throw Error(ErrorKind::kTableTooSmall,
                std::string(context) + ": needs primes up to degree " + std::to_string(d) +
                    " but the table stops at " + std::to_string(max_degree_));
  }
}

bool operator==(const PrimeTable& a, const PrimeTable& b) {
  if (a.field_ != b.field_ || a.max_degree_ != b.max_degree_) return false;
  for (unsigned d = 1; d <= a.max_degree_; ++d) {
    if (a.by_degree_[d].size() != b.by_degree_[d].size()) return false;
    for (std::size_t i = 0; i < a.by_degree_[d].size(); ++i) {
      const auto& ra = a.by_degree_[d][i];
      const auto& rb = b.by_degree_[d][i];
      if (!(ra.poly == rb.poly) || ra.degree != rb.degree || ra.ordinal != rb.ordinal) {
        return false;
      }
    }
  }
  return true;
}

void write_table(const PrimeTable& table, std::ostream& out) {
  out << "FFMU1 q=" << table.field().q() << " maxdeg=" << table.max_degree() << '\n';
  for (unsigned d = 1; d <= table.max_degree(); ++d) {
    const auto& list = table.primes(d);
    out << "D " << d << ' ' << list.size() << '\n';
    for (const auto& rec : list) out << rec.poly.to_string() << '\n';
  }
  out << "END\n";
}

void save_table(const PrimeTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kInvalidArgument, "cannot write " + path.string());
  write_table(table, out);
  if (!out) throw Error(ErrorKind::kInvalidArgument, "failed writing " + path.string());
}

namespace {

unsigned parse_field_value(const std::string& token, const std::string& key) {
  if (token.rfind(key + "=", 0) != 0) {
    throw Error(ErrorKind::kParse, "table header: expected '" + key + "='");
  }
  const std::string value = token.substr(key.size() + 1);
  if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos) {
    throw Error(ErrorKind::kParse, "table header: malformed " + key);
  }
  return static_cast<unsigned>(std::stoul(value));
}

}  // namespace

PrimeTable read_table(std::istream& in, const std::string& ext_modulus) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::kParse, "empty table file");
  std::istringstream header(line);
  std::string tag, qtok, dtok, extra;
  header >> tag >> qtok >> dtok;
  if (tag != "FFMU1") {
    throw Error(ErrorKind::kVersionMismatch, "unsupported table version '" + tag + "'");
  }
  if (header >> extra) throw Error(ErrorKind::kParse, "table header: trailing tokens");
  const unsigned q = parse_field_value(qtok, "q");
  const unsigned max_degree = parse_field_value(dtok, "maxdeg");
  const Field& field = ext_modulus.empty() ? Field::get(q)
                                           : Field::get(FieldSpec::with_modulus(q, ext_modulus));
  std::vector<std::vector<PrimeRecord>> lists(max_degree + 1);
  for (unsigned d = 1; d <= max_degree; ++d) {
    if (!std::getline(in, line)) throw Error(ErrorKind::kParse, "truncated table file");
    std::istringstream dl(line);
    std::string dtag;
    unsigned deg = 0;
    std::uint64_t count = 0;
    if (!(dl >> dtag >> deg >> count) || dtag != "D" || (dl >> extra)) {
      throw Error(ErrorKind::kParse, "malformed degree line '" + line + "'");
    }
    if (deg != d) throw Error(ErrorKind::kParse, "degree lines out of order");
    if (to_big(count) != prime_count_exact(q, d)) {
      throw Error(ErrorKind::kCountMismatch,
                  "degree " + std::to_string(d) + " lists " + std::to_string(count) +
                      " primes, expected " + to_string(prime_count_exact(q, d)));
    }
    lists[d].reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
      if (!std::getline(in, line)) throw Error(ErrorKind::kParse, "truncated table file");
      MonicPoly poly = parse_poly(line, field);
      if (poly.degree() != d) {
        throw Error(ErrorKind::kParse, "prime '" + line + "' listed under wrong degree");
      }
      if (!lists[d].empty() && !(lists[d].back().poly < poly)) {
        throw Error(ErrorKind::kParse, "primes of degree " + std::to_string(d) + " not sorted");
      }
      lists[d].push_back({std::move(poly), d, i});
    }
  }
  if (!std::getline(in, line) || line != "END") {
    throw Error(ErrorKind::kParse, "missing END line");
  }
  if (std::getline(in, line)) throw Error(ErrorKind::kParse, "data after END");
  return PrimeTable(field, max_degree, std::move(lists));
}

PrimeTable load_table(const std::filesystem::path& path, const std::string& ext_modulus) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kInvalidArgument, "cannot open " + path.string());
  return read_table(in, ext_modulus);
}

}  // namespace ffmu
