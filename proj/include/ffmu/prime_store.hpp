#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ffmu/numeric.hpp"
#include "ffmu/poly.hpp"

namespace ffmu {

struct PrimeRecord {
  MonicPoly poly;
  unsigned degree;
  /// Position among the primes of this degree in lexicographic order.
  std::uint64_t ordinal;
};

/// Deterministic Rabin test. Throws for constant input.
bool is_irreducible(const MonicPoly& f);

/// pi(n) = (1/n) sum_{d | n} mu(d) q^{n/d}.
BigInt prime_count_exact(std::uint64_t q, unsigned n);
inline BigInt prime_count_exact(const Field& field, unsigned n) {
  return prime_count_exact(field.q(), n);
}

enum class Execution { kSerial, kParallel };

/// All monic irreducibles of degree d in lexicographic order. The parallel
/// path splits the q^d candidates into blocks and merges in block order.
std::vector<PrimeRecord> enumerate_primes(const Field& field, unsigned d,
                                          Execution mode = Execution::kParallel);

/// Monic irreducibles of every degree up to max_degree. Immutable once built.
class PrimeTable {
 public:
  PrimeTable(const Field& field, unsigned max_degree, Execution mode = Execution::kParallel);

  const Field& field() const { return *field_; }
  unsigned max_degree() const { return max_degree_; }
  /// Primes of degree d (1 <= d <= max_degree), lexicographically sorted.
  const std::vector<PrimeRecord>& primes(unsigned d) const;
  std::uint64_t count(unsigned d) const { return primes(d).size(); }
  /// Record for an irreducible f with deg f <= max_degree, or nullptr.
  const PrimeRecord* find(const MonicPoly& f) const;

  void require_degree(unsigned d, const char* context) const;

  friend bool operator==(const PrimeTable& a, const PrimeTable& b);

 private:
  friend PrimeTable read_table(std::istream&, const std::string&);
  PrimeTable(const Field& field, unsigned max_degree, std::vector<std::vector<PrimeRecord>> lists);
  void build_index();

  const Field* field_;
  unsigned max_degree_;
  std::vector<std::vector<PrimeRecord>> by_degree_;  // index 0 unused
  std::vector<std::vector<std::uint64_t>> index_;
};

/// Cache file: "FFMU1 q=<q> maxdeg=<D>", then per degree "D <d> <count>"
/// followed by one coefficient string per prime, then "END".
void save_table(const PrimeTable& table, const std::filesystem::path& path);
void write_table(const PrimeTable& table, std::ostream& out);
/// `ext_modulus` is only needed for prime powers without a built-in modulus.
PrimeTable load_table(const std::filesystem::path& path, const std::string& ext_modulus = "");
PrimeTable read_table(std::istream& in, const std::string& ext_modulus = "");

}  // namespace ffmu
