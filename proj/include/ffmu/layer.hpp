#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ffmu/arith.hpp"
#include "ffmu/prime_store.hpp"

namespace ffmu {

struct RunOptions {
  Execution mode = Execution::kParallel;
  /// OpenMP thread count; 0 keeps the runtime default.
  int workers = 0;
  /// Highest degree an enumeration may visit; 0 selects default_ceiling(q).
  unsigned ceiling = 0;
  /// Ignore the ceiling.
  bool force = false;
};

/// 18 for q = 2, 12 for q = 3, 8 for q = 5; otherwise the largest n with q^n <= 2^18.
unsigned default_ceiling(std::uint32_t q);
void check_ceiling(const Field& field, unsigned degree, const RunOptions& options);

/// Called once per monic A of the layer with A's factorization; adds A's
/// contribution into `acc`. Must be a pure function of its arguments.
using LayerVisitor = std::function<void(const Factorization&, std::span<std::int64_t> acc)>;

struct LayerSpec {
  unsigned degree;
  std::size_t width;
  /// Skip non-squarefree A without factoring them (for mu-weighted sums).
  bool squarefree_only = false;
};

/// Sums visitor contributions over all q^degree monics of the layer. The
/// serial path walks the layer in index order; the parallel path splits it
/// into contiguous index blocks. Integer accumulation makes both exact and
/// order independent.
std::vector<std::int64_t> accumulate_layer(const PrimeTable& table, const LayerSpec& spec,
                                           const LayerVisitor& visit, const RunOptions& options);

std::vector<std::int64_t> accumulate_layer_serial(const PrimeTable& table, const LayerSpec& spec,
                                                  const LayerVisitor& visit);
std::vector<std::int64_t> accumulate_layer_parallel(const PrimeTable& table,
                                                    const LayerSpec& spec,
                                                    const LayerVisitor& visit, int workers);

}  // namespace ffmu
