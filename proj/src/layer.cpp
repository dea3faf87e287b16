#include "ffmu/layer.hpp"

#include <algorithm>

#include <omp.h>

#include "ffmu/error.hpp"

namespace ffmu {

unsigned default_ceiling(std::uint32_t q) {
  switch (q) {
    case 2: return 18;
    case 3: return 12;
    case 5: return 8;
    default: break;
  }
  unsigned n = 0;
  std::uint64_t size = 1;
  while (size * q <= (std::uint64_t{1} << 18)) {
    size *= q;
    ++n;
  }
  return std::max(n, 1U);
}

void check_ceiling(const Field& field, unsigned degree, const RunOptions& options) {
  if (options.force) return;
  const unsigned ceiling = options.ceiling == 0 ? default_ceiling(field.q()) : options.ceiling;
  if (degree > ceiling) {
    throw Error(ErrorKind::kCeilingExceeded,
                "degree " + std::to_string(degree) + " exceeds the enumeration ceiling " +
                    std::to_string(ceiling) + " for q=" + std::to_string(field.q()) +
                    " (raise --ceiling or pass --force)");
  }
}

namespace {

void visit_index(const PrimeTable& table, const LayerSpec& spec, const LayerVisitor& visit,
                 std::uint64_t idx, std::span<std::int64_t> acc) {
  MonicPoly a = MonicPoly::from_index(table.field(), spec.degree, idx);
  if (spec.squarefree_only && !is_squarefree(a)) return;
  visit(factor(a, table), acc);
}

}  // namespace

std::vector<std::int64_t> accumulate_layer_serial(const PrimeTable& table, const LayerSpec& spec,
                                                  const LayerVisitor& visit) {
  table.require_degree(spec.degree, "layer enumeration");
  const std::uint64_t total = checked_pow(table.field().q(), spec.degree);
  std::vector<std::int64_t> acc(spec.width, 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) visit_index(table, spec, visit, idx, acc);
  return acc;
}

std::vector<std::int64_t> accumulate_layer_parallel(const PrimeTable& table,
                                                    const LayerSpec& spec,
                                                    const LayerVisitor& visit, int workers) {
  table.require_degree(spec.degree, "layer enumeration");
  const std::uint64_t total = checked_pow(table.field().q(), spec.degree);
  const int threads = workers > 0 ? workers : omp_get_max_threads();
  constexpr std::uint64_t kBlock = 512;
  const auto blocks = static_cast<std::int64_t>((total + kBlock - 1) / kBlock);
  std::vector<std::int64_t> acc(spec.width, 0);
#pragma omp parallel num_threads(threads)
  {
    std::vector<std::int64_t> local(spec.width, 0);
#pragma omp for schedule(dynamic, 1) nowait
    for (std::int64_t b = 0; b < blocks; ++b) {
      const std::uint64_t lo = static_cast<std::uint64_t>(b) * kBlock;
      const std::uint64_t hi = std::min(total, lo + kBlock);
      for (std::uint64_t idx = lo; idx < hi; ++idx) visit_index(table, spec, visit, idx, local);
    }
#pragma omp critical(ffmu_layer_reduce)
    for (std::size_t i = 0; i < spec.width; ++i) acc[i] += local[i];
  }
  return acc;
}

std::vector<std::int64_t> accumulate_layer(const PrimeTable& table, const LayerSpec& spec,
                                           const LayerVisitor& visit, const RunOptions& options) {
  check_ceiling(table.field(), spec.degree, options);
  if (options.mode == Execution::kSerial) return accumulate_layer_serial(table, spec, visit);
  return accumulate_layer_parallel(table, spec, visit, options.workers);
}

}  // namespace ffmu
