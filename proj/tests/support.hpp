#pragma once

#include <functional>
#include <optional>
#include <random>

#include "ffmu/error.hpp"
#include "ffmu/poly.hpp"

namespace support {

/// Kind of the ffmu::Error thrown by `fn`, or nullopt when nothing is thrown.
inline std::optional<ffmu::ErrorKind> error_kind(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ffmu::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

inline ffmu::Poly P(const ffmu::Field& f, const char* text) { return ffmu::parse_any_poly(text, f); }
inline ffmu::MonicPoly M(const ffmu::Field& f, const char* text) { return ffmu::parse_poly(text, f); }

inline ffmu::Poly random_poly(const ffmu::Field& f, std::mt19937_64& rng, unsigned max_deg) {
  const unsigned len = static_cast<unsigned>(rng() % (max_deg + 2));
  std::vector<ffmu::Elem> c(len);
  for (auto& x : c) x = static_cast<ffmu::Elem>(rng() % f.q());
  return ffmu::Poly(f, c);
}

}  // namespace support
