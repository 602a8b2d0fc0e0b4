#pragma once

#include <cstdint>
#include <vector>

#include "hevdb/poly.hpp"

namespace hevdb {

// Log-depth realization of the monomial matrix B = P * [X^{s(2i+1)j}] used by
// Cache, operating on length-r vectors whose elements are tuples of
// polynomials. Each op maps (lo, hi) -> (lo + X^t hi, lo - X^t hi); the
// transpose network drives the PIR query expansion.
struct ButterflyPlan {
  struct Op {
    uint32_t lo, hi;
    uint64_t shift;  // exponent of X, taken mod 2d
  };

  uint32_t r = 0;
  std::vector<Op> ops;              // applied in order
  std::vector<uint32_t> natural;    // natural[i]: position of row sum_j X^{s(2i+1)j} v_j
  std::vector<uint32_t> sigma;      // P: final row i reads natural output sigma[i]

  static ButterflyPlan build(const RingParams& pp);

  using Element = std::vector<Poly>;

  // out[i] = (B v)[i] = (V v)[sigma[i]] with V the plain monomial NTT matrix.
  std::vector<Element> apply(const std::vector<Element>& v) const;
  // out = V^T v (no permutation); used on decomposed PIR queries.
  std::vector<Element> apply_transpose(const std::vector<Element>& v) const;
};

}  // namespace hevdb
