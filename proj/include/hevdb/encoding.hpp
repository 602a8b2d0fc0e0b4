#pragma once

#include <span>
#include <vector>

#include "hevdb/poly.hpp"

namespace hevdb {

// Packed similarity scores decoded from one block's score polynomial.
struct ScoreVector {
  std::vector<double> scores;  // length d
};

// L2-normalize in place; the zero vector is left unchanged.
void normalize_l2(std::vector<double>& v);

// q(X) = sum_i round(scale * v[i]) X^{-s i} in the degree-d ring.
Poly encode_query(std::span<const double> v, const RingParams& pp);

// Same encoding in the degree-r ring (exponents -i), the form that MLWE
// encryption consumes. Query polynomials of both degrees are related by
// embed().
Poly encode_query_small(std::span<const double> v, const RingParams& pp);

// k(X) = sum_i round(scale * v[i]) X^i in the degree-r ring.
Poly encode_key(std::span<const double> v, const RingParams& pp);

// One-hot selector in the query orientation (exponents -i), integer scale.
Poly encode_selector(uint32_t hot, uint32_t dim, uint64_t scale,
                     const RingParams& pp);

ScoreVector decode_scores(const Poly& poly, const RingParams& pp);

}  // namespace hevdb
