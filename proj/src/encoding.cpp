#include "hevdb/encoding.hpp"

#include <cfenv>
#include <cmath>
#include <stdexcept>

namespace hevdb {

namespace {

// Round-half-to-even, then reduce into [0, q).
uint64_t fixed_point(double x, uint64_t scale, uint64_t q) {
  double scaled = x * double(scale);
  long long v = llrint(scaled);  // default FE_TONEAREST = half-to-even
  if (v >= 0) return uint64_t(v) % q;
  uint64_t m = uint64_t(-v) % q;
  return m == 0 ? 0 : q - m;
}

}  // namespace

void normalize_l2(std::vector<double>& v) {
  double n2 = 0;
  for (double x : v) n2 += x * x;
  if (n2 == 0) return;
  double inv = 1.0 / std::sqrt(n2);
  for (double& x : v) x *= inv;
}

Poly encode_query(std::span<const double> v, const RingParams& pp) {
  if (v.size() > pp.r) throw std::invalid_argument("encode_query: dimension exceeds r");
  Poly out(pp.d, pp.q);
  for (uint32_t i = 0; i < v.size(); ++i) {
    uint64_t c = fixed_point(v[i], pp.delta, pp.q);
    if (i == 0)
      out.c[0] = c;
    else
      out.c[pp.d - pp.s * i] = neg_mod(c, pp.q);  // X^{-si} = -X^{d-si}
  }
  return out;
}

Poly encode_query_small(std::span<const double> v, const RingParams& pp) {
  if (v.size() > pp.r) throw std::invalid_argument("encode_query: dimension exceeds r");
  Poly out(pp.r, pp.q);
  for (uint32_t i = 0; i < v.size(); ++i) {
    uint64_t c = fixed_point(v[i], pp.delta, pp.q);
    if (i == 0)
      out.c[0] = c;
    else
      out.c[pp.r - i] = neg_mod(c, pp.q);
  }
  return out;
}

Poly encode_key(std::span<const double> v, const RingParams& pp) {
  if (v.size() > pp.r) throw std::invalid_argument("encode_key: dimension exceeds r");
  Poly out(pp.r, pp.q);
  for (uint32_t i = 0; i < v.size(); ++i) out.c[i] = fixed_point(v[i], pp.delta, pp.q);
  return out;
}

Poly encode_selector(uint32_t hot, uint32_t dim, uint64_t scale,
                     const RingParams& pp) {
  if (dim > pp.r || hot >= dim)
    throw std::invalid_argument("encode_selector: index out of range");
  Poly out(pp.r, pp.q);
  if (hot == 0)
    out.c[0] = scale % pp.q;
  else
    out.c[pp.r - hot] = neg_mod(scale % pp.q, pp.q);
  return out;
}

ScoreVector decode_scores(const Poly& poly, const RingParams& pp) {
  if (poly.degree() != pp.d || poly.modulus != pp.q)
    throw std::invalid_argument("decode_scores: degree-d mod-q input expected");
  ScoreVector out;
  out.scores.resize(pp.d);
  double dd = double(pp.delta) * double(pp.delta);
  for (uint32_t j = 0; j < pp.d; ++j)
    out.scores[j] = double(centered(poly.c[j], pp.q)) / dd;
  return out;
}

}  // namespace hevdb
