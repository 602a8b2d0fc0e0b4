#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hevdb/params.hpp"

namespace hevdb {

// Element of Z_m[X]/(X^n + 1) with coefficients in [0, m). `ntt_form` marks
// the evaluation-domain representation produced by to_ntt().
struct Poly {
  std::vector<uint64_t> c;
  uint64_t modulus = 0;
  bool ntt_form = false;

  Poly() = default;
  Poly(uint32_t degree, uint64_t m, bool ntt = false)
      : c(degree, 0), modulus(m), ntt_form(ntt) {}

  uint32_t degree() const { return static_cast<uint32_t>(c.size()); }
  bool is_zero() const {
    for (uint64_t x : c)
      if (x) return false;
    return true;
  }
  bool operator==(const Poly&) const = default;
};

void check_compatible(const Poly& a, const Poly& b);

Poly add(const Poly& a, const Poly& b);
Poly sub(const Poly& a, const Poly& b);
Poly negate(const Poly& a);
void add_inplace(Poly& a, const Poly& b);
void sub_inplace(Poly& a, const Poly& b);
void scale_inplace(Poly& a, uint64_t k);  // a *= k mod m

void to_ntt(Poly& a, const NttTables& t);
void from_ntt(Poly& a, const NttTables& t);

// Pointwise product of two NTT-form polynomials.
Poly pointwise(const Poly& a, const Poly& b);
void pointwise_accumulate(Poly& acc, const Poly& a, const Poly& b);

// Full negacyclic product of two coefficient-form polynomials.
Poly negacyclic_multiply(const Poly& a, const Poly& b, const NttTables& t);

// a * X^e with e taken mod 2n (negacyclic sign wrap). Coefficient form.
Poly monomial_mul(const Poly& a, uint64_t e);
// Same in the evaluation domain: slot j scales by psi^{t_j * e}.
void monomial_mul_ntt_inplace(Poly& a, uint64_t e, const NttTables& t);

// p(X) -> p(X^t) for odd t in [0, 2n); coefficient form.
Poly automorphism(const Poly& a, uint64_t t_odd);
// Spec-facing variant phi_i: X -> X^{2i+1}, i in [0, r).
Poly apply_automorphism(const Poly& a, uint32_t i, const RingParams& pp);

// Coefficient permutation phi_{i,r}: moves coefficient s*u + v to
// s*((2i+1)u mod 2r) + v with the negacyclic sign on wraparound.
Poly phi_ir(const Poly& a, uint32_t i, const RingParams& pp);

// Small-ring polynomial (degree r) embedded into degree d via X -> X^s.
Poly embed(const Poly& a, const RingParams& pp);

// Embedded polynomial straight into the degree-d evaluation domain using a
// dimension-r NTT plus the precomputed slot map.
Poly embed_ntt(const Poly& a, const RingParams& pp, bool mod_p = false);

// Centered representative in (-m/2, m/2].
inline int64_t centered(uint64_t x, uint64_t m) {
  return x > m / 2 ? static_cast<int64_t>(x) - static_cast<int64_t>(m)
                   : static_cast<int64_t>(x);
}

// ---- serialization: [degree u32][modulus u64][coeffs u64 x degree], LE ----
void serialize_poly(const Poly& a, std::vector<uint8_t>& out);
Poly deserialize_poly(const uint8_t* data, size_t len, size_t& off);

// Bit-packed variant used at rest: coefficients take ceil(log2 m) bits each.
void serialize_poly_packed(const Poly& a, std::vector<uint8_t>& out);
Poly deserialize_poly_packed(const uint8_t* data, size_t len, size_t& off);

}  // namespace hevdb
