#include "hevdb/poly.hpp"

#include <bit>
#include <cstring>
#include <stdexcept>

namespace hevdb {

void check_compatible(const Poly& a, const Poly& b) {
  if (a.degree() != b.degree() || a.modulus != b.modulus)
    throw std::invalid_argument("polynomial degree/modulus mismatch");
  if (a.ntt_form != b.ntt_form)
    throw std::invalid_argument("polynomial representation mismatch");
}

Poly add(const Poly& a, const Poly& b) {
  Poly out = a;
  add_inplace(out, b);
  return out;
}

Poly sub(const Poly& a, const Poly& b) {
  Poly out = a;
  sub_inplace(out, b);
  return out;
}

Poly negate(const Poly& a) {
  Poly out = a;
  for (auto& x : out.c) x = neg_mod(x, a.modulus);
  return out;
}

void add_inplace(Poly& a, const Poly& b) {
  check_compatible(a, b);
  for (uint32_t i = 0; i < a.degree(); ++i) a.c[i] = add_mod(a.c[i], b.c[i], a.modulus);
}

void sub_inplace(Poly& a, const Poly& b) {
  check_compatible(a, b);
  for (uint32_t i = 0; i < a.degree(); ++i) a.c[i] = sub_mod(a.c[i], b.c[i], a.modulus);
}

void scale_inplace(Poly& a, uint64_t k) {
  uint64_t ks = shoup_precompute(k % a.modulus, a.modulus);
  for (auto& x : a.c) x = mul_mod_shoup(x, k % a.modulus, ks, a.modulus);
}

void to_ntt(Poly& a, const NttTables& t) {
  if (a.ntt_form) throw std::invalid_argument("to_ntt: already in NTT form");
  if (a.degree() != t.n() || a.modulus != t.q())
    throw std::invalid_argument("to_ntt: table mismatch");
  t.forward(a.c.data());
  a.ntt_form = true;
}

void from_ntt(Poly& a, const NttTables& t) {
  if (!a.ntt_form) throw std::invalid_argument("from_ntt: not in NTT form");
  if (a.degree() != t.n() || a.modulus != t.q())
    throw std::invalid_argument("from_ntt: table mismatch");
  t.inverse(a.c.data());
  a.ntt_form = false;
}

Poly pointwise(const Poly& a, const Poly& b) {
  check_compatible(a, b);
  if (!a.ntt_form) throw std::invalid_argument("pointwise: need NTT form");
  Poly out(a.degree(), a.modulus, true);
  for (uint32_t i = 0; i < a.degree(); ++i) out.c[i] = mul_mod(a.c[i], b.c[i], a.modulus);
  return out;
}

void pointwise_accumulate(Poly& acc, const Poly& a, const Poly& b) {
  check_compatible(a, b);
  check_compatible(acc, a);
  for (uint32_t i = 0; i < a.degree(); ++i)
    acc.c[i] = add_mod(acc.c[i], mul_mod(a.c[i], b.c[i], a.modulus), a.modulus);
}

Poly negacyclic_multiply(const Poly& a, const Poly& b, const NttTables& t) {
  check_compatible(a, b);
  if (a.ntt_form) throw std::invalid_argument("negacyclic_multiply: coefficient form expected");
  Poly fa = a, fb = b;
  to_ntt(fa, t);
  to_ntt(fb, t);
  Poly out = pointwise(fa, fb);
  from_ntt(out, t);
  return out;
}

Poly monomial_mul(const Poly& a, uint64_t e) {
  if (a.ntt_form) throw std::invalid_argument("monomial_mul: coefficient form expected");
  uint32_t n = a.degree();
  uint64_t two_n = 2 * uint64_t(n);
  e %= two_n;
  Poly out(n, a.modulus);
  for (uint32_t j = 0; j < n; ++j) {
    uint64_t t = (j + e) % two_n;
    if (t < n)
      out.c[t] = add_mod(out.c[t], a.c[j], a.modulus);
    else
      out.c[t - n] = sub_mod(out.c[t - n], a.c[j], a.modulus);
  }
  return out;
}

void monomial_mul_ntt_inplace(Poly& a, uint64_t e, const NttTables& t) {
  if (!a.ntt_form) throw std::invalid_argument("monomial_mul_ntt: NTT form expected");
  uint64_t two_n = 2 * uint64_t(t.n());
  e %= two_n;
  for (uint32_t j = 0; j < a.degree(); ++j) {
    uint64_t k = (t.eval_exponent(j) * e) % two_n;
    a.c[j] = mul_mod(a.c[j], t.psi_pow(k), a.modulus);
  }
}

Poly automorphism(const Poly& a, uint64_t t_odd) {
  if (a.ntt_form) throw std::invalid_argument("automorphism: coefficient form expected");
  uint32_t n = a.degree();
  uint64_t two_n = 2 * uint64_t(n);
  t_odd %= two_n;
  if ((t_odd & 1) == 0) throw std::invalid_argument("automorphism: exponent must be odd");
  Poly out(n, a.modulus);
  for (uint32_t j = 0; j < n; ++j) {
    uint64_t e = (uint64_t(j) * t_odd) % two_n;
    if (e < n)
      out.c[e] = add_mod(out.c[e], a.c[j], a.modulus);
    else
      out.c[e - n] = sub_mod(out.c[e - n], a.c[j], a.modulus);
  }
  return out;
}

Poly apply_automorphism(const Poly& a, uint32_t i, const RingParams& pp) {
  if (i >= pp.r) throw std::invalid_argument("apply_automorphism: index out of range");
  return automorphism(a, 2 * uint64_t(i) + 1);
}

Poly phi_ir(const Poly& a, uint32_t i, const RingParams& pp) {
  if (a.ntt_form) throw std::invalid_argument("phi_ir: coefficient form expected");
  if (a.degree() != pp.d) throw std::invalid_argument("phi_ir: degree-d input expected");
  Poly out(pp.d, a.modulus);
  uint64_t two_r = 2 * uint64_t(pp.r);
  for (uint32_t u = 0; u < pp.r; ++u) {
    uint64_t t = (uint64_t(u) * (2 * uint64_t(i) + 1)) % two_r;
    bool flip = t >= pp.r;
    uint32_t tu = static_cast<uint32_t>(flip ? t - pp.r : t);
    for (uint32_t v = 0; v < pp.s; ++v) {
      uint64_t x = a.c[pp.s * u + v];
      out.c[pp.s * tu + v] = flip ? neg_mod(x, a.modulus) : x;
    }
  }
  return out;
}

Poly embed(const Poly& a, const RingParams& pp) {
  if (a.degree() != pp.r) throw std::invalid_argument("embed: degree-r input expected");
  if (a.ntt_form) throw std::invalid_argument("embed: coefficient form expected");
  Poly out(pp.d, a.modulus);
  for (uint32_t j = 0; j < pp.r; ++j) out.c[uint64_t(j) * pp.s] = a.c[j];
  return out;
}

Poly embed_ntt(const Poly& a, const RingParams& pp, bool mod_p) {
  const NttTables& small = mod_p ? pp.ntt_rp : pp.ntt_rq;
  const auto& map = mod_p ? pp.embed_slots_p : pp.embed_slots_q;
  Poly f = a;
  to_ntt(f, small);
  Poly out(pp.d, a.modulus, true);
  for (uint32_t j = 0; j < pp.d; ++j) out.c[j] = f.c[map[j]];
  return out;
}

void serialize_poly(const Poly& a, std::vector<uint8_t>& out) {
  if (a.ntt_form)
    throw std::invalid_argument("serialize_poly: coefficient form expected");
  uint32_t n = a.degree();
  size_t base = out.size();
  out.resize(base + 4 + 8 + 8 * size_t(n));
  uint8_t* w = out.data() + base;
  std::memcpy(w, &n, 4);
  std::memcpy(w + 4, &a.modulus, 8);
  std::memcpy(w + 12, a.c.data(), 8 * size_t(n));
}

Poly deserialize_poly(const uint8_t* data, size_t len, size_t& off) {
  if (off + 12 > len) throw std::runtime_error("deserialize_poly: truncated");
  uint32_t n;
  uint64_t m;
  std::memcpy(&n, data + off, 4);
  std::memcpy(&m, data + off + 4, 8);
  if (n > (1u << 20) || off + 12 + 8 * size_t(n) > len)
    throw std::runtime_error("deserialize_poly: truncated");
  Poly a(n, m);
  std::memcpy(a.c.data(), data + off + 12, 8 * size_t(n));
  off += 12 + 8 * size_t(n);
  for (uint64_t x : a.c)
    if (x >= m) throw std::runtime_error("deserialize_poly: coefficient out of range");
  return a;
}

void serialize_poly_packed(const Poly& a, std::vector<uint8_t>& out) {
  if (a.ntt_form)
    throw std::invalid_argument("serialize_poly_packed: coefficient form expected");
  uint32_t n = a.degree();
  unsigned bits = std::bit_width(a.modulus - 1);
  size_t packed = (size_t(n) * bits + 7) / 8;
  size_t base = out.size();
  out.resize(base + 12 + packed, 0);
  uint8_t* w = out.data() + base;
  std::memcpy(w, &n, 4);
  std::memcpy(w + 4, &a.modulus, 8);
  size_t bitpos = 0;
  for (uint64_t x : a.c) {
    for (unsigned k = 0; k < bits; ++k, ++bitpos)
      w[12 + bitpos / 8] |= uint8_t(((x >> k) & 1) << (bitpos % 8));
  }
}

Poly deserialize_poly_packed(const uint8_t* data, size_t len, size_t& off) {
  if (off + 12 > len) throw std::runtime_error("deserialize_poly_packed: truncated");
  uint32_t n;
  uint64_t m;
  std::memcpy(&n, data + off, 4);
  std::memcpy(&m, data + off + 4, 8);
  if (m < 2) throw std::runtime_error("deserialize_poly_packed: bad modulus");
  unsigned bits = std::bit_width(m - 1);
  size_t packed = (size_t(n) * bits + 7) / 8;
  if (n > (1u << 20) || off + 12 + packed > len)
    throw std::runtime_error("deserialize_poly_packed: truncated");
  const uint8_t* r = data + off + 12;
  Poly a(n, m);
  size_t bitpos = 0;
  for (uint64_t& x : a.c) {
    x = 0;
    for (unsigned k = 0; k < bits; ++k, ++bitpos)
      x |= uint64_t((r[bitpos / 8] >> (bitpos % 8)) & 1) << k;
    if (x >= m)
      throw std::runtime_error("deserialize_poly_packed: coefficient out of range");
  }
  off += 12 + packed;
  return a;
}

}  // namespace hevdb
