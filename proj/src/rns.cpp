#include "hevdb/rns.hpp"

#include "hevdb/counters.hpp"

namespace hevdb {

RnsPoly mod_up(const Poly& a, const RingParams& pp) {
  if (a.modulus != pp.q) throw std::invalid_argument("mod_up: expected mod-q input");
  if (a.ntt_form) throw std::invalid_argument("mod_up: coefficient form expected");
  ++op_counters().mod_ups;
  RnsPoly out;
  out.q_part = a;
  out.p_part = Poly(a.degree(), pp.p);
  for (uint32_t i = 0; i < a.degree(); ++i) {
    int64_t v = centered(a.c[i], pp.q);
    out.p_part.c[i] = v >= 0 ? uint64_t(v) % pp.p
                             : pp.p - (uint64_t(-v) % pp.p);
    if (out.p_part.c[i] == pp.p) out.p_part.c[i] = 0;
  }
  return out;
}

Poly mod_down(const RnsPoly& a, const RingParams& pp) {
  if (a.q_part.modulus != pp.q || a.p_part.modulus != pp.p)
    throw std::invalid_argument("mod_down: modulus mismatch");
  if (a.q_part.ntt_form || a.p_part.ntt_form)
    throw std::invalid_argument("mod_down: coefficient form expected");
  ++op_counters().mod_downs;
  Poly out(a.q_part.degree(), pp.q);
  for (uint32_t i = 0; i < out.degree(); ++i) {
    // (x - [x]_p) / p with [x]_p the centered remainder mod p.
    int64_t rem = centered(a.p_part.c[i], pp.p);
    uint64_t rem_q = rem >= 0 ? uint64_t(rem) % pp.q
                              : pp.q - (uint64_t(-rem) % pp.q);
    if (rem_q == pp.q) rem_q = 0;
    out.c[i] = mul_mod(sub_mod(a.q_part.c[i], rem_q, pp.q), pp.p_inv_q, pp.q);
  }
  return out;
}

}  // namespace hevdb
