#include "hevdb/secure_ip.hpp"

#include <stdexcept>

#include "hevdb/encoding.hpp"

namespace hevdb {

OpCounters& op_counters() {
  thread_local OpCounters counters;
  return counters;
}

DecomposedQuery decompose(const MlweCiphertext& ct, const SwitchKeySet& ks,
                          const RingParams& pp) {
  std::vector<Poly> a = gen_a(ct.rho, pp);
  std::vector<RnsPoly> a_hat;
  a_hat.reserve(pp.s);
  for (uint32_t u = 0; u < pp.s; ++u) {
    scale_inplace(a[u], pp.r_inv_q);
    a_hat.push_back(rns_ntt(embed(a[u], pp), pp));
  }
  Poly b = ct.b;
  scale_inplace(b, pp.r_inv_q);
  Poly b_embed = embed(b, pp);

  DecomposedQuery out;
  out.epoch = ks.epoch;
  out.parts.reserve(pp.r);
  for (uint32_t j = 0; j < pp.r; ++j) {
    KsAccumulator acc(pp);
    for (uint32_t u = 0; u < pp.s; ++u) acc.add(a_hat[u], ks.decompose_keys[j][u]);
    auto [c0, c1] = acc.finish();
    add_inplace(c0, b_embed);
    if (j) {
      // Moves the ciphertext from phi_j^{-1}(s') back under s'.
      uint64_t t = 2 * uint64_t(j) + 1;
      c0 = automorphism(c0, t);
      c1 = automorphism(c1, t);
      ++op_counters().automorphisms;
    }
    to_ntt(c0, pp.ntt_dq);
    to_ntt(c1, pp.ntt_dq);
    out.parts.push_back({std::move(c0), std::move(c1)});
  }
  return out;
}

CachedBlock cache_block(std::span<const MlweCiphertext* const> keys,
                        uint32_t block_index, const SwitchKeySet& ks,
                        const ButterflyPlan& plan, const RingParams& pp) {
  if (keys.size() > pp.d)
    throw std::invalid_argument("cache_block: block exceeds d slots");
  CachedBlock blk;
  blk.epoch = ks.epoch;
  blk.block_index = block_index;
  blk.rows.reserve(pp.r);

  // Group the r^{-1}-scaled, embedded ciphertexts by slot residue:
  // elems[j] = (b'_j, a'_{j,0}, ..., a'_{j,s-1}) with
  // x'_j = sum_v x~_{sj+v} X^v.
  std::vector<ButterflyPlan::Element> elems(
      pp.r, ButterflyPlan::Element(pp.s + 1, Poly(pp.d, pp.q)));
  for (uint32_t t = 0; t < keys.size(); ++t) {
    if (!keys[t]) continue;
    ++blk.occupancy;
    uint32_t j = t / pp.s, v = t % pp.s;
    Poly b = keys[t]->b;
    scale_inplace(b, pp.r_inv_q);
    add_inplace(elems[j][0], monomial_mul(embed(b, pp), v));
    std::vector<Poly> a = gen_a(keys[t]->rho, pp);
    for (uint32_t u = 0; u < pp.s; ++u) {
      scale_inplace(a[u], pp.r_inv_q);
      add_inplace(elems[j][1 + u], monomial_mul(embed(a[u], pp), v));
    }
  }

  std::vector<ButterflyPlan::Element> mixed = plan.apply(elems);
  elems.clear();

  for (uint32_t i = 0; i < pp.r; ++i) {
    // phi_{i,r} sends row i's a-parts under phi_i(s~_u); switch back to s'.
    Poly b = phi_ir(mixed[i][0], i, pp);
    KsAccumulator acc(pp);
    for (uint32_t u = 0; u < pp.s; ++u)
      acc.add(rns_ntt(phi_ir(mixed[i][1 + u], i, pp), pp), ks.cache_keys[i][u]);
    auto [c0, c1] = acc.finish();
    add_inplace(c0, b);
    // Rescale by r mod q: restores the message scale and leaves the
    // accumulated noise divisible by r, where the query's r^{-1} cancels it.
    scale_inplace(c0, pp.r);
    scale_inplace(c1, pp.r);
    to_ntt(c0, pp.ntt_dq);
    to_ntt(c1, pp.ntt_dq);
    blk.rows.push_back({std::move(c0), std::move(c1)});
  }
  ++op_counters().recached_blocks;
  return blk;
}

RlweCiphertext score(const DecomposedQuery& q, const CachedBlock& blk,
                     const SwitchKeySet& ks, const RingParams& pp) {
  if (q.epoch != blk.epoch)
    throw std::invalid_argument("score: query and cache epochs differ");
  Poly acc0(pp.d, pp.q, true), acc1(pp.d, pp.q, true), acc2(pp.d, pp.q, true);
  for (uint32_t i = 0; i < pp.r; ++i) {
    const RlweCiphertext& cq = q.parts[i];
    const RlweCiphertext& ck = blk.rows[i];
    pointwise_accumulate(acc0, cq.c0, ck.c0);
    pointwise_accumulate(acc1, cq.c0, ck.c1);
    pointwise_accumulate(acc1, cq.c1, ck.c0);
    pointwise_accumulate(acc2, cq.c1, ck.c1);
  }
  from_ntt(acc2, pp.ntt_dq);
  auto [d0, d1] = key_switch(acc2, ks.relin_key, pp);
  from_ntt(acc0, pp.ntt_dq);
  from_ntt(acc1, pp.ntt_dq);
  add_inplace(acc0, d0);
  add_inplace(acc1, d1);
  return {std::move(acc0), std::move(acc1)};
}

PlainQuery prepare_plain_query(std::span<const double> v, const RingParams& pp) {
  Poly q = encode_query_small(v, pp);
  scale_inplace(q, pp.r_inv_q);
  PlainQuery out;
  out.parts.reserve(pp.r);
  for (uint32_t i = 0; i < pp.r; ++i) {
    Poly part = embed(apply_automorphism(q, i, pp), pp);
    to_ntt(part, pp.ntt_dq);
    out.parts.push_back(std::move(part));
  }
  return out;
}

RlweCiphertext score_plain(const PlainQuery& q, const CachedBlock& blk,
                           const RingParams& pp) {
  Poly acc0(pp.d, pp.q, true), acc1(pp.d, pp.q, true);
  for (uint32_t i = 0; i < pp.r; ++i) {
    pointwise_accumulate(acc0, q.parts[i], blk.rows[i].c0);
    pointwise_accumulate(acc1, q.parts[i], blk.rows[i].c1);
  }
  from_ntt(acc0, pp.ntt_dq);
  from_ntt(acc1, pp.ntt_dq);
  return {std::move(acc0), std::move(acc1)};
}

}  // namespace hevdb
