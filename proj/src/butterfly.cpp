#include "hevdb/butterfly.hpp"

#include <stdexcept>

#include "hevdb/counters.hpp"

namespace hevdb {

namespace {

std::vector<uint32_t> build_rec(const std::vector<uint32_t>& pos, uint64_t e,
                                uint64_t two_d, std::vector<ButterflyPlan::Op>& ops) {
  size_t m = pos.size();
  if (m == 1) return pos;
  std::vector<uint32_t> evens, odds;
  for (size_t j = 0; j < m; ++j) (j % 2 ? odds : evens).push_back(pos[j]);
  auto G = build_rec(evens, (2 * e) % two_d, two_d, ops);
  auto H = build_rec(odds, (2 * e) % two_d, two_d, ops);
  std::vector<uint32_t> out(m);
  for (size_t i = 0; i < m / 2; ++i) {
    uint64_t t = (e * (2 * i + 1)) % two_d;
    ops.push_back({G[i], H[i], t});
    out[i] = G[i];
    out[i + m / 2] = H[i];
  }
  return out;
}

ButterflyPlan::Element zero_like(const ButterflyPlan::Element& e) {
  ButterflyPlan::Element z;
  z.reserve(e.size());
  for (const Poly& p : e) z.emplace_back(p.degree(), p.modulus);
  return z;
}

}  // namespace

ButterflyPlan ButterflyPlan::build(const RingParams& pp) {
  ButterflyPlan plan;
  plan.r = pp.r;
  uint64_t two_d = 2 * uint64_t(pp.d);
  std::vector<uint32_t> pos(pp.r);
  for (uint32_t i = 0; i < pp.r; ++i) pos[i] = i;
  plan.natural = build_rec(pos, pp.s, two_d, plan.ops);
  uint64_t two_r = 2 * uint64_t(pp.r);
  plan.sigma.resize(pp.r);
  for (uint32_t i = 0; i < pp.r; ++i) {
    uint64_t inv = inv_odd_mod_pow2(2 * uint64_t(i) + 1, two_r);
    plan.sigma[i] = static_cast<uint32_t>((inv - 1) / 2);
  }
  return plan;
}

std::vector<ButterflyPlan::Element> ButterflyPlan::apply(
    const std::vector<Element>& v) const {
  if (v.size() != r) throw std::invalid_argument("butterfly: bad vector length");
  std::vector<Element> w = v;
  for (const Op& op : ops) {
    Element& lo = w[op.lo];
    Element& hi = w[op.hi];
    for (size_t k = 0; k < lo.size(); ++k) {
      Poly t = monomial_mul(hi[k], op.shift);
      hi[k] = sub(lo[k], t);
      lo[k] = add(lo[k], t);
    }
    op_counters().butterfly_adds += 2;
  }
  std::vector<Element> out(r);
  for (uint32_t i = 0; i < r; ++i) out[i] = w[natural[sigma[i]]];
  return out;
}

std::vector<ButterflyPlan::Element> ButterflyPlan::apply_transpose(
    const std::vector<Element>& v) const {
  if (v.size() != r) throw std::invalid_argument("butterfly: bad vector length");
  std::vector<Element> w(r);
  for (uint32_t j = 0; j < r; ++j) w[natural[j]] = v[j];
  for (uint32_t j = 0; j < r; ++j)
    if (w[j].empty()) w[j] = zero_like(v[0]);
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    Element& lo = w[it->lo];
    Element& hi = w[it->hi];
    for (size_t k = 0; k < lo.size(); ++k) {
      Poly diff = sub(lo[k], hi[k]);
      lo[k] = add(lo[k], hi[k]);
      hi[k] = monomial_mul(diff, it->shift);
    }
    op_counters().butterfly_adds += 2;
  }
  return w;
}

}  // namespace hevdb
