#include "hevdb/params.hpp"

#include <unordered_map>

namespace hevdb {

uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t q) {
  uint64_t acc = 1;
  base %= q;
  while (exp) {
    if (exp & 1) acc = mul_mod(acc, base, q);
    base = mul_mod(base, base, q);
    exp >>= 1;
  }
  return acc;
}

uint64_t inv_mod(uint64_t a, uint64_t q) {
  if (a == 0) throw std::invalid_argument("inv_mod: zero has no inverse");
  // q is prime throughout this library.
  return pow_mod(a, q - 2, q);
}

uint64_t inv_odd_mod_pow2(uint64_t t, uint64_t m) {
  if ((t & 1) == 0 || m == 0 || (m & (m - 1)) != 0)
    throw std::invalid_argument("inv_odd_mod_pow2: need odd t, power-of-two m");
  // Newton iteration doubles the number of correct low bits per step.
  uint64_t x = t;
  while ((x * t) % m != 1) x = (x * (2 + m - (t * x) % m)) % m;
  return x;
}

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                     23ull, 29ull, 31ull, 37ull}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) d >>= 1, ++r;
  // Deterministic witness set for 64-bit integers.
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                     23ull, 29ull, 31ull, 37ull}) {
    uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 0; i < r - 1; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

uint64_t find_ntt_prime(unsigned bits, uint64_t two_d,
                        const std::vector<uint64_t>& avoid) {
  if (bits < 4 || bits > 62) throw std::invalid_argument("find_ntt_prime: bits");
  uint64_t hi = (uint64_t(1) << bits) - 1;
  uint64_t lo = uint64_t(1) << (bits - 1);
  uint64_t c = (hi - 1) / two_d * two_d + 1;
  for (; c > lo; c -= two_d) {
    if (!is_prime(c)) continue;
    bool skip = false;
    for (uint64_t a : avoid) skip |= (a == c);
    if (!skip) return c;
  }
  throw std::runtime_error("find_ntt_prime: no prime found");
}

namespace {

uint32_t bit_reverse(uint32_t x, unsigned bits) {
  uint32_t y = 0;
  for (unsigned i = 0; i < bits; ++i) {
    y = (y << 1) | (x & 1);
    x >>= 1;
  }
  return y;
}

// Primitive 2n-th root of unity mod q.
uint64_t find_psi(uint32_t n, uint64_t q) {
  if ((q - 1) % (2 * uint64_t(n)) != 0)
    throw std::invalid_argument("modulus is not NTT-friendly for this degree");
  for (uint64_t g = 2;; ++g) {
    uint64_t psi = pow_mod(g, (q - 1) / (2 * uint64_t(n)), q);
    if (pow_mod(psi, n, q) == q - 1) return psi;
  }
}

}  // namespace

NttTables::NttTables(uint32_t n, uint64_t q) : n_(n), q_(q) {
  if (n < 1 || (n & (n - 1)) != 0)
    throw std::invalid_argument("NTT degree must be a power of two");
  unsigned logn = 0;
  while ((1u << logn) < n) ++logn;
  uint64_t psi = find_psi(n, q);

  psi_pow_.resize(2 * n);
  psi_pow_[0] = 1;
  for (uint32_t k = 1; k < 2 * n; ++k) psi_pow_[k] = mul_mod(psi_pow_[k - 1], psi, q);

  w_.resize(n);
  winv_.resize(n);
  for (uint32_t i = 0; i < n; ++i) {
    uint64_t e = bit_reverse(i, logn);
    w_[i] = psi_pow_[e];
    winv_[i] = inv_mod(w_[i], q);
  }
  w_shoup_.resize(n);
  winv_shoup_.resize(n);
  for (uint32_t i = 0; i < n; ++i) {
    w_shoup_[i] = shoup_precompute(w_[i], q);
    winv_shoup_[i] = shoup_precompute(winv_[i], q);
  }
  n_inv_ = inv_mod(n, q);
  n_inv_shoup_ = shoup_precompute(n_inv_, q);

  // Recover each output slot's evaluation point by transforming X.
  std::unordered_map<uint64_t, uint32_t> dlog;
  dlog.reserve(2 * n);
  for (uint32_t k = 0; k < 2 * n; ++k) dlog.emplace(psi_pow_[k], k);
  std::vector<uint64_t> probe(n, 0);
  if (n > 1) probe[1] = 1; else probe[0] = 1;
  forward(probe.data());
  eval_exp_.resize(n);
  exp_slot_.assign(2 * n, UINT32_MAX);
  for (uint32_t j = 0; j < n; ++j) {
    auto it = dlog.find(probe[j]);
    if (n == 1) {
      eval_exp_[j] = 1;  // X == psi in the degree-1 ring
    } else {
      if (it == dlog.end()) throw std::runtime_error("NTT table self-check failed");
      eval_exp_[j] = it->second;
    }
    exp_slot_[eval_exp_[j]] = j;
  }
}

void NttTables::forward(uint64_t* a) const {
  uint32_t t = n_;
  for (uint32_t m = 1; m < n_; m <<= 1) {
    t >>= 1;
    for (uint32_t i = 0; i < m; ++i) {
      uint64_t w = w_[m + i], ws = w_shoup_[m + i];
      uint64_t* lo = a + 2 * i * t;
      uint64_t* hi = lo + t;
      for (uint32_t j = 0; j < t; ++j) {
        uint64_t u = lo[j];
        uint64_t v = mul_mod_shoup(hi[j], w, ws, q_);
        lo[j] = add_mod(u, v, q_);
        hi[j] = sub_mod(u, v, q_);
      }
    }
  }
}

void NttTables::inverse(uint64_t* a) const {
  uint32_t t = 1;
  for (uint32_t h = n_ >> 1; h >= 1; h >>= 1) {
    for (uint32_t i = 0; i < h; ++i) {
      uint64_t w = winv_[h + i], ws = winv_shoup_[h + i];
      uint64_t* lo = a + 2 * i * t;
      uint64_t* hi = lo + t;
      for (uint32_t j = 0; j < t; ++j) {
        uint64_t u = lo[j];
        uint64_t v = hi[j];
        lo[j] = add_mod(u, v, q_);
        hi[j] = mul_mod_shoup(sub_mod(u, v, q_), w, ws, q_);
      }
    }
    t <<= 1;
  }
  for (uint32_t j = 0; j < n_; ++j)
    a[j] = mul_mod_shoup(a[j], n_inv_, n_inv_shoup_, q_);
}

std::shared_ptr<const RingParams> RingParams::make(uint32_t d, uint32_t r,
                                                  unsigned q_bits,
                                                  unsigned p_bits,
                                                  unsigned delta_bits) {
  if (d == 0 || (d & (d - 1)) != 0 || r == 0 || (r & (r - 1)) != 0 || r > d)
    throw std::invalid_argument("RingParams: d, r must be powers of two, r <= d");
  auto pp = std::make_shared<RingParams>();
  pp->d = d;
  pp->r = r;
  pp->s = d / r;
  pp->q = find_ntt_prime(q_bits, 2 * uint64_t(d));
  pp->p = find_ntt_prime(p_bits, 2 * uint64_t(d), {pp->q});
  pp->delta = uint64_t(1) << delta_bits;
  unsigned pir_bits = (q_bits - pp->pir_limb_bits - 3) / 2;
  pp->pir_scale = uint64_t(1) << pir_bits;
  pp->r_inv_q = inv_mod(r, pp->q);
  pp->p_inv_q = inv_mod(pp->p % pp->q, pp->q);
  pp->p_mod_q = pp->p % pp->q;
  pp->ntt_dq = NttTables(d, pp->q);
  pp->ntt_rq = NttTables(r, pp->q);
  pp->ntt_dp = NttTables(d, pp->p);
  pp->ntt_rp = NttTables(r, pp->p);

  // Slot map for the reduced-dimension NTT of embedded polynomials:
  // embed(x)(psi_d^t) = x(psi_d^{s t}) and psi_d^s is a 2r-th root, so each
  // degree-d slot reads one degree-r slot through the exponent maps.
  auto build_map = [&](const NttTables& big, const NttTables& small) {
    // small-table psi may differ from psi_d^s; relate them by discrete log.
    uint64_t psi_ds = pow_mod(big.psi(), pp->s, big.q());
    uint64_t base = small.psi();
    std::vector<uint32_t> log_of(2 * r, 0);
    uint64_t acc = 1;
    std::unordered_map<uint64_t, uint32_t> dlog;
    for (uint32_t k = 0; k < 2 * r; ++k) {
      dlog.emplace(acc, k);
      acc = mul_mod(acc, base, small.q());
    }
    auto it = dlog.find(psi_ds);
    if (it == dlog.end()) throw std::runtime_error("embed map: root mismatch");
    uint64_t c = it->second;  // psi_d^s = psi_r^c, c odd
    std::vector<uint32_t> map(d);
    for (uint32_t j = 0; j < d; ++j) {
      // slot j evaluates at psi_d^{t}; embedded value = x(psi_r^{c^{-1}... })
      // psi_d^{s t} = psi_r^{c t mod 2r}
      uint64_t t = big.eval_exponent(j);
      uint64_t e = mul_mod(c % (2 * uint64_t(r)), t % (2 * uint64_t(r)),
                           2 * uint64_t(r));
      // c*t is odd * odd = odd, so a valid small-table exponent
      map[j] = small.slot_of_exponent(e);
    }
    return map;
  };
  pp->embed_slots_q = build_map(pp->ntt_dq, pp->ntt_rq);
  pp->embed_slots_p = build_map(pp->ntt_dp, pp->ntt_rp);
  return pp;
}

std::shared_ptr<const RingParams> RingParams::desk(uint32_t r) {
  return make(2048, r, 61, 61, 24);
}

std::shared_ptr<const RingParams> RingParams::production(uint32_t r) {
  return make(4096, r, 54, 54, 24);
}

std::shared_ptr<const RingParams> RingParams::tiny(uint32_t d, uint32_t r,
                                                  unsigned q_bits,
                                                  unsigned delta_bits) {
  return make(d, r, q_bits, q_bits, delta_bits);
}

uint64_t RingParams::param_hash() const {
  uint64_t h = 1469598103934665603ull;
  auto mix = [&h](uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  mix(d);
  mix(r);
  mix(q);
  mix(p);
  mix(delta);
  mix(pir_scale);
  mix(pir_limb_bits);
  return h;
}

}  // namespace hevdb
