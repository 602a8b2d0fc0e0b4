#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

namespace hevdb {

// ---- scalar arithmetic mod a 64-bit odd prime (< 2^63) ----

inline uint64_t add_mod(uint64_t a, uint64_t b, uint64_t q) {
  uint64_t s = a + b;
  return s >= q ? s - q : s;
}

inline uint64_t sub_mod(uint64_t a, uint64_t b, uint64_t q) {
  return a >= b ? a - b : a + q - b;
}

inline uint64_t neg_mod(uint64_t a, uint64_t q) { return a == 0 ? 0 : q - a; }

inline uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t q) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % q);
}

// Shoup multiplication: b fixed, b_shoup = floor(b * 2^64 / q).
inline uint64_t mul_mod_shoup(uint64_t a, uint64_t b, uint64_t b_shoup,
                              uint64_t q) {
  uint64_t hi = static_cast<uint64_t>(
      (static_cast<unsigned __int128>(a) * b_shoup) >> 64);
  uint64_t r = a * b - hi * q;
  return r >= q ? r - q : r;
}

inline uint64_t shoup_precompute(uint64_t b, uint64_t q) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(b) << 64) / q);
}

uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t q);
uint64_t inv_mod(uint64_t a, uint64_t q);
// Inverse of odd t modulo the power of two m.
uint64_t inv_odd_mod_pow2(uint64_t t, uint64_t m);
bool is_prime(uint64_t n);

// Largest prime with the given bit length congruent to 1 mod `two_d`,
// skipping any value listed in `avoid`.
uint64_t find_ntt_prime(unsigned bits, uint64_t two_d,
                        const std::vector<uint64_t>& avoid = {});

// ---- negacyclic NTT tables for Z_q[X]/(X^n + 1) ----

class NttTables {
 public:
  NttTables() = default;
  NttTables(uint32_t n, uint64_t q);

  uint32_t n() const { return n_; }
  uint64_t q() const { return q_; }

  // In-place forward / inverse transform over n coefficients.
  void forward(uint64_t* a) const;
  void inverse(uint64_t* a) const;

  // Exponent t such that slot j of the forward transform holds the
  // evaluation at psi^t (psi a primitive 2n-th root of unity).
  uint64_t eval_exponent(uint32_t j) const { return eval_exp_[j]; }
  // Inverse map: slot holding the evaluation at psi^t, t odd in [0, 2n).
  uint32_t slot_of_exponent(uint64_t t) const { return exp_slot_[t]; }

  // psi^k for k in [0, 2n); used for monomial multiplication in the
  // evaluation domain.
  uint64_t psi_pow(uint64_t k) const { return psi_pow_[k]; }
  uint64_t psi() const { return psi_pow_[1]; }

 private:
  uint32_t n_ = 0;
  uint64_t q_ = 0;
  std::vector<uint64_t> w_, w_shoup_;        // forward twiddles, bit-reversed
  std::vector<uint64_t> winv_, winv_shoup_;  // inverse twiddles
  uint64_t n_inv_ = 0, n_inv_shoup_ = 0;
  std::vector<uint64_t> psi_pow_;
  std::vector<uint64_t> eval_exp_;
  std::vector<uint32_t> exp_slot_;
};

// ---- ring parameters ----

struct RingParams {
  uint32_t d = 0;  // RLWE degree
  uint32_t r = 0;  // slot count / MLWE degree
  uint32_t s = 0;  // module rank, s = d / r
  uint64_t q = 0;  // ciphertext modulus
  uint64_t p = 0;  // key-switching modulus
  uint64_t delta = 0;      // fixed-point scale for vector coordinates
  uint64_t pir_scale = 0;  // scale for PIR data limbs and column selector
  uint32_t pir_limb_bits = 4;
  double decode_error_budget = 0.05;  // max tolerated |decoded - exact| score

  uint64_t r_inv_q = 0;  // r^{-1} mod q
  uint64_t p_inv_q = 0;  // p^{-1} mod q
  uint64_t p_mod_q = 0;

  NttTables ntt_dq, ntt_rq, ntt_dp, ntt_rp;

  // NTT_d slot -> NTT_r slot maps for polynomials embedded via X -> X^s.
  std::vector<uint32_t> embed_slots_q, embed_slots_p;

  static std::shared_ptr<const RingParams> make(uint32_t d, uint32_t r,
                                                unsigned q_bits,
                                                unsigned p_bits,
                                                unsigned delta_bits);

  // Desk-scale default: d = 2048, 61-bit moduli, delta = 2^24. `r` must be a
  // power of two >= the padded vector dimension.
  static std::shared_ptr<const RingParams> desk(uint32_t r = 128);
  // Production preset: d = 4096, 54-bit moduli (~108-bit total).
  static std::shared_ptr<const RingParams> production(uint32_t r = 128);
  // Tiny parameters for exhaustive tests.
  static std::shared_ptr<const RingParams> tiny(uint32_t d, uint32_t r,
                                                unsigned q_bits = 40,
                                                unsigned delta_bits = 10);

  uint64_t param_hash() const;
};

using ParamsPtr = std::shared_ptr<const RingParams>;

}  // namespace hevdb
