#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hevdb/poly.hpp"
#include "hevdb/random.hpp"
#include "hevdb/rns.hpp"

namespace hevdb {

using AesKey = std::array<uint8_t, 32>;

// Client-side key material: the MLWE secret (s_u)_{u<s}, the RLWE secret s'
// receiving all key-switched results, and the payload AEAD key.
struct SecretKey {
  ParamsPtr pp;
  std::vector<Poly> s;  // degree r, ternary, coefficient form
  Poly sp;              // degree d, ternary, coefficient form
  Poly sp_ntt;          // s' in the mod-q evaluation domain
  AesKey aes_key{};
};

SecretKey gen_secret_key(ParamsPtr pp, Rng& rng);

void save_secret_key(const SecretKey& sk, const std::string& path);
SecretKey load_secret_key(const std::string& path);

// Seeded MLWE ciphertext: b = m + e - sum_u a_u s_u with a = GenA(rho).
struct MlweCiphertext {
  Poly b;    // degree r, coefficient form, mod q
  Seed rho;  // XOF seed expanding the a-vector
};

MlweCiphertext mlwe_encrypt(const Poly& m, const SecretKey& sk, Rng& rng);
Poly mlwe_decrypt(const MlweCiphertext& ct, const SecretKey& sk);

// RLWE pair; decrypts as c0 + c1 * s'. Representation form depends on the
// pipeline stage, both parts always share it.
struct RlweCiphertext {
  Poly c0, c1;
};

RlweCiphertext rlwe_encrypt(const Poly& m, const SecretKey& sk, Rng& rng);
Poly rlwe_decrypt(const RlweCiphertext& ct, const SecretKey& sk);

// Single-digit gadget key over the modulus pair (q, p):
//   k0 + k1 * dst = p * src + e  (mod qp),
// stored as NTT-form (q, p) residues.
struct SwitchKey {
  Poly k0q, k0p, k1q, k1p;
};

// `src` and `dst` are degree-d coefficient-form mod-q polynomials.
SwitchKey gen_switch_key(const Poly& src, const Poly& dst,
                         const RingParams& pp, Rng& rng);

// Lift a mod-q coefficient poly to NTT-domain (q, p) residues, ready for
// pointwise products against switch keys.
RnsPoly rns_ntt(const Poly& a, const RingParams& pp);

// Hoisted key-switch accumulator: add any number of (a_hat, key) products,
// then pay the inverse transforms and ModDowns once.
class KsAccumulator {
 public:
  explicit KsAccumulator(const RingParams& pp);
  void add(const RnsPoly& a_hat, const SwitchKey& k);
  // (c0, c1) in coefficient form mod q; c0 + c1 * dst ~ sum_i a_i * src_i.
  std::pair<Poly, Poly> finish();

 private:
  const RingParams& pp_;
  Poly a0q_, a0p_, a1q_, a1p_;
};

std::pair<Poly, Poly> key_switch(const Poly& a, const SwitchKey& k,
                                 const RingParams& pp);

// Evaluation keys uploaded at session start. decompose_keys[j][u] switches
// parts multiplying embed(s_u) onto phi_j^{-1}(s'); cache_keys[j][u] switches
// parts multiplying phi_j(embed(s_u)) onto s'; relin_key handles s'^2.
struct SwitchKeySet {
  uint64_t epoch = 0;
  std::vector<std::vector<SwitchKey>> decompose_keys;  // [r][s]
  std::vector<std::vector<SwitchKey>> cache_keys;      // [r][s]
  SwitchKey relin_key;
};

SwitchKeySet gen_switch_keys(const SecretKey& sk, Rng& rng);

// ---- serialization ----
void serialize_mlwe(const MlweCiphertext& ct, std::vector<uint8_t>& out);
MlweCiphertext deserialize_mlwe(const uint8_t* data, size_t len, size_t& off);
void serialize_rlwe(const RlweCiphertext& ct, std::vector<uint8_t>& out);
RlweCiphertext deserialize_rlwe(const uint8_t* data, size_t len, size_t& off);
void serialize_switch_key(const SwitchKey& k, const RingParams& pp,
                          std::vector<uint8_t>& out);
SwitchKey deserialize_switch_key(const uint8_t* data, size_t len, size_t& off,
                                 const RingParams& pp);
void serialize_switch_key_set(const SwitchKeySet& ks, const RingParams& pp,
                              std::vector<uint8_t>& out);
SwitchKeySet deserialize_switch_key_set(const uint8_t* data, size_t len,
                                        size_t& off, const RingParams& pp);

// ---- payload sealing (AES-256-GCM) ----
// Output layout: [nonce 12][ciphertext][tag 16]; the plaintext is framed as
// [len u32 LE][bytes][zero pad] and padded to `slot_bytes` so ciphertext
// length leaks only the configured slot size.
std::vector<uint8_t> aead_seal(std::span<const uint8_t> pt, const AesKey& key,
                               size_t slot_bytes, Rng& rng);
std::vector<uint8_t> aead_open(std::span<const uint8_t> blob, const AesKey& key);

}  // namespace hevdb
