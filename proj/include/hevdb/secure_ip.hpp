#pragma once

#include <span>
#include <vector>

#include "hevdb/butterfly.hpp"
#include "hevdb/counters.hpp"
#include "hevdb/lattice.hpp"

namespace hevdb {

// Query expanded into r RLWE ciphertexts under s'; part j holds
// phi_j(r^{-1} (q~ + e)). All parts are NTT form, ready for scoring.
struct DecomposedQuery {
  uint64_t epoch = 0;
  std::vector<RlweCiphertext> parts;
};

// Unencrypted query prepared for scoring against encrypted blocks:
// part j = NTT(phi_j(r^{-1} q~)).
struct PlainQuery {
  std::vector<Poly> parts;
};

// One block of up to d cached keys. Row i encrypts
// sum_t phi_i(k~_t) X^t with noise divisible by r; NTT form.
struct CachedBlock {
  uint64_t epoch = 0;
  uint32_t block_index = 0;
  uint32_t occupancy = 0;
  std::vector<RlweCiphertext> rows;
};

// Hoisted trace decomposition: one ModUp per module component, r - 1
// homomorphic automorphisms, 2r ModDowns.
DecomposedQuery decompose(const MlweCiphertext& ct, const SwitchKeySet& ks,
                          const RingParams& pp);

// Build the cache rows for one block. keys[t] may be null (empty slot);
// keys.size() <= d.
CachedBlock cache_block(std::span<const MlweCiphertext* const> keys,
                        uint32_t block_index, const SwitchKeySet& ks,
                        const ButterflyPlan& plan, const RingParams& pp);

// Encrypted score polynomial for the block: coefficient t holds
// delta^2 <q, k_t>. Output in coefficient form.
RlweCiphertext score(const DecomposedQuery& q, const CachedBlock& blk,
                     const SwitchKeySet& ks, const RingParams& pp);

PlainQuery prepare_plain_query(std::span<const double> v, const RingParams& pp);

// Plaintext-query variant; ciphertext-plaintext products only, no
// relinearization.
RlweCiphertext score_plain(const PlainQuery& q, const CachedBlock& blk,
                           const RingParams& pp);

}  // namespace hevdb
