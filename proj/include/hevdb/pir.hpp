#pragma once

#include <span>
#include <vector>

#include "hevdb/secure_ip.hpp"

namespace hevdb {

// Two-stage retrieval grid. Cells hold fixed-length sealed blobs split into
// pir_limb_bits-wide limbs across cell_polys plaintext polynomials.
struct PirGeometry {
  uint32_t rows = 0, cols = 0;
  uint32_t cell_polys = 0;
  uint32_t blob_bytes = 0;

  bool operator==(const PirGeometry&) const = default;
};

PirGeometry pir_geometry(size_t num_entries, size_t blob_bytes,
                         const RingParams& pp);

struct PirMatrix {
  PirGeometry geo;
  // cells[row][col][chunk], NTT form, unit scale.
  std::vector<std::vector<std::vector<Poly>>> cells;
};

PirMatrix pir_setup(std::span<const std::vector<uint8_t>> blobs,
                    const RingParams& pp);

// Replace one cell; a null blob clears it.
void pir_update_cell(PirMatrix& mat, uint32_t index,
                     const std::vector<uint8_t>* blob, const RingParams& pp);

// The retrieval index never appears in the clear: both selectors are MLWE
// ciphertexts of scaled one-hot monomials.
struct PirQuery {
  MlweCiphertext row_sel, col_sel;
};

PirQuery make_pir_query(uint32_t index, const PirGeometry& geo,
                        const SecretKey& sk, Rng& rng);

// Expansion reuses the decompose keys and the transpose butterfly; stage one
// is ciphertext-plaintext per column, stage two ciphertext-ciphertext with a
// single relinearization per chunk.
std::vector<RlweCiphertext> pir_answer(const PirQuery& q, const PirMatrix& mat,
                                       const SwitchKeySet& ks,
                                       const ButterflyPlan& plan,
                                       const RingParams& pp);

// Throws if any limb sits too close to a rounding boundary.
std::vector<uint8_t> pir_decode(std::span<const RlweCiphertext> answer,
                                const PirGeometry& geo, const SecretKey& sk);

void serialize_pir_query(const PirQuery& q, std::vector<uint8_t>& out);
PirQuery deserialize_pir_query(const uint8_t* data, size_t len, size_t& off);

}  // namespace hevdb
