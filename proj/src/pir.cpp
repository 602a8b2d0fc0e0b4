#include "hevdb/pir.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

#include "hevdb/encoding.hpp"

namespace hevdb {

namespace {

std::vector<Poly> encode_cell(const std::vector<uint8_t>& blob,
                              const PirGeometry& geo, const RingParams& pp) {
  if (blob.size() != geo.blob_bytes)
    throw std::invalid_argument("pir: blob size does not match geometry");
  unsigned per_byte = 8 / pp.pir_limb_bits;
  uint64_t mask = (uint64_t(1) << pp.pir_limb_bits) - 1;
  std::vector<Poly> polys(geo.cell_polys, Poly(pp.d, pp.q));
  for (size_t b = 0; b < blob.size(); ++b) {
    for (unsigned k = 0; k < per_byte; ++k) {
      size_t limb = b * per_byte + k;
      polys[limb / pp.d].c[limb % pp.d] = (blob[b] >> (k * pp.pir_limb_bits)) & mask;
    }
  }
  for (Poly& c : polys) to_ntt(c, pp.ntt_dq);
  return polys;
}

// Homomorphic selector expansion: decompose, then S_j = sum_i Y^{(2i+1)j} Q_i
// via the transpose network. S_j encrypts exactly scale * [j == hot] plus the
// query's own error coefficient.
std::vector<RlweCiphertext> expand_selector(const MlweCiphertext& sel,
                                            uint32_t dim,
                                            const SwitchKeySet& ks,
                                            const ButterflyPlan& plan,
                                            const RingParams& pp) {
  DecomposedQuery dq = decompose(sel, ks, pp);
  std::vector<ButterflyPlan::Element> elems;
  elems.reserve(pp.r);
  for (RlweCiphertext& part : dq.parts) {
    from_ntt(part.c0, pp.ntt_dq);
    from_ntt(part.c1, pp.ntt_dq);
    elems.push_back({std::move(part.c0), std::move(part.c1)});
  }
  std::vector<ButterflyPlan::Element> expanded = plan.apply_transpose(elems);
  std::vector<RlweCiphertext> out;
  out.reserve(dim);
  for (uint32_t j = 0; j < dim; ++j) {
    Poly c0 = std::move(expanded[j][0]);
    Poly c1 = std::move(expanded[j][1]);
    to_ntt(c0, pp.ntt_dq);
    to_ntt(c1, pp.ntt_dq);
    out.push_back({std::move(c0), std::move(c1)});
  }
  return out;
}

}  // namespace

PirGeometry pir_geometry(size_t num_entries, size_t blob_bytes,
                         const RingParams& pp) {
  if (num_entries == 0) num_entries = 1;
  if (num_entries > size_t(pp.r) * pp.r)
    throw std::invalid_argument("pir: too many entries for this ring");
  size_t side = 1;
  while (side * side < num_entries) side <<= 1;
  PirGeometry geo;
  geo.rows = uint32_t(std::min(side, size_t(pp.r)));
  geo.cols = uint32_t((num_entries + geo.rows - 1) / geo.rows);
  unsigned per_byte = 8 / pp.pir_limb_bits;
  geo.cell_polys = uint32_t((blob_bytes * per_byte + pp.d - 1) / pp.d);
  geo.blob_bytes = uint32_t(blob_bytes);
  return geo;
}

PirMatrix pir_setup(std::span<const std::vector<uint8_t>> blobs,
                    const RingParams& pp) {
  if (blobs.empty()) throw std::invalid_argument("pir_setup: empty database");
  PirMatrix mat;
  mat.geo = pir_geometry(blobs.size(), blobs[0].size(), pp);
  mat.cells.assign(
      mat.geo.rows,
      std::vector<std::vector<Poly>>(
          mat.geo.cols,
          std::vector<Poly>(mat.geo.cell_polys, Poly(pp.d, pp.q, true))));
  for (uint32_t i = 0; i < blobs.size(); ++i)
    pir_update_cell(mat, i, &blobs[i], pp);
  return mat;
}

void pir_update_cell(PirMatrix& mat, uint32_t index,
                     const std::vector<uint8_t>* blob, const RingParams& pp) {
  uint32_t row = index / mat.geo.cols;
  uint32_t col = index % mat.geo.cols;
  if (row >= mat.geo.rows) throw std::invalid_argument("pir: index out of range");
  if (blob)
    mat.cells[row][col] = encode_cell(*blob, mat.geo, pp);
  else
    mat.cells[row][col].assign(mat.geo.cell_polys, Poly(pp.d, pp.q, true));
}

PirQuery make_pir_query(uint32_t index, const PirGeometry& geo,
                        const SecretKey& sk, Rng& rng) {
  const RingParams& pp = *sk.pp;
  if (index >= geo.rows * geo.cols)
    throw std::invalid_argument("pir: index out of range");
  uint32_t row = index / geo.cols;
  uint32_t col = index % geo.cols;
  PirQuery q;
  q.row_sel = mlwe_encrypt(encode_selector(row, geo.rows, pp.pir_scale, pp), sk, rng);
  q.col_sel = mlwe_encrypt(encode_selector(col, geo.cols, pp.pir_scale, pp), sk, rng);
  return q;
}

std::vector<RlweCiphertext> pir_answer(const PirQuery& q, const PirMatrix& mat,
                                       const SwitchKeySet& ks,
                                       const ButterflyPlan& plan,
                                       const RingParams& pp) {
  const PirGeometry& geo = mat.geo;
  std::vector<RlweCiphertext> row_sel =
      expand_selector(q.row_sel, geo.rows, ks, plan, pp);
  std::vector<RlweCiphertext> col_sel =
      expand_selector(q.col_sel, geo.cols, ks, plan, pp);

  // Stage one: collapse rows against the plaintext grid, one ciphertext per
  // (column, chunk).
  std::vector<std::vector<RlweCiphertext>> folded(geo.cols);
  for (uint32_t col = 0; col < geo.cols; ++col) {
    folded[col].assign(geo.cell_polys,
                       {Poly(pp.d, pp.q, true), Poly(pp.d, pp.q, true)});
    for (uint32_t row = 0; row < geo.rows; ++row) {
      for (uint32_t c = 0; c < geo.cell_polys; ++c) {
        const Poly& data = mat.cells[row][col][c];
        pointwise_accumulate(folded[col][c].c0, row_sel[row].c0, data);
        pointwise_accumulate(folded[col][c].c1, row_sel[row].c1, data);
      }
    }
  }

  // Stage two: collapse columns ciphertext-by-ciphertext.
  std::vector<RlweCiphertext> answer;
  answer.reserve(geo.cell_polys);
  for (uint32_t c = 0; c < geo.cell_polys; ++c) {
    Poly acc0(pp.d, pp.q, true), acc1(pp.d, pp.q, true), acc2(pp.d, pp.q, true);
    for (uint32_t col = 0; col < geo.cols; ++col) {
      const RlweCiphertext& cs = col_sel[col];
      const RlweCiphertext& f = folded[col][c];
      pointwise_accumulate(acc0, cs.c0, f.c0);
      pointwise_accumulate(acc1, cs.c0, f.c1);
      pointwise_accumulate(acc1, cs.c1, f.c0);
      pointwise_accumulate(acc2, cs.c1, f.c1);
    }
    from_ntt(acc2, pp.ntt_dq);
    auto [d0, d1] = key_switch(acc2, ks.relin_key, pp);
    from_ntt(acc0, pp.ntt_dq);
    from_ntt(acc1, pp.ntt_dq);
    add_inplace(acc0, d0);
    add_inplace(acc1, d1);
    answer.push_back({std::move(acc0), std::move(acc1)});
  }
  return answer;
}

std::vector<uint8_t> pir_decode(std::span<const RlweCiphertext> answer,
                                const PirGeometry& geo, const SecretKey& sk) {
  const RingParams& pp = *sk.pp;
  if (answer.size() != geo.cell_polys)
    throw std::runtime_error("pir_decode: wrong answer length");
  unsigned per_byte = 8 / pp.pir_limb_bits;
  int64_t scale = int64_t(pp.pir_scale) * int64_t(pp.pir_scale);
  std::vector<uint8_t> blob(geo.blob_bytes, 0);
  size_t total_limbs = size_t(geo.blob_bytes) * per_byte;
  for (uint32_t c = 0; c < geo.cell_polys; ++c) {
    Poly m = rlwe_decrypt(answer[c], sk);
    for (uint32_t j = 0; j < pp.d; ++j) {
      size_t limb = size_t(c) * pp.d + j;
      if (limb >= total_limbs) break;
      int64_t v = centered(m.c[j], pp.q);
      int64_t l = (v >= 0 ? v + scale / 2 : v - scale / 2) / scale;
      int64_t err = v - l * scale;
      if (l < 0 || l > int64_t((1u << pp.pir_limb_bits) - 1) ||
          std::abs(err) * 4 >= scale)
        throw std::runtime_error("pir_decode: noise exceeded decoding margin");
      blob[limb / per_byte] |=
          uint8_t(l) << ((limb % per_byte) * pp.pir_limb_bits);
    }
  }
  return blob;
}

void serialize_pir_query(const PirQuery& q, std::vector<uint8_t>& out) {
  serialize_mlwe(q.row_sel, out);
  serialize_mlwe(q.col_sel, out);
}

PirQuery deserialize_pir_query(const uint8_t* data, size_t len, size_t& off) {
  PirQuery q;
  q.row_sel = deserialize_mlwe(data, len, off);
  q.col_sel = deserialize_mlwe(data, len, off);
  return q;
}

}  // namespace hevdb
