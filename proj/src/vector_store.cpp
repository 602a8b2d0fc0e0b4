#include "hevdb/vector_store.hpp"

#include <algorithm>
#include <stdexcept>

#include "hevdb/encoding.hpp"

namespace hevdb {

EncryptedDatabase::EncryptedDatabase(ParamsPtr pp, size_t payload_slot_bytes)
    : pp_(std::move(pp)),
      plan_(ButterflyPlan::build(*pp_)),
      slot_bytes_(payload_slot_bytes) {
  pir_.geo = pir_geometry(1, sealed_bytes(), *pp_);
  pir_.cells.assign(pir_.geo.rows,
                    std::vector<std::vector<Poly>>(
                        pir_.geo.cols, std::vector<Poly>(pir_.geo.cell_polys,
                                                         Poly(pp_->d, pp_->q, true))));
}

const SwitchKeySet& EncryptedDatabase::switch_keys() const {
  if (!has_keys_) throw std::runtime_error("no evaluation keys installed");
  return ks_;
}

void EncryptedDatabase::set_switch_keys(SwitchKeySet ks) {
  ks_ = std::move(ks);
  has_keys_ = true;
  rebuild_cache();
}

void EncryptedDatabase::rebuild_cache() {
  blocks_.clear();
  if (!has_keys_) return;
  size_t nblocks = (entries_.size() + pp_->d - 1) / pp_->d;
  blocks_.reserve(nblocks);
  for (uint32_t b = 0; b < nblocks; ++b) {
    blocks_.emplace_back();
    recache(b);
  }
}

void EncryptedDatabase::recache(uint32_t block) {
  size_t lo = size_t(block) * pp_->d;
  size_t hi = std::min(entries_.size(), lo + pp_->d);
  std::vector<const MlweCiphertext*> keys;
  keys.reserve(hi - lo);
  for (size_t t = lo; t < hi; ++t) keys.push_back(&entries_[t].key);
  blocks_[block] = cache_block(keys, block, ks_, plan_, *pp_);
}

void EncryptedDatabase::pir_refresh(uint32_t touched_slot, bool structural) {
  PirGeometry want =
      pir_geometry(std::max<size_t>(entries_.size(), 1), sealed_bytes(), *pp_);
  if (structural && !(want == pir_.geo)) {
    pir_.geo = want;
    pir_.cells.assign(
        pir_.geo.rows,
        std::vector<std::vector<Poly>>(
            pir_.geo.cols,
            std::vector<Poly>(pir_.geo.cell_polys, Poly(pp_->d, pp_->q, true))));
    for (uint32_t t = 0; t < entries_.size(); ++t)
      pir_update_cell(pir_, t, &entries_[t].payload, *pp_);
    return;
  }
  if (touched_slot < pir_.geo.rows * pir_.geo.cols)
    pir_update_cell(pir_, touched_slot,
                    touched_slot < entries_.size()
                        ? &entries_[touched_slot].payload
                        : nullptr,
                    *pp_);
}

void EncryptedDatabase::insert(uint64_t id, MlweCiphertext key,
                               std::vector<uint8_t> payload) {
  if (pos_.count(id)) throw std::invalid_argument("insert: duplicate id");
  if (payload.size() != sealed_bytes())
    throw std::invalid_argument("insert: sealed payload has wrong length");
  if (key.b.degree() != pp_->r || key.b.modulus != pp_->q)
    throw std::invalid_argument("insert: key ciphertext parameter mismatch");
  uint32_t slot = uint32_t(entries_.size());
  entries_.push_back({id, std::move(key), std::move(payload)});
  pos_[id] = slot;
  if (has_keys_) {
    uint32_t block = slot / pp_->d;
    if (block >= blocks_.size()) blocks_.emplace_back();
    recache(block);
  }
  pir_refresh(slot, true);
}

bool EncryptedDatabase::erase(uint64_t id) {
  auto it = pos_.find(id);
  if (it == pos_.end()) return false;
  uint32_t slot = it->second;
  uint32_t last = uint32_t(entries_.size()) - 1;
  pos_.erase(it);
  if (slot != last) {
    entries_[slot] = std::move(entries_[last]);
    pos_[entries_[slot].id] = slot;
  }
  entries_.pop_back();
  if (has_keys_) {
    size_t needed = (entries_.size() + pp_->d - 1) / pp_->d;
    while (blocks_.size() > needed) blocks_.pop_back();
    uint32_t block = slot / pp_->d;
    uint32_t last_block = last / pp_->d;
    if (block < blocks_.size()) recache(block);
    if (last_block != block && last_block < blocks_.size()) recache(last_block);
  }
  pir_refresh(slot, true);
  if (slot != last) pir_refresh(last, false);
  return true;
}

std::vector<RlweCiphertext> EncryptedDatabase::search(
    const DecomposedQuery& q) const {
  if (!has_keys_) throw std::runtime_error("search: no evaluation keys installed");
  std::vector<RlweCiphertext> out;
  out.reserve(blocks_.size());
  for (const CachedBlock& blk : blocks_) out.push_back(score(q, blk, ks_, *pp_));
  return out;
}

std::vector<RlweCiphertext> EncryptedDatabase::search_plain(
    const PlainQuery& q) const {
  if (!has_keys_) throw std::runtime_error("search: no evaluation keys installed");
  std::vector<RlweCiphertext> out;
  out.reserve(blocks_.size());
  for (const CachedBlock& blk : blocks_) out.push_back(score_plain(q, blk, *pp_));
  return out;
}

std::vector<uint64_t> EncryptedDatabase::slot_ids() const {
  std::vector<uint64_t> ids;
  ids.reserve(entries_.size());
  for (const Entry& e : entries_) ids.push_back(e.id);
  return ids;
}

std::vector<RlweCiphertext> EncryptedDatabase::retrieve(const PirQuery& q) const {
  if (!has_keys_) throw std::runtime_error("retrieve: no evaluation keys installed");
  return pir_answer(q, pir_, ks_, plan_, *pp_);
}

std::vector<SearchHit> top_k(std::span<const double> scores,
                             std::span<const uint64_t> ids, size_t k) {
  if (scores.size() != ids.size())
    throw std::invalid_argument("top_k: score/id length mismatch");
  auto better = [](const SearchHit& a, const SearchHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  };
  std::vector<SearchHit> heap;  // worst hit at front
  heap.reserve(k + 1);
  auto worse_first = [&](const SearchHit& a, const SearchHit& b) {
    return better(a, b);  // std::heap keeps the "largest" at front
  };
  for (uint32_t i = 0; i < scores.size(); ++i) {
    SearchHit h{ids[i], i, scores[i]};
    if (heap.size() < k) {
      heap.push_back(h);
      std::push_heap(heap.begin(), heap.end(), worse_first);
    } else if (k > 0 && better(h, heap.front())) {
      std::pop_heap(heap.begin(), heap.end(), worse_first);
      heap.back() = h;
      std::push_heap(heap.begin(), heap.end(), worse_first);
    }
  }
  std::sort(heap.begin(), heap.end(), better);
  return heap;
}

std::vector<double> decode_block_scores(std::span<const RlweCiphertext> cts,
                                        size_t n, const SecretKey& sk) {
  const RingParams& pp = *sk.pp;
  std::vector<double> out;
  out.reserve(n);
  for (const RlweCiphertext& ct : cts) {
    Poly m = rlwe_decrypt(ct, sk);
    ScoreVector sv = decode_scores(m, pp);
    size_t take = std::min<size_t>(pp.d, n - out.size());
    out.insert(out.end(), sv.scores.begin(), sv.scores.begin() + take);
    if (out.size() == n) break;
  }
  if (out.size() != n)
    throw std::runtime_error("decode_block_scores: too few score blocks");
  return out;
}

}  // namespace hevdb
