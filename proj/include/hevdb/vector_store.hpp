#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hevdb/pir.hpp"
#include "hevdb/secure_ip.hpp"

namespace hevdb {

struct Entry {
  uint64_t id = 0;
  MlweCiphertext key;
  std::vector<uint8_t> payload;  // sealed blob, fixed length
};

// Server-side state: entries in slot order, one cache block per d slots, and
// the PIR grid over the sealed payloads. Updates touch at most one block per
// insert and two per delete; blocks are always bit-identical to a fresh
// rebuild of the same entry list.
class EncryptedDatabase {
 public:
  EncryptedDatabase(ParamsPtr pp, size_t payload_slot_bytes);

  const RingParams& params() const { return *pp_; }
  ParamsPtr params_ptr() const { return pp_; }
  const ButterflyPlan& plan() const { return plan_; }
  size_t size() const { return entries_.size(); }
  size_t payload_slot() const { return slot_bytes_; }
  size_t sealed_bytes() const { return 12 + slot_bytes_ + 16; }
  bool has_keys() const { return has_keys_; }
  uint64_t epoch() const { return ks_.epoch; }
  const SwitchKeySet& switch_keys() const;

  // Installing evaluation keys (re)builds every cache block.
  void set_switch_keys(SwitchKeySet ks);

  void insert(uint64_t id, MlweCiphertext key, std::vector<uint8_t> payload);
  bool erase(uint64_t id);
  bool contains(uint64_t id) const { return pos_.count(id) != 0; }

  // One encrypted score polynomial per block, in slot order.
  std::vector<RlweCiphertext> search(const DecomposedQuery& q) const;
  std::vector<RlweCiphertext> search_plain(const PlainQuery& q) const;
  std::vector<uint64_t> slot_ids() const;

  const PirGeometry& retrieval_geometry() const { return pir_.geo; }
  std::vector<RlweCiphertext> retrieve(const PirQuery& q) const;

  const std::vector<Entry>& entries() const { return entries_; }
  const std::vector<CachedBlock>& blocks() const { return blocks_; }

  // Full rebuild from the current entry list (used by tests and snapshot
  // load; normal updates never need it).
  void rebuild_cache();

 private:
  void recache(uint32_t block);
  void pir_refresh(uint32_t touched_slot, bool structural);

  ParamsPtr pp_;
  ButterflyPlan plan_;
  SwitchKeySet ks_;
  bool has_keys_ = false;
  size_t slot_bytes_;
  std::vector<Entry> entries_;
  std::unordered_map<uint64_t, uint32_t> pos_;
  std::vector<CachedBlock> blocks_;
  PirMatrix pir_;
};

// Client-side selection: k best scores, ties broken toward the smaller id.
struct SearchHit {
  uint64_t id = 0;
  uint32_t slot = 0;
  double score = 0;
};

std::vector<SearchHit> top_k(std::span<const double> scores,
                             std::span<const uint64_t> ids, size_t k);

// Decode per-block score ciphertexts into one flat score array of length n.
std::vector<double> decode_block_scores(std::span<const RlweCiphertext> cts,
                                        size_t n, const SecretKey& sk);

}  // namespace hevdb
