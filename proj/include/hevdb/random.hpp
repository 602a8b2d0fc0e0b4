#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "hevdb/poly.hpp"

namespace hevdb {

using Seed = std::array<uint8_t, 16>;

// SHAKE128 squeeze stream. Wire/key format version 1 pins this XOF as the
// GenA expander.
class Xof {
 public:
  explicit Xof(std::span<const uint8_t> seed);
  ~Xof();
  Xof(const Xof&) = delete;
  Xof& operator=(const Xof&) = delete;

  void fill(uint8_t* out, size_t len);
  uint64_t next_u64();
  uint64_t uniform(uint64_t bound);  // rejection-sampled in [0, bound)

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Seedable randomness source. Defaults to fresh system entropy; a fixed seed
// makes whole pipelines reproducible for the bench harness.
class Rng {
 public:
  Rng();                             // system entropy
  explicit Rng(uint64_t fixed_seed);  // deterministic stream
  ~Rng();
  Rng(const Rng&) = delete;
  Rng& operator=(const Rng&) = delete;

  void fill(uint8_t* out, size_t len);
  uint64_t uniform(uint64_t bound);
  Seed seed16();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// MLWE a-vector expansion: s uniform degree-r polynomials mod q.
std::vector<Poly> gen_a(const Seed& rho, const RingParams& pp);

Poly sample_uniform(uint32_t degree, uint64_t modulus, Rng& rng);
Poly sample_ternary(uint32_t degree, uint64_t modulus, Rng& rng);
// Centered binomial with parameter eta (sigma = sqrt(eta/2)).
Poly sample_error(uint32_t degree, uint64_t modulus, Rng& rng, unsigned eta = 8);

}  // namespace hevdb
