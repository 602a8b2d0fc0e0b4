#include "hevdb/random.hpp"

#include <openssl/evp.h>
#include <openssl/rand.h>

#include <bit>
#include <cstring>
#include <stdexcept>

namespace hevdb {

// OpenSSL 3.0 has no streaming squeeze, so the stream is defined as
// counter-mode SHAKE128: block i = SHAKE128(seed || le64(i), 64 KiB).
struct Xof::Impl {
  std::vector<uint8_t> seed;
  uint64_t counter = 0;
  std::vector<uint8_t> buf;
  size_t pos = 0;

  explicit Impl(std::span<const uint8_t> s) : seed(s.begin(), s.end()) {}

  void refill() {
    buf.resize(1 << 16);
    pos = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_shake128(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx, seed.data(), seed.size()) != 1 ||
        EVP_DigestUpdate(ctx, &counter, 8) != 1 ||
        EVP_DigestFinalXOF(ctx, buf.data(), buf.size()) != 1) {
      EVP_MD_CTX_free(ctx);
      throw std::runtime_error("XOF failed");
    }
    EVP_MD_CTX_free(ctx);
    ++counter;
  }
};

Xof::Xof(std::span<const uint8_t> seed) : impl_(std::make_unique<Impl>(seed)) {}
Xof::~Xof() = default;

void Xof::fill(uint8_t* out, size_t len) {
  while (len) {
    if (impl_->pos == impl_->buf.size()) impl_->refill();
    size_t take = std::min(len, impl_->buf.size() - impl_->pos);
    std::memcpy(out, impl_->buf.data() + impl_->pos, take);
    impl_->pos += take;
    out += take;
    len -= take;
  }
}

uint64_t Xof::next_u64() {
  uint64_t v;
  fill(reinterpret_cast<uint8_t*>(&v), 8);
  return v;
}

uint64_t Xof::uniform(uint64_t bound) {
  uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  for (;;) {
    uint64_t v = next_u64();
    if (v < limit) return v % bound;
  }
}

struct Rng::Impl {
  bool deterministic = false;
  std::unique_ptr<Xof> stream;
};

Rng::Rng() : impl_(std::make_unique<Impl>()) {}

Rng::Rng(uint64_t fixed_seed) : impl_(std::make_unique<Impl>()) {
  impl_->deterministic = true;
  uint8_t seed[16] = {'r', 'n', 'g', 0};
  std::memcpy(seed + 8, &fixed_seed, 8);
  impl_->stream = std::make_unique<Xof>(std::span<const uint8_t>(seed, 16));
}

Rng::~Rng() = default;

void Rng::fill(uint8_t* out, size_t len) {
  if (impl_->deterministic) {
    impl_->stream->fill(out, len);
  } else if (RAND_bytes(out, static_cast<int>(len)) != 1) {
    throw std::runtime_error("RAND_bytes failed");
  }
}

uint64_t Rng::uniform(uint64_t bound) {
  uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  for (;;) {
    uint64_t v;
    fill(reinterpret_cast<uint8_t*>(&v), 8);
    if (v < limit) return v % bound;
  }
}

Seed Rng::seed16() {
  Seed s;
  fill(s.data(), s.size());
  return s;
}

std::vector<Poly> gen_a(const Seed& rho, const RingParams& pp) {
  Xof xof(std::span<const uint8_t>(rho.data(), rho.size()));
  std::vector<Poly> a;
  a.reserve(pp.s);
  for (uint32_t u = 0; u < pp.s; ++u) {
    Poly au(pp.r, pp.q);
    for (uint32_t i = 0; i < pp.r; ++i) au.c[i] = xof.uniform(pp.q);
    a.push_back(std::move(au));
  }
  return a;
}

Poly sample_uniform(uint32_t degree, uint64_t modulus, Rng& rng) {
  Poly a(degree, modulus);
  for (auto& x : a.c) x = rng.uniform(modulus);
  return a;
}

Poly sample_ternary(uint32_t degree, uint64_t modulus, Rng& rng) {
  Poly a(degree, modulus);
  for (auto& x : a.c) {
    uint64_t v = rng.uniform(3);
    x = v == 2 ? modulus - 1 : v;
  }
  return a;
}

Poly sample_error(uint32_t degree, uint64_t modulus, Rng& rng, unsigned eta) {
  Poly a(degree, modulus);
  for (auto& x : a.c) {
    int64_t v = 0;
    uint64_t bits;
    rng.fill(reinterpret_cast<uint8_t*>(&bits), 8);
    for (unsigned i = 0; i < eta; ++i) {
      v += int64_t((bits >> (2 * i)) & 1);
      v -= int64_t((bits >> (2 * i + 1)) & 1);
    }
    x = v >= 0 ? uint64_t(v) : modulus - uint64_t(-v);
  }
  return a;
}

}  // namespace hevdb
