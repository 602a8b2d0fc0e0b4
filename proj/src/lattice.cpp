#include "hevdb/lattice.hpp"

#include <openssl/evp.h>
#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace hevdb {

namespace {

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  size_t base = out.size();
  out.resize(base + 4);
  std::memcpy(out.data() + base, &v, 4);
}

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
  size_t base = out.size();
  out.resize(base + 8);
  std::memcpy(out.data() + base, &v, 8);
}

uint32_t get_u32(const uint8_t* data, size_t len, size_t& off) {
  if (off + 4 > len) throw std::runtime_error("truncated message");
  uint32_t v;
  std::memcpy(&v, data + off, 4);
  off += 4;
  return v;
}

uint64_t get_u64(const uint8_t* data, size_t len, size_t& off) {
  if (off + 8 > len) throw std::runtime_error("truncated message");
  uint64_t v;
  std::memcpy(&v, data + off, 8);
  off += 8;
  return v;
}

// Small error with matching (q, p) residues, ready for mod-qp arithmetic.
RnsPoly sample_error_rns(uint32_t degree, const RingParams& pp, Rng& rng) {
  Poly e = sample_error(degree, pp.q, rng);
  return mod_up(e, pp);
}

}  // namespace

SecretKey gen_secret_key(ParamsPtr pp, Rng& rng) {
  SecretKey sk;
  sk.pp = pp;
  sk.s.reserve(pp->s);
  for (uint32_t u = 0; u < pp->s; ++u)
    sk.s.push_back(sample_ternary(pp->r, pp->q, rng));
  sk.sp = sample_ternary(pp->d, pp->q, rng);
  sk.sp_ntt = sk.sp;
  to_ntt(sk.sp_ntt, pp->ntt_dq);
  rng.fill(sk.aes_key.data(), sk.aes_key.size());
  return sk;
}

void save_secret_key(const SecretKey& sk, const std::string& path) {
  const RingParams& pp = *sk.pp;
  std::vector<uint8_t> buf;
  buf.insert(buf.end(), {'H', 'E', 'V', 'K', 1});
  put_u32(buf, pp.d);
  put_u32(buf, pp.r);
  put_u32(buf, uint32_t(std::bit_width(pp.q)));
  put_u32(buf, uint32_t(std::bit_width(pp.p)));
  put_u32(buf, uint32_t(std::countr_zero(pp.delta)));
  for (const Poly& su : sk.s) serialize_poly(su, buf);
  serialize_poly(sk.sp, buf);
  buf.insert(buf.end(), sk.aes_key.begin(), sk.aes_key.end());
  uint32_t crc = uint32_t(crc32(0, buf.data(), uInt(buf.size())));
  put_u32(buf, crc);

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write key file: " + path);
  f.write(reinterpret_cast<const char*>(buf.data()), std::streamsize(buf.size()));
  if (!f) throw std::runtime_error("short write to key file: " + path);
}

SecretKey load_secret_key(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open key file: " + path);
  std::vector<uint8_t> buf((std::istreambuf_iterator<char>(f)),
                           std::istreambuf_iterator<char>());
  if (buf.size() < 5 + 20 + 4 || std::memcmp(buf.data(), "HEVK\x01", 5) != 0)
    throw std::runtime_error("key file corrupted: bad header");
  uint32_t crc = uint32_t(crc32(0, buf.data(), uInt(buf.size() - 4)));
  uint32_t stored;
  std::memcpy(&stored, buf.data() + buf.size() - 4, 4);
  if (crc != stored) throw std::runtime_error("key file corrupted: checksum mismatch");

  size_t off = 5;
  size_t len = buf.size() - 4;
  uint32_t d = get_u32(buf.data(), len, off);
  uint32_t r = get_u32(buf.data(), len, off);
  uint32_t q_bits = get_u32(buf.data(), len, off);
  uint32_t p_bits = get_u32(buf.data(), len, off);
  uint32_t delta_bits = get_u32(buf.data(), len, off);
  SecretKey sk;
  sk.pp = RingParams::make(d, r, q_bits, p_bits, delta_bits);
  for (uint32_t u = 0; u < sk.pp->s; ++u)
    sk.s.push_back(deserialize_poly(buf.data(), len, off));
  sk.sp = deserialize_poly(buf.data(), len, off);
  if (off + 32 != len) throw std::runtime_error("key file corrupted: bad length");
  std::memcpy(sk.aes_key.data(), buf.data() + off, 32);
  sk.sp_ntt = sk.sp;
  to_ntt(sk.sp_ntt, sk.pp->ntt_dq);
  return sk;
}

MlweCiphertext mlwe_encrypt(const Poly& m, const SecretKey& sk, Rng& rng) {
  const RingParams& pp = *sk.pp;
  if (m.degree() != pp.r || m.modulus != pp.q || m.ntt_form)
    throw std::invalid_argument("mlwe_encrypt: degree-r mod-q coefficient input expected");
  MlweCiphertext ct;
  ct.rho = rng.seed16();
  std::vector<Poly> a = gen_a(ct.rho, pp);
  ct.b = add(m, sample_error(pp.r, pp.q, rng));
  for (uint32_t u = 0; u < pp.s; ++u)
    sub_inplace(ct.b, negacyclic_multiply(a[u], sk.s[u], pp.ntt_rq));
  return ct;
}

Poly mlwe_decrypt(const MlweCiphertext& ct, const SecretKey& sk) {
  const RingParams& pp = *sk.pp;
  std::vector<Poly> a = gen_a(ct.rho, pp);
  Poly m = ct.b;
  for (uint32_t u = 0; u < pp.s; ++u)
    add_inplace(m, negacyclic_multiply(a[u], sk.s[u], pp.ntt_rq));
  return m;
}

RlweCiphertext rlwe_encrypt(const Poly& m, const SecretKey& sk, Rng& rng) {
  const RingParams& pp = *sk.pp;
  if (m.degree() != pp.d || m.modulus != pp.q || m.ntt_form)
    throw std::invalid_argument("rlwe_encrypt: degree-d mod-q coefficient input expected");
  RlweCiphertext ct;
  ct.c1 = sample_uniform(pp.d, pp.q, rng);
  ct.c0 = add(m, sample_error(pp.d, pp.q, rng));
  sub_inplace(ct.c0, negacyclic_multiply(ct.c1, sk.sp, pp.ntt_dq));
  return ct;
}

Poly rlwe_decrypt(const RlweCiphertext& ct, const SecretKey& sk) {
  const RingParams& pp = *sk.pp;
  if (ct.c0.ntt_form != ct.c1.ntt_form)
    throw std::invalid_argument("rlwe_decrypt: mixed representation");
  if (ct.c0.ntt_form) {
    Poly m = add(ct.c0, pointwise(ct.c1, sk.sp_ntt));
    from_ntt(m, pp.ntt_dq);
    return m;
  }
  return add(ct.c0, negacyclic_multiply(ct.c1, sk.sp, pp.ntt_dq));
}

SwitchKey gen_switch_key(const Poly& src, const Poly& dst,
                         const RingParams& pp, Rng& rng) {
  if (src.degree() != pp.d || dst.degree() != pp.d || src.ntt_form || dst.ntt_form)
    throw std::invalid_argument("gen_switch_key: degree-d coefficient inputs expected");
  RnsPoly dst_rns = mod_up(dst, pp);
  to_ntt(dst_rns.q_part, pp.ntt_dq);
  to_ntt(dst_rns.p_part, pp.ntt_dp);
  Poly src_ntt = src;
  to_ntt(src_ntt, pp.ntt_dq);
  RnsPoly e = sample_error_rns(pp.d, pp, rng);
  to_ntt(e.q_part, pp.ntt_dq);
  to_ntt(e.p_part, pp.ntt_dp);

  SwitchKey k;
  k.k1q = sample_uniform(pp.d, pp.q, rng);
  k.k1q.ntt_form = true;
  k.k1p = sample_uniform(pp.d, pp.p, rng);
  k.k1p.ntt_form = true;

  // k0 = p * src + e - k1 * dst over the (q, p) base; p vanishes mod p.
  k.k0q = src_ntt;
  scale_inplace(k.k0q, pp.p_mod_q);
  add_inplace(k.k0q, e.q_part);
  sub_inplace(k.k0q, pointwise(k.k1q, dst_rns.q_part));
  k.k0p = sub(e.p_part, pointwise(k.k1p, dst_rns.p_part));
  return k;
}

RnsPoly rns_ntt(const Poly& a, const RingParams& pp) {
  if (a.degree() != pp.d) throw std::invalid_argument("rns_ntt: degree-d input expected");
  RnsPoly out = mod_up(a, pp);
  to_ntt(out.q_part, pp.ntt_dq);
  to_ntt(out.p_part, pp.ntt_dp);
  return out;
}

KsAccumulator::KsAccumulator(const RingParams& pp)
    : pp_(pp),
      a0q_(pp.d, pp.q, true),
      a0p_(pp.d, pp.p, true),
      a1q_(pp.d, pp.q, true),
      a1p_(pp.d, pp.p, true) {}

void KsAccumulator::add(const RnsPoly& a_hat, const SwitchKey& k) {
  pointwise_accumulate(a0q_, a_hat.q_part, k.k0q);
  pointwise_accumulate(a0p_, a_hat.p_part, k.k0p);
  pointwise_accumulate(a1q_, a_hat.q_part, k.k1q);
  pointwise_accumulate(a1p_, a_hat.p_part, k.k1p);
}

std::pair<Poly, Poly> KsAccumulator::finish() {
  from_ntt(a0q_, pp_.ntt_dq);
  from_ntt(a0p_, pp_.ntt_dp);
  from_ntt(a1q_, pp_.ntt_dq);
  from_ntt(a1p_, pp_.ntt_dp);
  Poly c0 = mod_down({a0q_, a0p_}, pp_);
  Poly c1 = mod_down({a1q_, a1p_}, pp_);
  return {std::move(c0), std::move(c1)};
}

std::pair<Poly, Poly> key_switch(const Poly& a, const SwitchKey& k,
                                 const RingParams& pp) {
  KsAccumulator acc(pp);
  acc.add(rns_ntt(a, pp), k);
  return acc.finish();
}

SwitchKeySet gen_switch_keys(const SecretKey& sk, Rng& rng) {
  const RingParams& pp = *sk.pp;
  uint64_t two_d = 2 * uint64_t(pp.d);
  SwitchKeySet ks;
  ks.decompose_keys.resize(pp.r);
  ks.cache_keys.resize(pp.r);
  for (uint32_t j = 0; j < pp.r; ++j) {
    uint64_t t = 2 * uint64_t(j) + 1;
    uint64_t tinv = inv_odd_mod_pow2(t, two_d);
    Poly dst_j = automorphism(sk.sp, tinv);  // phi_j^{-1}(s')
    ks.decompose_keys[j].reserve(pp.s);
    ks.cache_keys[j].reserve(pp.s);
    for (uint32_t u = 0; u < pp.s; ++u) {
      Poly su = embed(sk.s[u], pp);
      ks.decompose_keys[j].push_back(gen_switch_key(su, dst_j, pp, rng));
      ks.cache_keys[j].push_back(
          gen_switch_key(automorphism(su, t), sk.sp, pp, rng));
    }
  }
  Poly sp2 = negacyclic_multiply(sk.sp, sk.sp, pp.ntt_dq);
  ks.relin_key = gen_switch_key(sp2, sk.sp, pp, rng);
  return ks;
}

// ---- serialization ----

void serialize_mlwe(const MlweCiphertext& ct, std::vector<uint8_t>& out) {
  serialize_poly(ct.b, out);
  out.insert(out.end(), ct.rho.begin(), ct.rho.end());
}

MlweCiphertext deserialize_mlwe(const uint8_t* data, size_t len, size_t& off) {
  MlweCiphertext ct;
  ct.b = deserialize_poly(data, len, off);
  if (off + 16 > len) throw std::runtime_error("deserialize_mlwe: truncated");
  std::memcpy(ct.rho.data(), data + off, 16);
  off += 16;
  return ct;
}

void serialize_rlwe(const RlweCiphertext& ct, std::vector<uint8_t>& out) {
  serialize_poly(ct.c0, out);
  serialize_poly(ct.c1, out);
}

RlweCiphertext deserialize_rlwe(const uint8_t* data, size_t len, size_t& off) {
  RlweCiphertext ct;
  ct.c0 = deserialize_poly(data, len, off);
  ct.c1 = deserialize_poly(data, len, off);
  return ct;
}

void serialize_switch_key(const SwitchKey& k, const RingParams& pp,
                          std::vector<uint8_t>& out) {
  // Wire form is coefficient domain; the tables are re-applied on load.
  for (const Poly* part : {&k.k0q, &k.k0p, &k.k1q, &k.k1p}) {
    Poly c = *part;
    from_ntt(c, c.modulus == pp.q ? pp.ntt_dq : pp.ntt_dp);
    serialize_poly(c, out);
  }
}

SwitchKey deserialize_switch_key(const uint8_t* data, size_t len, size_t& off,
                                 const RingParams& pp) {
  SwitchKey k;
  for (Poly* part : {&k.k0q, &k.k0p, &k.k1q, &k.k1p}) {
    *part = deserialize_poly(data, len, off);
    if (part->degree() != pp.d || (part->modulus != pp.q && part->modulus != pp.p))
      throw std::runtime_error("deserialize_switch_key: parameter mismatch");
    to_ntt(*part, part->modulus == pp.q ? pp.ntt_dq : pp.ntt_dp);
  }
  return k;
}

void serialize_switch_key_set(const SwitchKeySet& ks, const RingParams& pp,
                              std::vector<uint8_t>& out) {
  put_u64(out, ks.epoch);
  put_u32(out, pp.r);
  put_u32(out, pp.s);
  for (const auto& row : ks.decompose_keys)
    for (const auto& k : row) serialize_switch_key(k, pp, out);
  for (const auto& row : ks.cache_keys)
    for (const auto& k : row) serialize_switch_key(k, pp, out);
  serialize_switch_key(ks.relin_key, pp, out);
}

SwitchKeySet deserialize_switch_key_set(const uint8_t* data, size_t len,
                                        size_t& off, const RingParams& pp) {
  SwitchKeySet ks;
  ks.epoch = get_u64(data, len, off);
  uint32_t r = get_u32(data, len, off);
  uint32_t s = get_u32(data, len, off);
  if (r != pp.r || s != pp.s)
    throw std::runtime_error("deserialize_switch_key_set: parameter mismatch");
  ks.decompose_keys.resize(r);
  ks.cache_keys.resize(r);
  for (auto& row : ks.decompose_keys)
    for (uint32_t u = 0; u < s; ++u)
      row.push_back(deserialize_switch_key(data, len, off, pp));
  for (auto& row : ks.cache_keys)
    for (uint32_t u = 0; u < s; ++u)
      row.push_back(deserialize_switch_key(data, len, off, pp));
  ks.relin_key = deserialize_switch_key(data, len, off, pp);
  return ks;
}

// ---- payload sealing ----

std::vector<uint8_t> aead_seal(std::span<const uint8_t> pt, const AesKey& key,
                               size_t slot_bytes, Rng& rng) {
  if (pt.size() + 4 > slot_bytes)
    throw std::invalid_argument("aead_seal: payload exceeds slot size");
  std::vector<uint8_t> frame(slot_bytes, 0);
  uint32_t n = uint32_t(pt.size());
  std::memcpy(frame.data(), &n, 4);
  std::memcpy(frame.data() + 4, pt.data(), pt.size());

  std::vector<uint8_t> out(12 + slot_bytes + 16);
  rng.fill(out.data(), 12);

  EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
  int outl = 0, finl = 0;
  bool ok = ctx &&
            EVP_EncryptInit_ex(ctx, EVP_aes_256_gcm(), nullptr, key.data(),
                               out.data()) == 1 &&
            EVP_EncryptUpdate(ctx, out.data() + 12, &outl, frame.data(),
                              int(frame.size())) == 1 &&
            EVP_EncryptFinal_ex(ctx, out.data() + 12 + outl, &finl) == 1 &&
            EVP_CIPHER_CTX_ctrl(ctx, EVP_CTRL_GCM_GET_TAG, 16,
                                out.data() + 12 + slot_bytes) == 1;
  EVP_CIPHER_CTX_free(ctx);
  if (!ok || size_t(outl + finl) != slot_bytes)
    throw std::runtime_error("aead_seal: encryption failed");
  return out;
}

std::vector<uint8_t> aead_open(std::span<const uint8_t> blob, const AesKey& key) {
  if (blob.size() < 12 + 4 + 16) throw std::runtime_error("aead_open: blob too short");
  size_t ct_len = blob.size() - 12 - 16;
  std::vector<uint8_t> frame(ct_len);

  EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
  int outl = 0, finl = 0;
  bool ok = ctx &&
            EVP_DecryptInit_ex(ctx, EVP_aes_256_gcm(), nullptr, key.data(),
                               blob.data()) == 1 &&
            EVP_DecryptUpdate(ctx, frame.data(), &outl, blob.data() + 12,
                              int(ct_len)) == 1 &&
            EVP_CIPHER_CTX_ctrl(
                ctx, EVP_CTRL_GCM_SET_TAG, 16,
                const_cast<uint8_t*>(blob.data() + blob.size() - 16)) == 1 &&
            EVP_DecryptFinal_ex(ctx, frame.data() + outl, &finl) == 1;
  EVP_CIPHER_CTX_free(ctx);
  if (!ok || size_t(outl + finl) != ct_len)
    throw std::runtime_error("aead_open: authentication failed");

  uint32_t n;
  std::memcpy(&n, frame.data(), 4);
  if (size_t(n) + 4 > ct_len) throw std::runtime_error("aead_open: bad length field");
  return std::vector<uint8_t>(frame.begin() + 4, frame.begin() + 4 + n);
}

}  // namespace hevdb
