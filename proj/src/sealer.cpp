#include "sealer.hpp"

#include <sodium.h>

#include <cstring>
#include <limits>
#include <mutex>

namespace detworam {

namespace {

void ensure_sodium() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) {
      throw Error("libsodium initialization failed");
    }
  });
}

std::array<std::uint8_t, 8> slot_le(std::uint64_t slot_index) {
  std::array<std::uint8_t, 8> out;
  for (int i = 0; i < 8; ++i) {
    out[i] = static_cast<std::uint8_t>(slot_index >> (8 * i));
  }
  return out;
}

void compute_mac(std::span<const std::uint8_t> nonce, std::uint64_t slot_index,
                 std::span<const std::uint8_t> ciphertext, const SealKeys& keys,
                 std::uint8_t out[kMacSize]) {
  crypto_auth_hmacsha256_state st;
  crypto_auth_hmacsha256_init(&st, keys.mac_key.data(), keys.mac_key.size());
  crypto_auth_hmacsha256_update(&st, nonce.data(), nonce.size());
  const auto idx = slot_le(slot_index);
  crypto_auth_hmacsha256_update(&st, idx.data(), idx.size());
  crypto_auth_hmacsha256_update(&st, ciphertext.data(), ciphertext.size());
  crypto_auth_hmacsha256_final(&st, out);
}

}  // namespace

SealKeys SealKeys::random() {
  ensure_sodium();
  SealKeys k;
  randombytes_buf(k.enc_key.data(), k.enc_key.size());
  randombytes_buf(k.mac_key.data(), k.mac_key.size());
  return k;
}

SealKeys SealKeys::from_seed(std::uint64_t seed) {
  ensure_sodium();
  SealKeys k;
  std::uint8_t seed_bytes[8];
  for (int i = 0; i < 8; ++i) seed_bytes[i] = static_cast<std::uint8_t>(seed >> (8 * i));
  const std::uint8_t enc_tag[] = "detworam.enc";
  const std::uint8_t mac_tag[] = "detworam.mac";
  crypto_generichash(k.enc_key.data(), k.enc_key.size(), seed_bytes, sizeof(seed_bytes),
                     enc_tag, sizeof(enc_tag) - 1);
  crypto_generichash(k.mac_key.data(), k.mac_key.size(), seed_bytes, sizeof(seed_bytes),
                     mac_tag, sizeof(mac_tag) - 1);
  return k;
}

std::size_t sealed_size(std::size_t page_size) {
  return kNonceSize + page_size + kMacSize;
}

void seal(std::span<const std::uint8_t> plain, std::uint64_t slot_index,
          const SealKeys& keys, const Nonce& nonce, std::span<std::uint8_t> out) {
  ensure_sodium();
  if (plain.empty()) {
    throw SealError("plaintext must be exactly one page, got empty buffer");
  }
  if (out.size() != sealed_size(plain.size())) {
    throw SealError("sealed output buffer has wrong size");
  }
  std::memcpy(out.data(), nonce.data(), kNonceSize);
  std::uint8_t* ct = out.data() + kNonceSize;
  crypto_stream_chacha20_ietf_xor(ct, plain.data(), plain.size(), nonce.data(),
                                  keys.enc_key.data());
  compute_mac(std::span(out.data(), kNonceSize), slot_index,
              std::span(ct, plain.size()), keys, ct + plain.size());
}

std::vector<std::uint8_t> seal(std::span<const std::uint8_t> plain,
                               std::uint64_t slot_index, const SealKeys& keys,
                               const Nonce& nonce) {
  std::vector<std::uint8_t> out(sealed_size(plain.size()));
  seal(plain, slot_index, keys, nonce, out);
  return out;
}

void unseal(std::span<const std::uint8_t> sealed, std::uint64_t slot_index,
            const SealKeys& keys, std::span<std::uint8_t> plain_out) {
  ensure_sodium();
  if (sealed.size() < kNonceSize + kMacSize ||
      sealed.size() != sealed_size(plain_out.size())) {
    throw SizeMismatchError("sealed slot has wrong size");
  }
  const std::size_t ct_len = sealed.size() - kNonceSize - kMacSize;
  const std::uint8_t* nonce = sealed.data();
  const std::uint8_t* ct = sealed.data() + kNonceSize;
  const std::uint8_t* mac = ct + ct_len;

  std::uint8_t expected[kMacSize];
  compute_mac(std::span(nonce, kNonceSize), slot_index, std::span(ct, ct_len), keys,
              expected);
  if (sodium_memcmp(expected, mac, kMacSize) != 0) {
    throw IntegrityError("MAC mismatch at slot " + std::to_string(slot_index));
  }
  crypto_stream_chacha20_ietf_xor(plain_out.data(), ct, ct_len, nonce,
                                  keys.enc_key.data());
}

std::vector<std::uint8_t> unseal(std::span<const std::uint8_t> sealed,
                                 std::uint64_t slot_index, const SealKeys& keys) {
  if (sealed.size() < kNonceSize + kMacSize) {
    throw SizeMismatchError("sealed slot has wrong size");
  }
  std::vector<std::uint8_t> plain(sealed.size() - kNonceSize - kMacSize);
  unseal(sealed, slot_index, keys, plain);
  return plain;
}

Nonce nonce_from_counter(std::uint64_t counter) {
  Nonce n{};
  for (int i = 0; i < 8; ++i) {
    n[i] = static_cast<std::uint8_t>(counter >> (8 * i));
  }
  return n;
}

Nonce next_nonce(OramState& state) {
  if (state.nonce_counter == std::numeric_limits<std::uint64_t>::max()) {
    throw NonceExhaustedError("nonce counter exhausted");
  }
  return nonce_from_counter(state.nonce_counter++);
}

}  // namespace detworam
