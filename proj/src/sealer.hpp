#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "geometry.hpp"

namespace detworam {

using Nonce = std::array<std::uint8_t, kNonceSize>;

// Encryption and MAC keys. Distinct by construction; never serialized.
struct SealKeys {
  std::array<std::uint8_t, 32> enc_key{};
  std::array<std::uint8_t, 32> mac_key{};

  static SealKeys random();
  // Deterministic keys for reproducible runs; both keys derived from the
  // seed through a keyed hash so they stay distinct.
  static SealKeys from_seed(std::uint64_t seed);
};

// Sealed slot layout, bit-exact: [0,12) nonce, [12,12+page) ciphertext,
// [12+page, 12+page+32) MAC. The MAC covers nonce || slot_index (8-byte
// little endian) || ciphertext, binding the slot to its address so a
// swapped slot never unseals.
std::size_t sealed_size(std::size_t page_size);

// ChaCha20 encrypt + HMAC-SHA256, writing sealed_size(plain.size()) bytes.
// Deterministic given all inputs; the caller must never reuse a nonce
// under the same enc_key.
void seal(std::span<const std::uint8_t> plain, std::uint64_t slot_index,
          const SealKeys& keys, const Nonce& nonce, std::span<std::uint8_t> out);

std::vector<std::uint8_t> seal(std::span<const std::uint8_t> plain,
                               std::uint64_t slot_index, const SealKeys& keys,
                               const Nonce& nonce);

// Verifies the MAC (constant-time compare) and decrypts. Throws
// IntegrityError on any mismatch.
void unseal(std::span<const std::uint8_t> sealed, std::uint64_t slot_index,
            const SealKeys& keys, std::span<std::uint8_t> plain_out);

std::vector<std::uint8_t> unseal(std::span<const std::uint8_t> sealed,
                                 std::uint64_t slot_index, const SealKeys& keys);

// Little-endian encoding of the counter, zero-padded to 12 bytes.
Nonce nonce_from_counter(std::uint64_t counter);

// Returns the next fresh nonce and advances the counter. Strictly
// monotone; throws NonceExhaustedError instead of wrapping.
Nonce next_nonce(OramState& state);

}  // namespace detworam
