#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "errors.hpp"

namespace detworam {

inline constexpr std::size_t kNonceSize = 12;
inline constexpr std::size_t kMacSize = 32;

// Geometry of the store: N main slots, M holding slots, page size.
// The ratio K = N/M is kept exact by doing all floor(p*K) arithmetic as
// (p*N)/M in integers; no floating point anywhere in the hot path.
struct OramConfig {
  std::uint64_t main_count = 0;     // N
  std::uint64_t holding_count = 0;  // M
  std::size_t page_size = 0;

  // Validates N >= M >= 1 and page_size (>= 16, multiple of 16).
  static OramConfig create(std::uint64_t main_count, std::uint64_t holding_count,
                           std::size_t page_size);

  std::uint64_t total_slots() const { return main_count + holding_count; }
  std::size_t sealed_slot_size() const { return kNonceSize + page_size + kMacSize; }

  // count of main-area refreshes per write is floor(K) or ceil(K)
  std::uint64_t max_refresh_count() const {
    return (main_count + holding_count - 1) / holding_count;  // ceil(N/M)
  }
};

// Slot targeted in the holding area by the p-th write: N + (p mod M).
std::uint64_t holding_slot(std::uint64_t p, const OramConfig& cfg);

// Main-area refresh window of the p-th write. start = floor(p*K) mod N,
// count = floor((p+1)*K) - floor(p*K); the refreshed indices are
// start, start+1, ... taken mod N. (start,count) form because the raw
// [s,e) interval can wrap or come out empty-looking when e <= s.
struct RefreshRange {
  std::uint64_t start = 0;
  std::uint64_t count = 0;
};
RefreshRange refresh_range(std::uint64_t p, const OramConfig& cfg);

// The refresh window expanded to explicit indices, ascending mod N.
std::vector<std::uint64_t> refresh_indices(std::uint64_t p, const OramConfig& cfg);

// Every slot the p-th write touches, in canonical order: holding slot
// first, then the refresh indices ascending mod N. A function of p and
// the geometry only -- never of the logical address being written.
std::vector<std::uint64_t> expected_write_set(std::uint64_t p, const OramConfig& cfg);

// Latest-copy slot of each logical block. entries[a] is either a itself
// (main area) or a holding slot in [N, N+M).
class PositionMap {
 public:
  explicit PositionMap(const OramConfig& cfg)
      : main_count_(cfg.main_count), total_slots_(cfg.total_slots()),
        entries_(cfg.main_count) {
    for (std::uint64_t a = 0; a < main_count_; ++a) entries_[a] = a;
  }

  std::uint64_t operator[](std::uint64_t a) const { return entries_[a]; }

  void set(std::uint64_t a, std::uint64_t slot) {
    if (slot != a && slot < main_count_) {
      throw StateError("position map: block " + std::to_string(a) +
                       " cannot point at foreign main slot " + std::to_string(slot));
    }
    if (slot >= total_slots_) {
      throw OutOfRangeError("position map: slot out of range");
    }
    entries_[a] = slot;
  }

  std::uint64_t size() const { return entries_.size(); }

 private:
  std::uint64_t main_count_;
  std::uint64_t total_slots_;
  std::vector<std::uint64_t> entries_;
};

// Trusted per-instance counters. Cur_H and Cur_M are not stored; both
// derive from p (holding_slot / refresh_range above).
struct OramState {
  std::uint64_t write_counter = 0;  // p
  std::uint64_t nonce_counter = 0;
};

}  // namespace detworam
