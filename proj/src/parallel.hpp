#pragma once

#include <cstdint>
#include <vector>

#include "engine.hpp"

namespace detworam {

// Round-robin split of the refresh loop: iteration ordinal q goes to
// worker q mod T. Assignments are disjoint, cover [0, count), and
// per-worker loads differ by at most one.
struct RefreshPartition {
  unsigned worker_count = 1;
  std::vector<std::vector<std::uint64_t>> assignments;
};
RefreshPartition partition(std::uint64_t count, unsigned workers);

// Per-round record of which indices each worker touched; used to verify
// that refresh iterations really are independent (disjoint write sets,
// no cross-worker write/read overlap).
struct RoundAccessLog {
  struct WorkerAccess {
    std::vector<std::uint64_t> slot_reads;
    std::vector<std::uint64_t> slot_writes;
    std::vector<std::uint64_t> pos_reads;
    std::vector<std::uint64_t> pos_writes;
  };
  std::vector<WorkerAccess> workers;
};

// Parallel DetWoORAM: the holding write stays serial, the refresh loop
// fans out across T workers, and p advances only after the join barrier.
// Rounds never overlap.
class ParallelWoram final : public OramEngine {
 public:
  ParallelWoram(const OramConfig& cfg, SealKeys keys,
                std::unique_ptr<BackingStore> store, unsigned threads,
                bool record_access = false);

  void write_block(std::uint64_t addr, std::span<const std::uint8_t> data) override;

  unsigned threads() const { return threads_; }

  struct SpawnStats {
    std::uint64_t spawn_ns = 0;  // time spent creating worker threads
    std::uint64_t round_ns = 0;  // total write_block time
    std::uint64_t rounds = 0;
  };
  const SpawnStats& spawn_stats() const { return spawn_stats_; }

  // Valid after a write when access recording is enabled.
  const RoundAccessLog& last_round_access() const { return last_round_; }

 private:
  unsigned threads_;
  bool record_access_;
  SpawnStats spawn_stats_;
  RoundAccessLog last_round_;
};

}  // namespace detworam
