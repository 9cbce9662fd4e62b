#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include "engine.hpp"

namespace detworam {

// Eager DetWoORAM. A background worker fills a K+1-page preload buffer
// with refreshed (read, unsealed, re-sealed) copies of the round's
// refresh targets before any write arrives; the foreground write lands
// in the buffer and the worker flushes it back to the store. Writes that
// arrive while the buffer is Loading or Unloading block until it is
// Ready; reads never block.
class EagerWoram final : public OramEngine {
 public:
  enum class Lifecycle { Empty, Loading, Ready, Unloading };
  // Background spawns the worker thread; Manual leaves stepping to the
  // caller (tests drive preload_step/unload_step explicitly).
  enum class Scheduling { Background, Manual };

  EagerWoram(const OramConfig& cfg, SealKeys keys, std::unique_ptr<BackingStore> store,
             Scheduling scheduling = Scheduling::Background);
  ~EagerWoram() override;

  void write_block(std::uint64_t addr, std::span<const std::uint8_t> data) override;
  std::vector<std::uint8_t> read_block(std::uint64_t addr) override;

  // Waits until the current round is flushed and the next preload is in
  // place (store content consistent with the position map).
  void quiesce() override;

  Lifecycle lifecycle() const;

  // Single lifecycle steps, guarded by the Empty/Unloading preconditions.
  // The background worker runs these itself; calling them out of turn
  // throws StateError.
  void preload_step();
  void unload_step();

  // Observed contract violations (foreground touching the buffer outside
  // Ready, background mutating outside Loading/Unloading). Always zero
  // unless the synchronization itself is broken.
  std::uint64_t monitor_violations() const { return monitor_violations_.load(); }

 private:
  struct BufferEntry {
    std::uint64_t slot = 0;
    std::vector<std::uint8_t> sealed;
  };

  void worker_main();
  void preload_locked(std::unique_lock<std::mutex>& lock);
  void unload_locked(std::unique_lock<std::mutex>& lock);
  void throw_if_poisoned_locked() const;

  Scheduling scheduling_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  Lifecycle lifecycle_ = Lifecycle::Empty;
  bool shutdown_ = false;

  std::uint64_t round_p_ = 0;  // the write counter this buffer serves
  BufferEntry holding_entry_;
  std::vector<BufferEntry> main_entries_;  // refresh targets, ascending mod N
  // Round blocks whose latest copy lives in the buffer while unloading:
  // logical block -> buffer entry.
  std::map<std::uint64_t, BufferEntry> round_blocks_;

  std::atomic<std::uint64_t> monitor_violations_{0};
  std::thread worker_;
};

}  // namespace detworam
