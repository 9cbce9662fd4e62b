#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace detworam {

// One traced store access. Reads are recorded for metrics but are
// invisible to the adversary under the write-only model.
struct TraceEvent {
  std::uint64_t seq = 0;
  bool is_write = false;
  std::uint64_t slot = 0;
};

// Per-slot 32-byte digests of the store content at one point in time.
struct Snapshot {
  std::vector<std::array<std::uint8_t, 32>> digests;
};

// Slots whose bytes differ between two snapshots of the same store.
std::set<std::uint64_t> diff(const Snapshot& a, const Snapshot& b);

// Flat array of slot_count fixed-size slots, the adversary-observable
// memory. Every access appends a trace event before returning. Writes
// to distinct slots may happen concurrently; trace appends are
// serialized internally.
class BackingStore {
 public:
  BackingStore(std::uint64_t slot_count, std::size_t slot_size)
      : slot_count_(slot_count), slot_size_(slot_size) {}
  virtual ~BackingStore() = default;

  void read(std::uint64_t idx, std::span<std::uint8_t> out);
  void write(std::uint64_t idx, std::span<const std::uint8_t> data);

  std::vector<std::uint8_t> read(std::uint64_t idx) {
    std::vector<std::uint8_t> out(slot_size_);
    read(idx, out);
    return out;
  }

  Snapshot snapshot() const;

  std::uint64_t slot_count() const { return slot_count_; }
  std::size_t slot_size() const { return slot_size_; }

  std::vector<TraceEvent> trace() const;
  std::uint64_t trace_size() const;
  // Write-slot indices in event order, starting at trace position `from`.
  std::vector<std::uint64_t> write_indices(std::uint64_t from = 0) const;

  // One JSON object per line: {"seq":n,"kind":"r"|"w","slot":n}
  void export_trace_jsonl(std::ostream& os, std::uint64_t from = 0) const;

 protected:
  virtual void read_slot(std::uint64_t idx, std::span<std::uint8_t> out) const = 0;
  virtual void write_slot(std::uint64_t idx, std::span<const std::uint8_t> data) = 0;

 private:
  void check_idx(std::uint64_t idx) const;

  std::uint64_t slot_count_;
  std::size_t slot_size_;
  mutable std::mutex trace_mu_;
  std::vector<TraceEvent> trace_;
};

// Store kept in one contiguous heap buffer.
class MemStore final : public BackingStore {
 public:
  MemStore(std::uint64_t slot_count, std::size_t slot_size);

 protected:
  void read_slot(std::uint64_t idx, std::span<std::uint8_t> out) const override;
  void write_slot(std::uint64_t idx, std::span<const std::uint8_t> data) override;

 private:
  std::vector<std::uint8_t> bytes_;
};

// Store backed by a single flat file, slot i at offset i*slot_size, no
// header. pread/pwrite keep concurrent distinct-slot access safe.
class FileStore final : public BackingStore {
 public:
  FileStore(std::uint64_t slot_count, std::size_t slot_size, const std::string& path);
  ~FileStore() override;

 protected:
  void read_slot(std::uint64_t idx, std::span<std::uint8_t> out) const override;
  void write_slot(std::uint64_t idx, std::span<const std::uint8_t> data) override;

 private:
  int fd_ = -1;
};

enum class StoreKind { Mem, File };

std::unique_ptr<BackingStore> make_store(StoreKind kind, std::uint64_t slot_count,
                                         std::size_t slot_size,
                                         const std::string& file_path = {});

}  // namespace detworam
