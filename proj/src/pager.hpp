#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "eager.hpp"
#include "engine.hpp"
#include "parallel.hpp"
#include "workload.hpp"

namespace detworam {

enum class BackendKind { NoOram, Det, Eager, Parallel };

const char* backend_name(BackendKind kind);
std::optional<BackendKind> backend_from_name(const std::string& name);

// Deterministic cost clock: units charged per slot access and per page
// crypto operation. Keeps benchmark assertions machine-independent;
// wall-clock numbers are reported alongside but never asserted.
struct CostModel {
  std::uint64_t read_cost = 1;
  std::uint64_t write_cost = 1;
  std::uint64_t crypto_cost = 1;  // one page sealed or unsealed
};

struct PagerConfig {
  std::uint64_t resident_limit = 15;  // working set, Table-1 default
  std::size_t page_size = 4096;
  BackendKind backend = BackendKind::Det;
  unsigned threads = 1;  // Parallel worker count
  std::uint64_t main_count = 12288;
  std::uint64_t holding_count = 4096;  // K=3, ~64MB of 4kB slots
  CostModel costs;
  // Virtual app-compute units between consecutive accesses; this is the
  // idle gap the Eager variant hides its refresh work in.
  std::uint64_t idle_units = 0;
  StoreKind store_kind = StoreKind::Mem;
  std::string store_path;
  std::uint64_t key_seed = 1;
  bool record_access = false;  // Parallel per-round access log
};

struct Metrics {
  std::uint64_t accesses = 0;
  std::uint64_t hits = 0;
  std::uint64_t faults = 0;
  std::uint64_t evictions = 0;
  std::uint64_t slot_reads = 0;
  std::uint64_t slot_writes = 0;
  std::uint64_t service_units = 0;  // foreground fault-handling cost
  std::uint64_t total_units = 0;    // service + idle
  double wall_seconds = 0.0;
  std::uint64_t spawn_ns = 0;  // Parallel thread-creation time
  std::uint64_t round_ns = 0;
};

// Backing path for evicted/loaded pages. Eviction cost is the virtual
// foreground cost; background work (Eager) is modeled via on_idle.
class PagerBackend {
 public:
  virtual ~PagerBackend() = default;
  virtual std::uint64_t evict(std::uint64_t vpage, std::span<const std::uint8_t> data) = 0;
  virtual std::uint64_t load(std::uint64_t vpage, std::span<std::uint8_t> out) = 0;
  virtual void on_idle(std::uint64_t) {}
  virtual void quiesce() {}
  virtual BackingStore& store() = 0;
  virtual OramEngine* engine() { return nullptr; }
  virtual std::uint64_t capacity() const = 0;
};

// FIFO demand pager over a bounded resident set. Virtual page v maps to
// logical ORAM block v; every eviction writes through the backend
// regardless of dirtiness.
class Pager {
 public:
  explicit Pager(const PagerConfig& cfg);

  std::vector<std::uint8_t> read(std::uint64_t vpage);
  void write(std::uint64_t vpage, std::span<const std::uint8_t> data);

  const Metrics& metrics();
  BackingStore& store() { return backend_->store(); }
  OramEngine* engine() { return backend_->engine(); }
  void quiesce() { backend_->quiesce(); }
  const PagerConfig& config() const { return cfg_; }
  std::uint64_t trace_baseline() const { return trace_baseline_; }

  // Per-eviction-round snapshots (adversary's periodic view); [0] is the
  // post-init baseline.
  void enable_round_snapshots();
  const std::vector<Snapshot>& snapshots() const { return snapshots_; }

 private:
  std::vector<std::uint8_t>& ensure_resident(std::uint64_t vpage);

  PagerConfig cfg_;
  std::unique_ptr<PagerBackend> backend_;
  std::unordered_map<std::uint64_t, std::vector<std::uint8_t>> frames_;
  std::deque<std::uint64_t> fifo_;
  Metrics metrics_;
  std::uint64_t trace_baseline_ = 0;
  bool snapshot_rounds_ = false;
  std::vector<Snapshot> snapshots_;
};

struct RunOptions {
  std::uint64_t fault_budget = 0;  // 0 = unlimited
  bool snapshot_rounds = false;
};

struct RunResult {
  Metrics metrics;
  std::vector<std::uint64_t> write_seq;               // post-init write indices
  std::vector<std::set<std::uint64_t>> round_diffs;   // when snapshots were on
  std::optional<OramConfig> oram_cfg;                 // absent for NoOram
  BackendKind backend = BackendKind::Det;
  std::string trace_jsonl;  // post-init events
};

// Replays a workload deterministically: write data derives from
// (key_seed, op ordinal), runs stop at end-of-stream or once the fault
// budget is met.
RunResult run_workload(const WorkloadSpec& spec, const PagerConfig& cfg,
                       const RunOptions& opts = {});

}  // namespace detworam
