#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "geometry.hpp"
#include "sealer.hpp"
#include "store.hpp"

namespace detworam {

// Common trusted state and plumbing shared by the three engine
// variants: geometry, keys, position map, write/nonce counters, and the
// backing store. Construction seals a fresh zero page into every slot so
// a read before the first write is well defined and the initialization
// traffic is indistinguishable from refresh traffic.
class OramEngine {
 public:
  OramEngine(const OramConfig& cfg, SealKeys keys, std::unique_ptr<BackingStore> store);
  virtual ~OramEngine() = default;

  OramEngine(const OramEngine&) = delete;
  OramEngine& operator=(const OramEngine&) = delete;

  virtual void write_block(std::uint64_t addr, std::span<const std::uint8_t> data) = 0;

  // Position-map lookup plus a single slot read; no writes, so the
  // access is invisible under the write-only model.
  virtual std::vector<std::uint8_t> read_block(std::uint64_t addr);

  // Blocks until background work (if any) has fully landed in the store.
  virtual void quiesce() {}

  const OramConfig& config() const { return cfg_; }
  std::uint64_t write_counter() const { return state_.write_counter; }
  const PositionMap& position_map() const { return pos_; }
  BackingStore& store() { return *store_; }
  const BackingStore& store() const { return *store_; }
  // Trace position right after initialization; adversary views and
  // metrics start here.
  std::uint64_t trace_baseline() const { return trace_baseline_; }

 protected:
  void check_addr(std::uint64_t addr) const;
  void ensure_healthy() const;
  void poison(const std::string& why);

  std::vector<std::uint8_t> read_and_unseal(std::uint64_t slot);
  void seal_and_write(std::span<const std::uint8_t> plain, std::uint64_t slot,
                      const Nonce& nonce);

  OramConfig cfg_;
  SealKeys keys_;
  OramState state_;
  PositionMap pos_;
  std::unique_ptr<BackingStore> store_;
  bool poisoned_ = false;
  std::string poison_reason_;
  std::uint64_t trace_baseline_ = 0;
};

// Shadow-map oracle check: reads every logical block and returns the
// addresses whose content differs from the reference map (absent entries
// mean the zero page). Empty result = pass.
using ShadowMap = std::map<std::uint64_t, std::vector<std::uint8_t>>;
std::vector<std::uint64_t> state_audit(OramEngine& engine, const ShadowMap& shadow);

// Base DetWoORAM. Each write seals the page into holding slot
// N + (p mod M), then refreshes the next floor/ceil(K) main slots in
// ascending order mod N, then increments p. Slot addresses depend only
// on p, never on the logical address.
class Woram final : public OramEngine {
 public:
  Woram(const OramConfig& cfg, SealKeys keys, std::unique_ptr<BackingStore> store)
      : OramEngine(cfg, std::move(keys), std::move(store)) {}

  void write_block(std::uint64_t addr, std::span<const std::uint8_t> data) override;
};

}  // namespace detworam
