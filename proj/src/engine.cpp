#include "engine.hpp"

namespace detworam {

OramEngine::OramEngine(const OramConfig& cfg, SealKeys keys,
                       std::unique_ptr<BackingStore> store)
    : cfg_(cfg), keys_(keys), pos_(cfg), store_(std::move(store)) {
  if (store_->slot_count() != cfg_.total_slots() ||
      store_->slot_size() != cfg_.sealed_slot_size()) {
    throw GeometryError("store shape does not match ORAM geometry");
  }
  const std::vector<std::uint8_t> zero(cfg_.page_size, 0);
  for (std::uint64_t slot = 0; slot < cfg_.total_slots(); ++slot) {
    seal_and_write(zero, slot, next_nonce(state_));
  }
  trace_baseline_ = store_->trace_size();
}

void OramEngine::check_addr(std::uint64_t addr) const {
  if (addr >= cfg_.main_count) {
    throw AddressError("logical address " + std::to_string(addr) +
                       " out of range [0, " + std::to_string(cfg_.main_count) + ")");
  }
}

void OramEngine::ensure_healthy() const {
  if (poisoned_) {
    throw StateError("instance poisoned after integrity failure: " + poison_reason_);
  }
}

void OramEngine::poison(const std::string& why) {
  poisoned_ = true;
  poison_reason_ = why;
}

std::vector<std::uint8_t> OramEngine::read_and_unseal(std::uint64_t slot) {
  const auto sealed = store_->read(slot);
  try {
    return unseal(sealed, slot, keys_);
  } catch (const IntegrityError& e) {
    poison(e.what());
    throw;
  }
}

void OramEngine::seal_and_write(std::span<const std::uint8_t> plain, std::uint64_t slot,
                                const Nonce& nonce) {
  const auto sealed = seal(plain, slot, keys_, nonce);
  store_->write(slot, sealed);
}

std::vector<std::uint8_t> OramEngine::read_block(std::uint64_t addr) {
  ensure_healthy();
  check_addr(addr);
  return read_and_unseal(pos_[addr]);
}

std::vector<std::uint64_t> state_audit(OramEngine& engine, const ShadowMap& shadow) {
  const std::vector<std::uint8_t> zero(engine.config().page_size, 0);
  std::vector<std::uint64_t> mismatches;
  for (std::uint64_t a = 0; a < engine.config().main_count; ++a) {
    const auto got = engine.read_block(a);
    const auto it = shadow.find(a);
    const auto& want = it == shadow.end() ? zero : it->second;
    if (got != want) mismatches.push_back(a);
  }
  return mismatches;
}

void Woram::write_block(std::uint64_t addr, std::span<const std::uint8_t> data) {
  ensure_healthy();
  check_addr(addr);
  if (data.size() != cfg_.page_size) {
    throw SealError("page data must be exactly page_size bytes");
  }

  const std::uint64_t p = state_.write_counter;
  const std::uint64_t hold = holding_slot(p, cfg_);
  seal_and_write(data, hold, next_nonce(state_));
  pos_.set(addr, hold);

  // If addr falls inside this round's window, the refresh below reads the
  // holding copy just written and promotes it to its main slot.
  for (const std::uint64_t i : refresh_indices(p, cfg_)) {
    const auto plain = read_and_unseal(pos_[i]);
    seal_and_write(plain, i, next_nonce(state_));
    pos_.set(i, i);
  }

  state_.write_counter = p + 1;
}

}  // namespace detworam
