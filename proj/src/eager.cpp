#include "eager.hpp"

#include <algorithm>

namespace detworam {

EagerWoram::EagerWoram(const OramConfig& cfg, SealKeys keys,
                       std::unique_ptr<BackingStore> store, Scheduling scheduling)
    : OramEngine(cfg, std::move(keys), std::move(store)), scheduling_(scheduling) {
  if (scheduling_ == Scheduling::Background) {
    worker_ = std::thread(&EagerWoram::worker_main, this);
  }
}

EagerWoram::~EagerWoram() {
  {
    std::lock_guard lock(mu_);
    shutdown_ = true;
  }
  cv_.notify_all();
  if (worker_.joinable()) worker_.join();
  // A Ready (or still Loading) buffer is discarded: no write populated it,
  // so flushing it would diverge the trace from base.
}

void EagerWoram::throw_if_poisoned_locked() const {
  if (poisoned_) {
    throw StateError("instance poisoned after integrity failure: " + poison_reason_);
  }
}

EagerWoram::Lifecycle EagerWoram::lifecycle() const {
  std::lock_guard lock(mu_);
  return lifecycle_;
}

void EagerWoram::worker_main() {
  std::unique_lock lock(mu_);
  for (;;) {
    if (poisoned_) {
      cv_.wait(lock, [&] { return shutdown_; });
      return;
    }
    if (lifecycle_ == Lifecycle::Unloading) {
      // Finish a triggered round even when shutting down; the write has
      // already been acknowledged to the caller.
      try {
        unload_locked(lock);
      } catch (const std::exception& e) {
        poison(e.what());
        cv_.notify_all();
      }
      continue;
    }
    if (shutdown_) return;
    if (lifecycle_ == Lifecycle::Empty) {
      try {
        preload_locked(lock);
      } catch (const std::exception& e) {
        poison(e.what());
        cv_.notify_all();
      }
      continue;
    }
    cv_.wait(lock, [&] {
      return shutdown_ || poisoned_ || lifecycle_ == Lifecycle::Unloading ||
             lifecycle_ == Lifecycle::Empty;
    });
  }
}

void EagerWoram::preload_locked(std::unique_lock<std::mutex>& lock) {
  if (lifecycle_ != Lifecycle::Empty) {
    throw StateError("preload requires an Empty buffer");
  }
  lifecycle_ = Lifecycle::Loading;
  round_p_ = state_.write_counter;

  // Targets and nonces are fixed under the lock; the foreground never
  // touches the position map or nonce counter until the buffer is Ready.
  struct Target {
    std::uint64_t main_slot;
    std::uint64_t source_slot;
    Nonce nonce;
  };
  std::vector<Target> targets;
  for (const std::uint64_t i : refresh_indices(round_p_, cfg_)) {
    targets.push_back(Target{i, pos_[i], next_nonce(state_)});
  }
  const std::uint64_t hold = holding_slot(round_p_, cfg_);
  const Nonce placeholder_nonce = next_nonce(state_);

  lock.unlock();
  std::vector<BufferEntry> entries;
  std::vector<std::uint8_t> placeholder_sealed;
  try {
    entries.reserve(targets.size());
    for (const auto& t : targets) {
      const auto sealed_src = store_->read(t.source_slot);
      const auto plain = unseal(sealed_src, t.source_slot, keys_);
      entries.push_back(BufferEntry{t.main_slot, seal(plain, t.main_slot, keys_, t.nonce)});
    }
    const std::vector<std::uint8_t> zero(cfg_.page_size, 0);
    placeholder_sealed = seal(zero, hold, keys_, placeholder_nonce);
  } catch (...) {
    lock.lock();
    lifecycle_ = Lifecycle::Empty;
    throw;
  }

  lock.lock();
  if (lifecycle_ != Lifecycle::Loading) monitor_violations_.fetch_add(1);
  main_entries_ = std::move(entries);
  holding_entry_ = BufferEntry{hold, std::move(placeholder_sealed)};
  lifecycle_ = Lifecycle::Ready;
  cv_.notify_all();
}

void EagerWoram::unload_locked(std::unique_lock<std::mutex>& lock) {
  if (lifecycle_ != Lifecycle::Unloading) {
    throw StateError("unload requires a populated (Unloading) buffer");
  }
  // Same canonical store order as base: holding slot first, then the
  // refresh targets ascending mod N.
  BufferEntry holding = holding_entry_;
  std::vector<BufferEntry> mains = main_entries_;

  lock.unlock();
  try {
    store_->write(holding.slot, holding.sealed);
    for (const auto& e : mains) {
      store_->write(e.slot, e.sealed);
    }
  } catch (...) {
    lock.lock();
    throw;
  }
  lock.lock();

  if (lifecycle_ != Lifecycle::Unloading) monitor_violations_.fetch_add(1);
  main_entries_.clear();
  round_blocks_.clear();
  lifecycle_ = Lifecycle::Empty;
  cv_.notify_all();
}

void EagerWoram::preload_step() {
  std::unique_lock lock(mu_);
  throw_if_poisoned_locked();
  preload_locked(lock);
}

void EagerWoram::unload_step() {
  std::unique_lock lock(mu_);
  throw_if_poisoned_locked();
  unload_locked(lock);
}

void EagerWoram::write_block(std::uint64_t addr, std::span<const std::uint8_t> data) {
  check_addr(addr);
  if (data.size() != cfg_.page_size) {
    throw SealError("page data must be exactly page_size bytes");
  }

  std::unique_lock lock(mu_);
  throw_if_poisoned_locked();
  if (scheduling_ == Scheduling::Manual) {
    if (lifecycle_ != Lifecycle::Ready) {
      throw StateError("buffer not Ready; drive preload_step first");
    }
  } else {
    // The paper's blocking state: the fault handler waits out Loading and
    // Unloading.
    cv_.wait(lock, [&] { return poisoned_ || lifecycle_ == Lifecycle::Ready; });
    throw_if_poisoned_locked();
  }

  const std::uint64_t p = round_p_;
  const std::uint64_t hold = holding_entry_.slot;
  const bool in_range =
      std::any_of(main_entries_.begin(), main_entries_.end(),
                  [&](const BufferEntry& e) { return e.slot == addr; });

  // Holding entry always receives the write; an in-range write also
  // replaces the stale refreshed copy so the flushed state matches base,
  // where the refresh pulls the fresh holding copy into main.
  holding_entry_.sealed = seal(data, hold, keys_, next_nonce(state_));
  pos_.set(addr, hold);
  if (in_range) {
    for (auto& e : main_entries_) {
      if (e.slot == addr) {
        e.sealed = seal(data, addr, keys_, next_nonce(state_));
        break;
      }
    }
  }

  round_blocks_.clear();
  for (const auto& e : main_entries_) {
    round_blocks_[e.slot] = e;
    pos_.set(e.slot, e.slot);
  }
  if (!in_range) {
    round_blocks_[addr] = holding_entry_;
  }

  state_.write_counter = p + 1;
  lifecycle_ = Lifecycle::Unloading;
  cv_.notify_all();

  if (scheduling_ == Scheduling::Manual) return;  // caller/worker flushes
}

std::vector<std::uint8_t> EagerWoram::read_block(std::uint64_t addr) {
  check_addr(addr);

  std::uint64_t slot;
  {
    std::unique_lock lock(mu_);
    throw_if_poisoned_locked();
    if (lifecycle_ == Lifecycle::Unloading) {
      const auto it = round_blocks_.find(addr);
      if (it != round_blocks_.end()) {
        // Latest copy lives in the buffer until the flush lands.
        const BufferEntry entry = it->second;
        lock.unlock();
        return unseal(entry.sealed, entry.slot, keys_);
      }
    }
    slot = pos_[addr];
  }
  // Store path. Never blocks: in-flight flush writes only round slots,
  // which are disjoint from every other block's latest-copy slot.
  const auto sealed = store_->read(slot);
  try {
    return unseal(sealed, slot, keys_);
  } catch (const IntegrityError&) {
    std::lock_guard lock(mu_);
    poison("integrity failure at slot " + std::to_string(slot));
    cv_.notify_all();
    throw;
  }
}

void EagerWoram::quiesce() {
  if (scheduling_ == Scheduling::Manual) {
    std::unique_lock lock(mu_);
    throw_if_poisoned_locked();
    while (lifecycle_ != Lifecycle::Ready) {
      if (lifecycle_ == Lifecycle::Unloading) {
        unload_locked(lock);
      } else if (lifecycle_ == Lifecycle::Empty) {
        preload_locked(lock);
      } else {
        throw StateError("manual quiesce found buffer mid-Loading");
      }
    }
    return;
  }
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return poisoned_ || lifecycle_ == Lifecycle::Ready; });
  throw_if_poisoned_locked();
}

}  // namespace detworam
