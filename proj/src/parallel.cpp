#include "parallel.hpp"

#include <chrono>
#include <exception>
#include <thread>

namespace detworam {

RefreshPartition partition(std::uint64_t count, unsigned workers) {
  if (workers == 0) workers = 1;
  RefreshPartition part;
  part.worker_count = workers;
  part.assignments.resize(workers);
  for (std::uint64_t q = 0; q < count; ++q) {
    part.assignments[q % workers].push_back(q);
  }
  return part;
}

ParallelWoram::ParallelWoram(const OramConfig& cfg, SealKeys keys,
                             std::unique_ptr<BackingStore> store, unsigned threads,
                             bool record_access)
    : OramEngine(cfg, std::move(keys), std::move(store)),
      threads_(threads == 0 ? 1 : threads),
      record_access_(record_access) {}

void ParallelWoram::write_block(std::uint64_t addr,
                                std::span<const std::uint8_t> data) {
  ensure_healthy();
  check_addr(addr);
  if (data.size() != cfg_.page_size) {
    throw SealError("page data must be exactly page_size bytes");
  }
  const auto round_start = std::chrono::steady_clock::now();

  // Phase 1, serial: holding write, position update, and all nonces for
  // the round, so workers never touch the trusted counter.
  const std::uint64_t p = state_.write_counter;
  seal_and_write(data, holding_slot(p, cfg_), next_nonce(state_));
  pos_.set(addr, holding_slot(p, cfg_));

  const std::vector<std::uint64_t> indices = refresh_indices(p, cfg_);
  std::vector<Nonce> nonces;
  nonces.reserve(indices.size());
  for (std::size_t q = 0; q < indices.size(); ++q) {
    nonces.push_back(next_nonce(state_));
  }
  const RefreshPartition part = partition(indices.size(), threads_);

  last_round_ = RoundAccessLog{};
  last_round_.workers.resize(part.worker_count);

  // Phase 2, parallel: each iteration q refreshes main index
  // (start+q) mod N. Iterations read pos[i] and store[pos[i]] and write
  // only slot i and pos[i]; the touched sets are disjoint across workers
  // except for read-only holding slots.
  std::vector<std::exception_ptr> failures(part.worker_count);
  std::vector<std::thread> pool;
  pool.reserve(part.worker_count);
  const auto spawn_start = std::chrono::steady_clock::now();
  for (unsigned w = 0; w < part.worker_count; ++w) {
    pool.emplace_back([&, w] {
      auto& log = last_round_.workers[w];
      try {
        for (const std::uint64_t q : part.assignments[w]) {
          const std::uint64_t i = indices[q];
          const std::uint64_t src = pos_[i];
          if (record_access_) {
            log.pos_reads.push_back(i);
            log.slot_reads.push_back(src);
          }
          const auto sealed_src = store_->read(src);
          const auto plain = unseal(sealed_src, src, keys_);
          const auto resealed = seal(plain, i, keys_, nonces[q]);
          store_->write(i, resealed);
          pos_.set(i, i);
          if (record_access_) {
            log.slot_writes.push_back(i);
            log.pos_writes.push_back(i);
          }
        }
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  }
  const auto spawn_end = std::chrono::steady_clock::now();
  for (auto& t : pool) t.join();  // round barrier

  for (const auto& f : failures) {
    if (f) {
      poison("worker failed during refresh");
      std::rethrow_exception(f);
    }
  }

  // Phase 3, serial.
  state_.write_counter = p + 1;

  const auto round_end = std::chrono::steady_clock::now();
  spawn_stats_.spawn_ns += std::chrono::duration_cast<std::chrono::nanoseconds>(
                               spawn_end - spawn_start)
                               .count();
  spawn_stats_.round_ns += std::chrono::duration_cast<std::chrono::nanoseconds>(
                               round_end - round_start)
                               .count();
  spawn_stats_.rounds += 1;
}

}  // namespace detworam
