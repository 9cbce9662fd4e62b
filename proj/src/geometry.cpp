#include "geometry.hpp"

namespace detworam {

namespace {

// floor(p * N / M) with a wide intermediate so huge p cannot overflow.
std::uint64_t floor_pk(std::uint64_t p, std::uint64_t n, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(p) * n) / m);
}

}  // namespace

OramConfig OramConfig::create(std::uint64_t main_count, std::uint64_t holding_count,
                              std::size_t page_size) {
  if (holding_count == 0) {
    throw GeometryError("holding area must have at least one slot");
  }
  if (main_count < holding_count) {
    throw GeometryError("main area smaller than holding area (K < 1)");
  }
  if (page_size < 16 || page_size % 16 != 0) {
    throw GeometryError("page size must be a multiple of 16 and at least 16");
  }
  return OramConfig{main_count, holding_count, page_size};
}

std::uint64_t holding_slot(std::uint64_t p, const OramConfig& cfg) {
  return cfg.main_count + (p % cfg.holding_count);
}

RefreshRange refresh_range(std::uint64_t p, const OramConfig& cfg) {
  const std::uint64_t lo = floor_pk(p, cfg.main_count, cfg.holding_count);
  const std::uint64_t hi = floor_pk(p + 1, cfg.main_count, cfg.holding_count);
  return RefreshRange{lo % cfg.main_count, hi - lo};
}

std::vector<std::uint64_t> refresh_indices(std::uint64_t p, const OramConfig& cfg) {
  const RefreshRange r = refresh_range(p, cfg);
  std::vector<std::uint64_t> out;
  out.reserve(r.count);
  for (std::uint64_t q = 0; q < r.count; ++q) {
    out.push_back((r.start + q) % cfg.main_count);
  }
  return out;
}

std::vector<std::uint64_t> expected_write_set(std::uint64_t p, const OramConfig& cfg) {
  std::vector<std::uint64_t> out;
  const RefreshRange r = refresh_range(p, cfg);
  out.reserve(r.count + 1);
  out.push_back(holding_slot(p, cfg));
  for (std::uint64_t q = 0; q < r.count; ++q) {
    out.push_back((r.start + q) % cfg.main_count);
  }
  return out;
}

}  // namespace detworam
