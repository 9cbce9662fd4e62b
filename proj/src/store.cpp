#include "store.hpp"

#include <fcntl.h>
#include <sodium.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace detworam {

std::set<std::uint64_t> diff(const Snapshot& a, const Snapshot& b) {
  if (a.digests.size() != b.digests.size()) {
    throw ShapeMismatchError("snapshots have different slot counts");
  }
  std::set<std::uint64_t> changed;
  for (std::uint64_t i = 0; i < a.digests.size(); ++i) {
    if (a.digests[i] != b.digests[i]) changed.insert(i);
  }
  return changed;
}

void BackingStore::check_idx(std::uint64_t idx) const {
  if (idx >= slot_count_) {
    throw OutOfRangeError("slot index " + std::to_string(idx) + " out of range [0, " +
                          std::to_string(slot_count_) + ")");
  }
}

void BackingStore::read(std::uint64_t idx, std::span<std::uint8_t> out) {
  check_idx(idx);
  if (out.size() != slot_size_) {
    throw SizeMismatchError("read buffer does not match slot size");
  }
  read_slot(idx, out);
  std::lock_guard lock(trace_mu_);
  trace_.push_back(TraceEvent{static_cast<std::uint64_t>(trace_.size()), false, idx});
}

void BackingStore::write(std::uint64_t idx, std::span<const std::uint8_t> data) {
  check_idx(idx);
  if (data.size() != slot_size_) {
    throw SizeMismatchError("write buffer does not match slot size");
  }
  write_slot(idx, data);
  std::lock_guard lock(trace_mu_);
  trace_.push_back(TraceEvent{static_cast<std::uint64_t>(trace_.size()), true, idx});
}

Snapshot BackingStore::snapshot() const {
  Snapshot s;
  s.digests.resize(slot_count_);
  std::vector<std::uint8_t> buf(slot_size_);
  for (std::uint64_t i = 0; i < slot_count_; ++i) {
    read_slot(i, buf);
    crypto_generichash(s.digests[i].data(), s.digests[i].size(), buf.data(), buf.size(),
                       nullptr, 0);
  }
  return s;
}

std::vector<TraceEvent> BackingStore::trace() const {
  std::lock_guard lock(trace_mu_);
  return trace_;
}

std::uint64_t BackingStore::trace_size() const {
  std::lock_guard lock(trace_mu_);
  return trace_.size();
}

std::vector<std::uint64_t> BackingStore::write_indices(std::uint64_t from) const {
  std::lock_guard lock(trace_mu_);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = from; i < trace_.size(); ++i) {
    if (trace_[i].is_write) out.push_back(trace_[i].slot);
  }
  return out;
}

void BackingStore::export_trace_jsonl(std::ostream& os, std::uint64_t from) const {
  const auto events = trace();
  for (std::uint64_t i = from; i < events.size(); ++i) {
    const auto& e = events[i];
    os << "{\"seq\":" << e.seq << ",\"kind\":\"" << (e.is_write ? 'w' : 'r')
       << "\",\"slot\":" << e.slot << "}\n";
  }
}

MemStore::MemStore(std::uint64_t slot_count, std::size_t slot_size)
    : BackingStore(slot_count, slot_size), bytes_(slot_count * slot_size, 0) {}

void MemStore::read_slot(std::uint64_t idx, std::span<std::uint8_t> out) const {
  std::memcpy(out.data(), bytes_.data() + idx * slot_size(), slot_size());
}

void MemStore::write_slot(std::uint64_t idx, std::span<const std::uint8_t> data) {
  std::memcpy(bytes_.data() + idx * slot_size(), data.data(), slot_size());
}

FileStore::FileStore(std::uint64_t slot_count, std::size_t slot_size,
                     const std::string& path)
    : BackingStore(slot_count, slot_size) {
  fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_TRUNC, 0644);
  if (fd_ < 0) {
    throw Error("cannot open store file " + path + ": " + std::strerror(errno));
  }
  if (::ftruncate(fd_, static_cast<off_t>(slot_count * slot_size)) != 0) {
    ::close(fd_);
    throw Error("cannot size store file " + path + ": " + std::strerror(errno));
  }
}

FileStore::~FileStore() {
  if (fd_ >= 0) ::close(fd_);
}

void FileStore::read_slot(std::uint64_t idx, std::span<std::uint8_t> out) const {
  const off_t off = static_cast<off_t>(idx * slot_size());
  std::size_t done = 0;
  while (done < out.size()) {
    const ssize_t n = ::pread(fd_, out.data() + done, out.size() - done, off + done);
    if (n < 0) throw Error(std::string("store read failed: ") + std::strerror(errno));
    if (n == 0) throw Error("store file truncated");
    done += static_cast<std::size_t>(n);
  }
}

void FileStore::write_slot(std::uint64_t idx, std::span<const std::uint8_t> data) {
  const off_t off = static_cast<off_t>(idx * slot_size());
  std::size_t done = 0;
  while (done < data.size()) {
    const ssize_t n = ::pwrite(fd_, data.data() + done, data.size() - done, off + done);
    if (n < 0) throw Error(std::string("store write failed: ") + std::strerror(errno));
    done += static_cast<std::size_t>(n);
  }
}

std::unique_ptr<BackingStore> make_store(StoreKind kind, std::uint64_t slot_count,
                                         std::size_t slot_size,
                                         const std::string& file_path) {
  if (kind == StoreKind::File) {
    return std::make_unique<FileStore>(slot_count, slot_size, file_path);
  }
  return std::make_unique<MemStore>(slot_count, slot_size);
}

}  // namespace detworam
