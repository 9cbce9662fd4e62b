#pragma once

#include <stdexcept>
#include <string>

namespace detworam {

// Base for every library error so callers can catch the whole family.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid ORAM geometry (N < M, M = 0, bad page size).
struct GeometryError : Error {
  using Error::Error;
};

// Logical block index outside [0, N).
struct AddressError : Error {
  using Error::Error;
};

// Slot index outside [0, N+M).
struct OutOfRangeError : Error {
  using Error::Error;
};

// Buffer length does not match the fixed slot/page size.
struct SizeMismatchError : Error {
  using Error::Error;
};

// Wrong plaintext length handed to the sealer.
struct SealError : Error {
  using Error::Error;
};

// MAC verification failed: the store was tampered with or slots were swapped.
struct IntegrityError : Error {
  using Error::Error;
};

// Nonce counter would wrap; abort rather than reuse.
struct NonceExhaustedError : Error {
  using Error::Error;
};

// Lifecycle/contract violation (e.g. preload on a non-empty buffer,
// operation on a poisoned instance).
struct StateError : Error {
  using Error::Error;
};

// Paging request beyond the backing store capacity.
struct OutOfMemoryError : Error {
  using Error::Error;
};

// Snapshots of different shapes diffed against each other.
struct ShapeMismatchError : Error {
  using Error::Error;
};

// Malformed benchmark configuration.
struct ConfigError : Error {
  using Error::Error;
};

// Simulation formula precondition violated.
struct DomainError : Error {
  using Error::Error;
};

// Leak test fed workloads with different write counts; the comparison
// is ill-posed because write-only ORAMs do not hide write volume.
struct UnequalWriteCountsError : Error {
  using Error::Error;
};

}  // namespace detworam
