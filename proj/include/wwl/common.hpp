#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace wwl {

/// Input exceeds what the dense kernels are sized for (e.g. eigensolver cap).
class CapabilityError : public std::runtime_error {
 public:
  explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

/// A file or data structure failed a consistency check on load.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A generator could not assemble a usable instance from the given parameters.
class ConstructionError : public std::runtime_error {
 public:
  explicit ConstructionError(const std::string& what) : std::runtime_error(what) {}
};

/// An envelope/regression fit rejected its sample set.
class FitError : public std::runtime_error {
 public:
  explicit FitError(const std::string& what) : std::runtime_error(what) {}
};

std::uint64_t splitmix64(std::uint64_t x);

/// Per-item seed derivation: deterministic and independent of scheduling.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(base + 0x9e3779b97f4a7c15ULL * (index + 1));
}

/// Runs fn(0..count-1) across `threads` workers. Callers write results into
/// index-addressed slots, so thread count cannot change the output.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace wwl
