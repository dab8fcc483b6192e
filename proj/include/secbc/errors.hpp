#pragma once

#include <stdexcept>
#include <string>

namespace secbc {

/// Raised when an exact enumeration or codebook materialization would exceed
/// its configured size cap. Callers switch to a sampled mode or fail cleanly.
struct CapExceeded : std::runtime_error {
  explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Configuration file problem, with a field-precise message.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace secbc
