#pragma once

#include <stdexcept>
#include <string>

namespace georoute {

// Error taxonomy of the library. Everything derives from std::runtime_error
// so callers can catch broadly; specific types exist where callers are
// expected to branch on them.

struct NoPathError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PathExplosionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnexploredLinkError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StrandedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SlotCapExceededError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateDenominatorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SupportMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace georoute
