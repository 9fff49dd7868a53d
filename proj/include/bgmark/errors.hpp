// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace bgmark {

/// Bad plan file, bad CLI argument, or a violated call precondition.
/// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Energy counters are unavailable or stopped responding (missing powercap
/// tree, unreadable counter file, ...). The CLI maps this to exit code 3.
class ProviderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A workload session failed mid-run (unwritable target, trigger starvation).
/// The run is recorded as failed; the plan keeps going.
class SessionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The persisted run store is unreadable or malformed. Messages carry the
/// offending line number. The CLI maps this to exit code 2.
class StoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a cooperative cancellation check fires between runs or inside
/// a session. The CLI maps this to exit code 4 and prints the resume token.
class InterruptedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bgmark
