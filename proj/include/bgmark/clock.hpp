// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstdint>
#include <thread>

namespace bgmark {

/// Time source used by sessions, providers and the run loop. Everything that
/// waits or timestamps goes through this interface so a whole experiment can
/// run on a simulated timeline.
class Clock {
 public:
  virtual ~Clock() = default;

  /// Monotonic nanoseconds. Origin is arbitrary but fixed per instance.
  virtual std::int64_t now_ns() = 0;

  /// Blocks (or advances the timeline) until now_ns() >= deadline_ns.
  virtual void sleep_until_ns(std::int64_t deadline_ns) = 0;

  void sleep_for_s(double seconds) {
    if (seconds > 0) {
      sleep_until_ns(now_ns() + static_cast<std::int64_t>(seconds * 1e9));
    }
  }
};

/// Real time, backed by std::chrono::steady_clock.
class SteadyClock final : public Clock {
 public:
  std::int64_t now_ns() override {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
  }

  void sleep_until_ns(std::int64_t deadline_ns) override {
    std::this_thread::sleep_until(
        std::chrono::steady_clock::time_point(std::chrono::nanoseconds(deadline_ns)));
  }
};

/// Simulated time: sleeping jumps straight to the deadline. now_ns() starts
/// at 0, so a fresh instance gives fully reproducible timestamps.
class VirtualClock final : public Clock {
 public:
  std::int64_t now_ns() override { return now_ns_; }

  void sleep_until_ns(std::int64_t deadline_ns) override {
    if (deadline_ns > now_ns_) now_ns_ = deadline_ns;
  }

 private:
  std::int64_t now_ns_ = 0;
};

}  // namespace bgmark
