// SPDX-License-Identifier: Apache-2.0
#include "bgmark/edit_script.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bgmark/errors.hpp"

namespace bgmark {

EditScript generate_edit_script(std::uint64_t seed, std::int64_t target_size_bytes,
                                double session_duration_s, double edit_rate_hz,
                                double append_fraction) {
  if (target_size_bytes < 0) {
    throw ConfigError("edit script: target size must be >= 0");
  }
  if (!(session_duration_s > 0) || !std::isfinite(session_duration_s)) {
    throw ConfigError("edit script: session duration must be > 0");
  }
  if (!(edit_rate_hz >= 0) || !std::isfinite(edit_rate_hz)) {
    throw ConfigError("edit script: edit rate must be >= 0");
  }
  if (!(append_fraction > 0) || append_fraction > 1) {
    throw ConfigError("edit script: append fraction must be in (0, 1]");
  }

  EditScript script;
  script.seed = seed;
  if (edit_rate_hz == 0) return script;

  // +1e-9 keeps e.g. 120 s x 1 Hz at exactly 120 events despite binary
  // rounding of the product.
  auto n_events = static_cast<std::int64_t>(
      std::floor(session_duration_s * edit_rate_hz + 1e-9));
  if (n_events <= 0) return script;

  std::mt19937_64 rng(seed);
  auto uniform_u32 = [&rng](std::uint32_t lo, std::uint32_t hi) {
    return lo + static_cast<std::uint32_t>(rng() % (hi - lo + 1));
  };

  // Expected growth-phase append length that reaches the target by the last
  // event: target / (append_fraction x n).
  std::uint32_t mean_append = 0;
  if (target_size_bytes > 0) {
    mean_append = static_cast<std::uint32_t>(std::max<std::int64_t>(
        1, std::llround(static_cast<double>(target_size_bytes) /
                        (append_fraction * static_cast<double>(n_events)))));
  }

  std::int64_t projected_size = 0;
  for (std::int64_t k = 0; k < n_events; ++k) {
    EditEvent ev;
    ev.time_s = static_cast<double>(k + 1) / edit_rate_hz;
    if (target_size_bytes == 0) {
      // The 0-byte workload still edits (the modified flag must flip) but the
      // content stays empty.
      ev.kind = EditKind::replace;
      ev.length = 0;
    } else if (projected_size < target_size_bytes) {
      bool append = (static_cast<double>(rng() % 1000) / 1000.0) < append_fraction;
      if (append) {
        std::uint32_t lo = std::max<std::uint32_t>(1, mean_append / 2);
        std::uint32_t hi = std::max<std::uint32_t>(lo, mean_append + mean_append / 2);
        ev.kind = EditKind::append;
        ev.length = uniform_u32(lo, hi);
        projected_size += ev.length;
      } else {
        ev.kind = EditKind::replace;
        ev.length = uniform_u32(8, 64);
      }
    } else {
      // Size-neutral churn: erase and append balance in expectation.
      std::uint32_t roll = uniform_u32(0, 9);
      ev.length = uniform_u32(8, 64);
      if (roll < 8) {
        ev.kind = EditKind::replace;
      } else if (roll == 8) {
        ev.kind = EditKind::erase;
        projected_size -= std::min<std::int64_t>(ev.length, projected_size);
      } else {
        ev.kind = EditKind::append;
        projected_size += ev.length;
      }
    }
    script.events.push_back(ev);
  }
  return script;
}

}  // namespace bgmark
