// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

namespace bgmark {

enum class EditKind { append, replace, erase };

struct EditEvent {
  double time_s = 0;          // offset from session start
  EditKind kind = EditKind::append;
  std::uint32_t length = 0;   // payload length; clamped to content at replay
};

/// Reproducible scripted edit timeline. Same seed + parameters -> identical
/// events.
struct EditScript {
  std::uint64_t seed = 0;
  std::vector<EditEvent> events;
};

/// Seeded pseudo-random mutations at edit_rate_hz: appends grow the content
/// toward target_size_bytes, then the mix switches to size-neutral churn that
/// oscillates around the target. append_fraction sets the growth-phase mix
/// (default 80% append / 20% replace).
/// Throws ConfigError on negative size, non-positive duration, negative rate,
/// or an append fraction outside (0, 1].
EditScript generate_edit_script(std::uint64_t seed, std::int64_t target_size_bytes,
                                double session_duration_s, double edit_rate_hz,
                                double append_fraction = 0.8);

}  // namespace bgmark
