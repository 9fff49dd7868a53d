// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace bgmark {

/// One readiness finding. Warnings never block a run.
struct EnvironmentItem {
  std::string name;
  std::string value;
  bool warn = false;
  std::string note;
};

struct EnvironmentReport {
  std::vector<EnvironmentItem> items;

  bool all_green() const;
};

/// Inspects CPU governor, turbo state, power source, RAPL availability and
/// load average. Report-only; missing information is noted, never fatal.
EnvironmentReport environment_check(
    const std::filesystem::path& sys_root = "/sys",
    const std::filesystem::path& proc_root = "/proc");

/// Host fingerprint persisted once per run directory (kernel, CPU model,
/// governor, provider kind).
nlohmann::json environment_fingerprint(const std::string& provider_kind);

}  // namespace bgmark
