// SPDX-License-Identifier: Apache-2.0
#include "bgmark/energy_provider.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "bgmark/errors.hpp"

namespace bgmark {

const char* to_string(EnergyDomain d) {
  switch (d) {
    case EnergyDomain::package: return "package";
    case EnergyDomain::dram: return "dram";
    case EnergyDomain::psys: return "psys";
    case EnergyDomain::core: return "core";
    case EnergyDomain::uncore: return "uncore";
  }
  return "?";
}

std::optional<EnergyDomain> energy_domain_from(const std::string& s) {
  if (s == "package") return EnergyDomain::package;
  if (s == "dram") return EnergyDomain::dram;
  if (s == "psys") return EnergyDomain::psys;
  if (s == "core") return EnergyDomain::core;
  if (s == "uncore") return EnergyDomain::uncore;
  return std::nullopt;
}

double EnergyWindow::total_joules() const {
  double sum = 0;
  for (const auto& [domain, joules] : per_domain_joules) sum += joules;
  return sum;
}

EnergyWindow window_energy(const std::vector<CounterSnapshot>& start,
                           const std::vector<CounterSnapshot>& end) {
  if (start.empty() || start.size() != end.size()) {
    throw ConfigError("window_energy: snapshot lists cover different domain sets");
  }
  EnergyWindow window;
  for (const auto& s : start) {
    auto it = std::find_if(end.begin(), end.end(),
                           [&](const CounterSnapshot& e) { return e.domain == s.domain; });
    if (it == end.end()) {
      throw ConfigError(std::string("window_energy: domain '") + to_string(s.domain) +
                        "' missing from end snapshots");
    }
    const auto& e = *it;
    if (e.max_range_uj != s.max_range_uj || s.max_range_uj == 0) {
      throw ConfigError(std::string("window_energy: counter range mismatch for domain '") +
                        to_string(s.domain) + "'");
    }
    // At most one wrap per window: a lower end counter means the modulus was
    // crossed exactly once.
    std::uint64_t delta_uj = e.counter_uj >= s.counter_uj
                                 ? e.counter_uj - s.counter_uj
                                 : e.counter_uj + (s.max_range_uj - s.counter_uj);
    window.per_domain_joules[s.domain] = static_cast<double>(delta_uj) / 1e6;
  }
  window.duration_s =
      static_cast<double>(end.front().timestamp_ns - start.front().timestamp_ns) / 1e9;
  if (!(window.duration_s > 0)) {
    throw ConfigError("window_energy: non-positive duration between snapshots");
  }
  return window;
}

void EnergyProvider::charge(double /*event_cost_j*/) {
  throw ConfigError(std::string("provider '") + kind() +
                    "' does not support synthetic charges");
}

// ---------------------------------------------------------------------------
// Synthetic provider

SyntheticProvider::SyntheticProvider(const SyntheticConfig& config) : config_(config) {
  if (!(config_.idle_rate_w >= 0) || !std::isfinite(config_.idle_rate_w)) {
    throw ConfigError("synthetic provider: idle_rate_w must be finite and >= 0");
  }
  if (!(config_.save_cost_j >= 0) || !std::isfinite(config_.save_cost_j)) {
    throw ConfigError("synthetic provider: save_cost_j must be finite and >= 0");
  }
  if (config_.max_range_uj == 0) {
    throw ConfigError("synthetic provider: max_range_uj must be positive");
  }
  if (config_.realtime) {
    clock_ = std::make_unique<SteadyClock>();
  } else {
    clock_ = std::make_unique<VirtualClock>();
  }
  epoch_ns_ = clock_->now_ns();
  domains_ = {EnergyDomain::package};
}

std::vector<CounterSnapshot> SyntheticProvider::snapshot() {
  std::int64_t now = clock_->now_ns();
  double elapsed_us = static_cast<double>(now - epoch_ns_) / 1000.0;
  auto idle_uj = static_cast<std::uint64_t>(std::llround(config_.idle_rate_w * elapsed_us));
  CounterSnapshot snap;
  snap.domain = EnergyDomain::package;
  snap.counter_uj = (idle_uj + charged_uj_) % config_.max_range_uj;
  snap.max_range_uj = config_.max_range_uj;
  snap.timestamp_ns = now;
  return {snap};
}

void SyntheticProvider::charge(double event_cost_j) {
  if (!(event_cost_j >= 0) || !std::isfinite(event_cost_j)) {
    throw ConfigError("synthetic charge: event cost must be finite and >= 0");
  }
  charged_uj_ += static_cast<std::uint64_t>(std::llround(event_cost_j * 1e6));
}

// ---------------------------------------------------------------------------
// RAPL sysfs provider

namespace {

std::string read_text_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::string line;
  if (!in || !std::getline(in, line)) return {};
  return line;
}

std::optional<std::uint64_t> read_u64_file(const std::filesystem::path& p) {
  std::string text = read_text_file(p);
  if (text.empty()) return std::nullopt;
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::optional<EnergyDomain> domain_from_zone_name(const std::string& name) {
  if (name.rfind("package", 0) == 0 || name.rfind("psys-package", 0) == 0) {
    return EnergyDomain::package;
  }
  if (name == "dram") return EnergyDomain::dram;
  if (name == "psys") return EnergyDomain::psys;
  if (name == "core") return EnergyDomain::core;
  if (name == "uncore") return EnergyDomain::uncore;
  return std::nullopt;
}

}  // namespace

RaplSysfsProvider::RaplSysfsProvider(const std::filesystem::path& powercap_root) {
  std::error_code ec;
  if (!std::filesystem::is_directory(powercap_root, ec)) {
    throw ProviderError("rapl_sysfs: powercap tree not found at " + powercap_root.string() +
                        " (no RAPL support here; try the synthetic provider)");
  }

  std::vector<std::filesystem::path> zone_dirs;
  for (const auto& entry : std::filesystem::directory_iterator(powercap_root, ec)) {
    std::string stem = entry.path().filename().string();
    if (stem.rfind("intel-rapl:", 0) == 0 && entry.is_directory()) {
      zone_dirs.push_back(entry.path());
    }
  }
  std::sort(zone_dirs.begin(), zone_dirs.end());

  for (const auto& dir : zone_dirs) {
    std::string name = read_text_file(dir / "name");
    auto domain = domain_from_zone_name(name);
    if (!domain) continue;
    if (std::any_of(zones_.begin(), zones_.end(),
                    [&](const Zone& z) { return z.domain == *domain; })) {
      continue;  // keep the first zone per domain (socket 0)
    }
    auto range = read_u64_file(dir / "max_energy_range_uj");
    if (!range || *range == 0) continue;
    if (!read_u64_file(dir / "energy_uj")) {
      throw ProviderError("rapl_sysfs: cannot read " + (dir / "energy_uj").string() +
                          " (needs root or CAP_SYS_ADMIN on most kernels)");
    }
    zones_.push_back(Zone{*domain, dir / "energy_uj", *range});
  }

  if (zones_.empty()) {
    throw ProviderError("rapl_sysfs: no readable intel-rapl zones under " +
                        powercap_root.string() + " (try the synthetic provider)");
  }
  for (const auto& z : zones_) domains_.push_back(z.domain);
}

std::vector<CounterSnapshot> RaplSysfsProvider::snapshot() {
  std::vector<CounterSnapshot> snaps;
  snaps.reserve(zones_.size());
  for (const auto& z : zones_) {
    auto counter = read_u64_file(z.energy_file);
    if (!counter) {
      throw ProviderError(std::string("rapl_sysfs: failed reading domain '") +
                          to_string(z.domain) + "' from " + z.energy_file.string());
    }
    CounterSnapshot snap;
    snap.domain = z.domain;
    snap.counter_uj = *counter % z.max_range_uj;
    snap.max_range_uj = z.max_range_uj;
    snap.timestamp_ns = clock_.now_ns();
    snaps.push_back(snap);
  }
  return snaps;
}

std::unique_ptr<EnergyProvider> open_provider(const ProviderConfig& config) {
  if (config.kind == "synthetic") {
    return std::make_unique<SyntheticProvider>(config.synthetic);
  }
  if (config.kind == "rapl_sysfs") {
    return std::make_unique<RaplSysfsProvider>(config.powercap_root);
  }
  throw ConfigError("unknown provider kind '" + config.kind +
                    "' (expected rapl_sysfs or synthetic)");
}

}  // namespace bgmark
