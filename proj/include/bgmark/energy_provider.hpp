// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bgmark/clock.hpp"

namespace bgmark {

/// RAPL-style power domains.
enum class EnergyDomain { package, dram, psys, core, uncore };

const char* to_string(EnergyDomain d);
std::optional<EnergyDomain> energy_domain_from(const std::string& s);

/// One counter reading. counter_uj is monotone modulo max_range_uj.
struct CounterSnapshot {
  EnergyDomain domain = EnergyDomain::package;
  std::uint64_t counter_uj = 0;    // < max_range_uj
  std::uint64_t max_range_uj = 0;  // counter modulus
  std::int64_t timestamp_ns = 0;   // provider clock
};

/// Energy accumulated between two snapshot passes.
struct EnergyWindow {
  std::map<EnergyDomain, double> per_domain_joules;
  double duration_s = 0;

  double total_joules() const;
};

/// Per-domain modular counter delta, /1e6 to joules; duration from the first
/// snapshot pair's timestamps. Assumes at most one wrap per domain.
/// Throws ConfigError on mismatched domain sets or non-positive duration.
EnergyWindow window_energy(const std::vector<CounterSnapshot>& start,
                           const std::vector<CounterSnapshot>& end);

class EnergyProvider {
 public:
  virtual ~EnergyProvider() = default;

  virtual const char* kind() const = 0;
  virtual const std::vector<EnergyDomain>& domains() const = 0;

  /// One snapshot per available domain, read in a single bounded pass.
  /// Throws ProviderError naming the domain on read failure.
  virtual std::vector<CounterSnapshot> snapshot() = 0;

  /// Adds a discrete event's energy to future snapshots (synthetic only).
  /// Throws ConfigError on hardware providers.
  virtual void charge(double event_cost_j);

  /// The time source measurements and sessions must share with this provider.
  virtual Clock& clock() = 0;
};

/// Synthetic counter model: idle_rate_w integrates over elapsed clock time and
/// charge() adds discrete events, both quantized to integer microjoules.
struct SyntheticConfig {
  double idle_rate_w = 1.0;
  double save_cost_j = 0.5;          // charged per performed save by the run loop
  std::uint64_t max_range_uj = 262'143'328'850ULL;  // typical RAPL modulus
  bool realtime = false;             // false: sessions run on a virtual clock
};

struct ProviderConfig {
  std::string kind = "synthetic";  // "synthetic" | "rapl_sysfs"
  SyntheticConfig synthetic;
  std::filesystem::path powercap_root = "/sys/class/powercap";
};

/// Deterministic provider for oracle-checked tests and powerless hosts.
/// Exposes a single `package` domain.
class SyntheticProvider final : public EnergyProvider {
 public:
  explicit SyntheticProvider(const SyntheticConfig& config);

  const char* kind() const override { return "synthetic"; }
  const std::vector<EnergyDomain>& domains() const override { return domains_; }
  std::vector<CounterSnapshot> snapshot() override;
  void charge(double event_cost_j) override;
  Clock& clock() override { return *clock_; }

  const SyntheticConfig& config() const { return config_; }

 private:
  SyntheticConfig config_;
  std::unique_ptr<Clock> clock_;
  std::int64_t epoch_ns_ = 0;
  std::uint64_t charged_uj_ = 0;
  std::vector<EnergyDomain> domains_;
};

/// Reads Linux powercap zones (intel-rapl:*). One zone per domain is kept;
/// max_energy_range_uj is read once at open time.
class RaplSysfsProvider final : public EnergyProvider {
 public:
  explicit RaplSysfsProvider(const std::filesystem::path& powercap_root);

  const char* kind() const override { return "rapl_sysfs"; }
  const std::vector<EnergyDomain>& domains() const override { return domains_; }
  std::vector<CounterSnapshot> snapshot() override;
  Clock& clock() override { return clock_; }

 private:
  struct Zone {
    EnergyDomain domain;
    std::filesystem::path energy_file;
    std::uint64_t max_range_uj;
  };
  std::vector<Zone> zones_;
  std::vector<EnergyDomain> domains_;
  SteadyClock clock_;
};

/// Opens the configured provider.
/// Throws ProviderError when rapl_sysfs is unavailable (message names the
/// missing path) and ConfigError on bad synthetic parameters/unknown kinds.
std::unique_ptr<EnergyProvider> open_provider(const ProviderConfig& config);

}  // namespace bgmark
