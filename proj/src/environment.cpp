// SPDX-License-Identifier: Apache-2.0
#include "bgmark/environment.hpp"

#include <sys/utsname.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace bgmark {

namespace {

std::string read_line(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::string line;
  if (!in || !std::getline(in, line)) return {};
  return line;
}

std::string cpu_model(const std::filesystem::path& proc_root) {
  std::ifstream in(proc_root / "cpuinfo");
  std::string line;
  while (in && std::getline(in, line)) {
    if (line.rfind("model name", 0) == 0) {
      auto colon = line.find(':');
      if (colon != std::string::npos && colon + 2 <= line.size()) {
        return line.substr(colon + 2);
      }
    }
  }
  return "unknown";
}

}  // namespace

bool EnvironmentReport::all_green() const {
  return std::none_of(items.begin(), items.end(),
                      [](const EnvironmentItem& i) { return i.warn; });
}

EnvironmentReport environment_check(const std::filesystem::path& sys_root,
                                    const std::filesystem::path& proc_root) {
  EnvironmentReport report;

  {
    std::string governor =
        read_line(sys_root / "devices/system/cpu/cpu0/cpufreq/scaling_governor");
    EnvironmentItem item{"cpu_governor", governor.empty() ? "unavailable" : governor,
                         false, ""};
    if (governor.empty()) {
      item.note = "cpufreq not exposed; cannot confirm a fixed frequency";
    } else if (governor != "performance") {
      item.warn = true;
      item.note = "set the performance governor to stabilize measurements";
    }
    report.items.push_back(item);
  }

  {
    std::string no_turbo = read_line(sys_root / "devices/system/cpu/intel_pstate/no_turbo");
    EnvironmentItem item{"turbo", "unavailable", false, ""};
    if (no_turbo == "1") {
      item.value = "disabled";
    } else if (no_turbo == "0") {
      item.value = "enabled";
      item.warn = true;
      item.note = "disable turbo for repeatable per-run energy";
    } else {
      item.note = "intel_pstate/no_turbo not exposed";
    }
    report.items.push_back(item);
  }

  {
    EnvironmentItem item{"power_source", "unknown", false, ""};
    std::error_code ec;
    bool on_ac = false, on_battery = false;
    for (const auto& entry :
         std::filesystem::directory_iterator(sys_root / "class/power_supply", ec)) {
      std::string type = read_line(entry.path() / "type");
      if (type == "Mains" && read_line(entry.path() / "online") == "1") on_ac = true;
      if (type == "Battery" && read_line(entry.path() / "status") == "Discharging") {
        on_battery = true;
      }
    }
    if (on_battery && !on_ac) {
      item.value = "battery";
      item.warn = true;
      item.note = "running on battery skews power management behavior";
    } else if (on_ac) {
      item.value = "ac";
    } else {
      item.note = "no power supply reported (VM or desktop PSU)";
    }
    report.items.push_back(item);
  }

  {
    EnvironmentItem item{"rapl", "absent", false, ""};
    std::error_code ec;
    bool found = false;
    for (const auto& entry :
         std::filesystem::directory_iterator(sys_root / "class/powercap", ec)) {
      if (entry.path().filename().string().rfind("intel-rapl:", 0) == 0) {
        found = true;
        break;
      }
    }
    if (found) {
      item.value = "present";
    } else {
      item.warn = true;
      item.note = "no intel-rapl zones; use the synthetic provider";
    }
    report.items.push_back(item);
  }

  {
    std::string loadavg = read_line(proc_root / "loadavg");
    EnvironmentItem item{"load_average", "unavailable", false, ""};
    if (!loadavg.empty()) {
      std::istringstream in(loadavg);
      double one_min = 0;
      in >> one_min;
      std::ostringstream val;
      val << one_min;
      item.value = val.str();
      if (one_min > 1.0) {
        item.warn = true;
        item.note = "background load competes with the measured workload";
      }
    }
    report.items.push_back(item);
  }

  return report;
}

nlohmann::json environment_fingerprint(const std::string& provider_kind) {
  nlohmann::json fp;
  struct utsname uts{};
  if (uname(&uts) == 0) {
    fp["kernel"] = std::string(uts.sysname) + " " + uts.release;
    fp["machine"] = uts.machine;
    fp["hostname"] = uts.nodename;
  } else {
    fp["kernel"] = "unknown";
  }
  fp["cpu_model"] = cpu_model("/proc");
  std::string governor = read_line("/sys/devices/system/cpu/cpu0/cpufreq/scaling_governor");
  fp["cpu_governor"] = governor.empty() ? "unavailable" : governor;
  fp["provider"] = provider_kind;
  fp["recorded_at"] = [] {
    std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return std::string(buf);
  }();
  return fp;
}

}  // namespace bgmark
