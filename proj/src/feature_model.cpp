// SPDX-License-Identifier: Apache-2.0
#include "bgmark/feature_model.hpp"

#include <unordered_set>

#include "bgmark/errors.hpp"

namespace bgmark {

const char* to_string(TriggerClass v) {
  switch (v) {
    case TriggerClass::schedule_time: return "schedule_time";
    case TriggerClass::schedule_event: return "schedule_event";
    case TriggerClass::schedule_idle: return "schedule_idle";
    case TriggerClass::reactive: return "reactive";
  }
  return "?";
}

const char* to_string(FrequencyClass v) {
  switch (v) {
    case FrequencyClass::periodic: return "periodic";
    case FrequencyClass::aperiodic: return "aperiodic";
    case FrequencyClass::sporadic: return "sporadic";
  }
  return "?";
}

const char* to_string(PersistenceClass v) {
  switch (v) {
    case PersistenceClass::immediate: return "immediate";
    case PersistenceClass::long_running: return "long_running";
    case PersistenceClass::deferrable: return "deferrable";
    case PersistenceClass::persistent: return "persistent";
  }
  return "?";
}

const char* to_string(ResourceClass v) {
  switch (v) {
    case ResourceClass::cpu: return "cpu";
    case ResourceClass::disk_io: return "disk_io";
    case ResourceClass::network: return "network";
    case ResourceClass::sensors: return "sensors";
  }
  return "?";
}

const char* to_string(ScopeClass v) {
  switch (v) {
    case ScopeClass::local: return "local";
    case ScopeClass::external: return "external";
  }
  return "?";
}

std::optional<TriggerClass> trigger_class_from(const std::string& s) {
  if (s == "schedule_time") return TriggerClass::schedule_time;
  if (s == "schedule_event") return TriggerClass::schedule_event;
  if (s == "schedule_idle") return TriggerClass::schedule_idle;
  if (s == "reactive") return TriggerClass::reactive;
  return std::nullopt;
}

std::optional<FrequencyClass> frequency_class_from(const std::string& s) {
  if (s == "periodic") return FrequencyClass::periodic;
  if (s == "aperiodic") return FrequencyClass::aperiodic;
  if (s == "sporadic") return FrequencyClass::sporadic;
  return std::nullopt;
}

std::optional<PersistenceClass> persistence_class_from(const std::string& s) {
  if (s == "immediate") return PersistenceClass::immediate;
  if (s == "long_running") return PersistenceClass::long_running;
  if (s == "deferrable") return PersistenceClass::deferrable;
  if (s == "persistent") return PersistenceClass::persistent;
  return std::nullopt;
}

std::optional<ResourceClass> resource_class_from(const std::string& s) {
  if (s == "cpu") return ResourceClass::cpu;
  if (s == "disk_io") return ResourceClass::disk_io;
  if (s == "network") return ResourceClass::network;
  if (s == "sensors") return ResourceClass::sensors;
  return std::nullopt;
}

std::optional<ScopeClass> scope_class_from(const std::string& s) {
  if (s == "local") return ScopeClass::local;
  if (s == "external") return ScopeClass::external;
  return std::nullopt;
}

std::vector<std::string> validate_profile(const FeatureProfile& profile) {
  std::vector<std::string> violations;
  if (profile.resources.empty()) {
    violations.push_back("resources empty: a feature must claim at least one resource");
  }
  return violations;
}

VariantChain build_variant_chain(const std::vector<AtomicOperation>& atomic_ops,
                                 const std::vector<std::string>& names) {
  if (atomic_ops.empty()) {
    throw ConfigError("variant chain: operation list is empty");
  }
  if (!names.empty() && names.size() != atomic_ops.size()) {
    throw ConfigError("variant chain: " + std::to_string(names.size()) +
                      " names given for " + std::to_string(atomic_ops.size()) +
                      " operations");
  }
  std::unordered_set<std::string> seen;
  for (const auto& op : atomic_ops) {
    if (op.id.empty()) throw ConfigError("variant chain: operation with empty id");
    if (!seen.insert(op.id).second) {
      throw ConfigError("variant chain: duplicate operation id '" + op.id + "'");
    }
  }

  VariantChain chain;
  std::vector<std::string> prefix;
  for (std::size_t k = 0; k < atomic_ops.size(); ++k) {
    prefix.push_back(atomic_ops[k].id);
    VariantSpec v;
    v.name = names.empty() ? atomic_ops[k].id : names[k];
    v.operations = prefix;
    chain.variants.push_back(std::move(v));
  }
  return chain;
}

void validate_chain(const VariantChain& chain) {
  for (std::size_t i = 0; i < chain.variants.size(); ++i) {
    const auto& v = chain.variants[i];
    if (v.operations.empty()) {
      throw ConfigError("variant '" + v.name + "': empty operation list");
    }
    std::unordered_set<std::string> seen(v.operations.begin(), v.operations.end());
    if (seen.size() != v.operations.size()) {
      throw ConfigError("variant '" + v.name + "': duplicate operations");
    }
    if (i == 0) continue;
    const auto& prev = chain.variants[i - 1];
    bool strict_prefix = prev.operations.size() < v.operations.size() &&
                         std::equal(prev.operations.begin(), prev.operations.end(),
                                    v.operations.begin());
    if (!strict_prefix) {
      throw ConfigError("variant '" + v.name + "' does not extend '" + prev.name +
                        "': chain variants must grow by strict prefixes");
    }
  }
}

}  // namespace bgmark
