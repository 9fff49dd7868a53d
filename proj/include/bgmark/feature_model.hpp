// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace bgmark {

// Property taxonomy for background features. One value per axis; resources
// may hold several.
enum class TriggerClass { schedule_time, schedule_event, schedule_idle, reactive };
enum class FrequencyClass { periodic, aperiodic, sporadic };
enum class PersistenceClass { immediate, long_running, deferrable, persistent };
enum class ResourceClass { cpu, disk_io, network, sensors };
enum class ScopeClass { local, external };

const char* to_string(TriggerClass v);
const char* to_string(FrequencyClass v);
const char* to_string(PersistenceClass v);
const char* to_string(ResourceClass v);
const char* to_string(ScopeClass v);

std::optional<TriggerClass> trigger_class_from(const std::string& s);
std::optional<FrequencyClass> frequency_class_from(const std::string& s);
std::optional<PersistenceClass> persistence_class_from(const std::string& s);
std::optional<ResourceClass> resource_class_from(const std::string& s);
std::optional<ScopeClass> scope_class_from(const std::string& s);

/// Classified profile of one background feature.
struct FeatureProfile {
  TriggerClass trigger = TriggerClass::schedule_time;
  FrequencyClass frequency = FrequencyClass::periodic;
  PersistenceClass persistence = PersistenceClass::long_running;
  std::set<ResourceClass> resources;
  ScopeClass scope = ScopeClass::local;
};

/// Lists violated profile invariants; empty means valid.
std::vector<std::string> validate_profile(const FeatureProfile& profile);

/// Smallest self-contained unit of the feature's work.
struct AtomicOperation {
  std::string id;
  std::string description;
};

/// One measurable configuration: a named, ordered subset of operations.
struct VariantSpec {
  std::string name;
  std::vector<std::string> operations;  // AtomicOperation ids, in chain order
};

/// Incremental variants; each one extends the previous by exactly one
/// operation (strict-prefix property).
struct VariantChain {
  std::vector<VariantSpec> variants;
};

/// Builds the incremental chain: variant k holds the first k operations.
/// Unnamed variants take the id of their last operation; `names`, when given,
/// must match the operation count.
/// Throws ConfigError on duplicate ids, empty input, or a name-count mismatch.
VariantChain build_variant_chain(const std::vector<AtomicOperation>& atomic_ops,
                                 const std::vector<std::string>& names = {});

/// Checks the strict-prefix property and per-variant invariants.
/// Throws ConfigError naming the first offending variant.
void validate_chain(const VariantChain& chain);

}  // namespace bgmark
