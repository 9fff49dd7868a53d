// SPDX-License-Identifier: Apache-2.0
#include "bgmark/plan.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "bgmark/errors.hpp"

namespace bgmark {

namespace {

using nlohmann::json;

/// Tracks which keys of one JSON object were consumed; leftovers are schema
/// violations.
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  const json& require(const std::string& key) {
    known_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) throw ConfigError(path_ + "." + key + ": missing required key");
    return *it;
  }

  const json* optional(const std::string& key) {
    known_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string sub(const std::string& key) const { return path_ + "." + key; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!known_.count(it.key())) {
        throw ConfigError(path_ + "." + it.key() + ": unknown key");
      }
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> known_;
};

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path + ": expected a string");
  return j.get<std::string>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError(path + ": expected a boolean");
  return j.get<bool>();
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path + ": expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path + ": must be finite");
  return v;
}

std::int64_t as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path + ": expected an integer");
  return j.get<std::int64_t>();
}

std::uint64_t as_uint(const json& j, const std::string& path) {
  if (!(j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0))) {
    throw ConfigError(path + ": expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

void check_name(const std::string& name, const std::string& path) {
  if (name.empty()) throw ConfigError(path + ": must not be empty");
  for (char c : name) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
              c == '_' || c == '-';
    if (!ok) {
      throw ConfigError(path + ": name '" + name +
                        "' may only use letters, digits, '_' and '-'");
    }
  }
  if (name == "control") {
    throw ConfigError(path + ": name 'control' is reserved for control runs");
  }
}

TriggerConfig parse_trigger(const json& j, const std::string& path) {
  Obj o(j, path);
  TriggerConfig t;
  auto kind = trigger_kind_from(as_string(o.require("kind"), o.sub("kind")));
  if (!kind) throw ConfigError(o.sub("kind") + ": expected periodic or idle");
  t.kind = *kind;
  t.interval_s = as_number(o.require("interval_s"), o.sub("interval_s"));
  if (!(t.interval_s > 0)) throw ConfigError(o.sub("interval_s") + ": must be > 0");
  o.finish();
  return t;
}

CycleConfig parse_cycle(const json& j, const std::string& path) {
  Obj o(j, path);
  CycleConfig c;
  auto nonneg = [&](const char* key, double fallback) {
    const json* v = o.optional(key);
    if (!v) return fallback;
    double x = as_number(*v, o.sub(key));
    if (x < 0) throw ConfigError(o.sub(key) + ": must be >= 0");
    return x;
  };
  c.warmup_s = nonneg("warmup_s", c.warmup_s);
  c.cooldown_s = nonneg("cooldown_s", c.cooldown_s);
  c.app_settle_s = nonneg("app_settle_s", c.app_settle_s);
  c.sample_period_s = nonneg("sample_period_s", c.sample_period_s);
  o.finish();
  return c;
}

ProviderConfig parse_provider(const json& j, const std::string& path) {
  Obj o(j, path);
  ProviderConfig p;
  p.kind = as_string(o.require("kind"), o.sub("kind"));
  if (p.kind != "synthetic" && p.kind != "rapl_sysfs") {
    throw ConfigError(o.sub("kind") + ": expected rapl_sysfs or synthetic");
  }
  if (const json* s = o.optional("synthetic")) {
    Obj so(*s, o.sub("synthetic"));
    if (const json* v = so.optional("idle_rate_w")) {
      p.synthetic.idle_rate_w = as_number(*v, so.sub("idle_rate_w"));
      if (p.synthetic.idle_rate_w < 0) {
        throw ConfigError(so.sub("idle_rate_w") + ": must be >= 0");
      }
    }
    if (const json* v = so.optional("save_cost_j")) {
      p.synthetic.save_cost_j = as_number(*v, so.sub("save_cost_j"));
      if (p.synthetic.save_cost_j < 0) {
        throw ConfigError(so.sub("save_cost_j") + ": must be >= 0");
      }
    }
    if (const json* v = so.optional("max_range_uj")) {
      p.synthetic.max_range_uj = as_uint(*v, so.sub("max_range_uj"));
      if (p.synthetic.max_range_uj == 0) {
        throw ConfigError(so.sub("max_range_uj") + ": must be > 0");
      }
    }
    if (const json* v = so.optional("realtime")) {
      p.synthetic.realtime = as_bool(*v, so.sub("realtime"));
    }
    so.finish();
  }
  if (const json* v = o.optional("powercap_root")) {
    p.powercap_root = as_string(*v, o.sub("powercap_root"));
  }
  o.finish();
  return p;
}

FeatureProfile parse_profile(const json& j, const std::string& path) {
  Obj o(j, path);
  FeatureProfile p;
  auto trig = trigger_class_from(as_string(o.require("trigger"), o.sub("trigger")));
  if (!trig) {
    throw ConfigError(o.sub("trigger") +
                      ": expected schedule_time|schedule_event|schedule_idle|reactive");
  }
  p.trigger = *trig;
  auto freq = frequency_class_from(as_string(o.require("frequency"), o.sub("frequency")));
  if (!freq) throw ConfigError(o.sub("frequency") + ": expected periodic|aperiodic|sporadic");
  p.frequency = *freq;
  auto pers =
      persistence_class_from(as_string(o.require("persistence"), o.sub("persistence")));
  if (!pers) {
    throw ConfigError(o.sub("persistence") +
                      ": expected immediate|long_running|deferrable|persistent");
  }
  p.persistence = *pers;
  const json& res = o.require("resources");
  if (!res.is_array()) throw ConfigError(o.sub("resources") + ": expected an array");
  for (std::size_t i = 0; i < res.size(); ++i) {
    std::string rpath = o.sub("resources") + "[" + std::to_string(i) + "]";
    auto r = resource_class_from(as_string(res[i], rpath));
    if (!r) throw ConfigError(rpath + ": expected cpu|disk_io|network|sensors");
    p.resources.insert(*r);
  }
  auto scope = scope_class_from(as_string(o.require("scope"), o.sub("scope")));
  if (!scope) throw ConfigError(o.sub("scope") + ": expected local|external");
  p.scope = *scope;
  o.finish();

  for (const auto& violation : validate_profile(p)) {
    throw ConfigError(path + ": " + violation);
  }
  return p;
}

WorkloadTemplate parse_workload(const json& j, const std::string& path) {
  Obj o(j, path);
  WorkloadTemplate w;
  w.name = as_string(o.require("name"), o.sub("name"));
  check_name(w.name, o.sub("name"));
  w.trigger = parse_trigger(o.require("trigger"), o.sub("trigger"));
  auto strat = write_strategy_from(as_string(o.require("strategy"), o.sub("strategy")));
  if (!strat) {
    throw ConfigError(o.sub("strategy") +
                      ": expected direct_sync|temp_rename|backup_overwrite");
  }
  w.strategy = *strat;
  if (const json* v = o.optional("logging")) {
    auto sink = log_sink_from(as_string(*v, o.sub("logging")));
    if (!sink) throw ConfigError(o.sub("logging") + ": expected none|stream|file|both");
    w.logging = *sink;
  }
  if (const json* v = o.optional("save_budget")) {
    w.save_budget = static_cast<int>(as_int(*v, o.sub("save_budget")));
    if (w.save_budget < 1) throw ConfigError(o.sub("save_budget") + ": must be >= 1");
  }
  if (const json* v = o.optional("native_interval_s")) {
    w.native_interval_s = as_number(*v, o.sub("native_interval_s"));
    if (w.native_interval_s < 0) {
      throw ConfigError(o.sub("native_interval_s") + ": must be >= 0");
    }
  }
  o.finish();
  return w;
}

}  // namespace

const WorkloadTemplate& ExperimentPlan::workload(const std::string& name) const {
  for (const auto& w : workloads) {
    if (w.name == name) return w;
  }
  throw ConfigError("plan has no workload named '" + name + "'");
}

ExperimentPlan plan_from_json(const json& doc) {
  Obj o(doc, "plan");
  ExperimentPlan plan;

  plan.name = as_string(o.require("name"), o.sub("name"));
  check_name(plan.name, o.sub("name"));
  if (const json* v = o.optional("seed")) plan.seed = as_uint(*v, o.sub("seed"));
  if (const json* v = o.optional("randomize_order")) {
    plan.randomize_order = as_bool(*v, o.sub("randomize_order"));
  }

  plan.repetitions = static_cast<int>(as_int(o.require("repetitions"), o.sub("repetitions")));
  if (plan.repetitions < 1) throw ConfigError(o.sub("repetitions") + ": must be >= 1");

  const json& sizes = o.require("file_sizes_bytes");
  if (!sizes.is_array() || sizes.empty()) {
    throw ConfigError(o.sub("file_sizes_bytes") + ": expected a non-empty array");
  }
  std::unordered_set<std::int64_t> seen_sizes;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    std::string spath = o.sub("file_sizes_bytes") + "[" + std::to_string(i) + "]";
    std::int64_t s = as_int(sizes[i], spath);
    if (s < 0) throw ConfigError(spath + ": must be >= 0");
    if (!seen_sizes.insert(s).second) throw ConfigError(spath + ": duplicate size");
    plan.file_sizes_bytes.push_back(s);
  }

  if (const json* v = o.optional("cycle")) plan.cycle = parse_cycle(*v, o.sub("cycle"));
  if (const json* v = o.optional("provider")) {
    plan.provider = parse_provider(*v, o.sub("provider"));
  }

  {
    Obj f(o.require("feature"), o.sub("feature"));
    plan.feature_name = as_string(f.require("name"), f.sub("name"));
    check_name(plan.feature_name, f.sub("name"));
    plan.profile = parse_profile(f.require("profile"), f.sub("profile"));

    const json& ops = f.require("operations");
    if (!ops.is_array() || ops.empty()) {
      throw ConfigError(f.sub("operations") + ": expected a non-empty array");
    }
    for (std::size_t i = 0; i < ops.size(); ++i) {
      std::string opath = f.sub("operations") + "[" + std::to_string(i) + "]";
      Obj oo(ops[i], opath);
      AtomicOperation op;
      op.id = as_string(oo.require("id"), oo.sub("id"));
      if (const json* d = oo.optional("description")) {
        op.description = as_string(*d, oo.sub("description"));
      }
      oo.finish();
      // The autosave suite executes exactly these operations; anything else
      // has no runtime binding.
      if (op.id != "file_write" && op.id != "change_detect" && op.id != "logging") {
        throw ConfigError(opath + ".id: unsupported operation '" + op.id +
                          "' (this workload suite implements file_write, "
                          "change_detect, logging)");
      }
      if (i == 0 && op.id != "file_write") {
        throw ConfigError(opath + ".id: the first operation must be file_write "
                          "(a variant that cannot save measures nothing)");
      }
      plan.operations.push_back(std::move(op));
    }

    if (const json* names = f.optional("variant_names")) {
      if (!names->is_array()) {
        throw ConfigError(f.sub("variant_names") + ": expected an array");
      }
      for (std::size_t i = 0; i < names->size(); ++i) {
        std::string npath = f.sub("variant_names") + "[" + std::to_string(i) + "]";
        std::string name = as_string((*names)[i], npath);
        check_name(name, npath);
        plan.variant_names.push_back(std::move(name));
      }
      if (plan.variant_names.size() != plan.operations.size()) {
        throw ConfigError(f.sub("variant_names") + ": expected " +
                          std::to_string(plan.operations.size()) + " names");
      }
    }
    f.finish();

    plan.chain = build_variant_chain(plan.operations, plan.variant_names);
    validate_chain(plan.chain);
  }

  const json& workloads = o.require("workloads");
  if (!workloads.is_array() || workloads.empty()) {
    throw ConfigError(o.sub("workloads") + ": expected a non-empty array");
  }
  std::unordered_set<std::string> wl_names;
  for (std::size_t i = 0; i < workloads.size(); ++i) {
    std::string wpath = o.sub("workloads") + "[" + std::to_string(i) + "]";
    WorkloadTemplate w = parse_workload(workloads[i], wpath);
    if (!wl_names.insert(w.name).second) {
      throw ConfigError(wpath + ".name: duplicate workload '" + w.name + "'");
    }
    plan.workloads.push_back(std::move(w));
  }

  if (const json* controls = o.optional("controls")) {
    if (!controls->is_array()) throw ConfigError(o.sub("controls") + ": expected an array");
    std::set<std::pair<std::string, std::int64_t>> seen_controls;
    for (std::size_t i = 0; i < controls->size(); ++i) {
      std::string cpath = o.sub("controls") + "[" + std::to_string(i) + "]";
      Obj co((*controls)[i], cpath);
      ControlSpec c;
      c.workload = as_string(co.require("workload"), co.sub("workload"));
      if (!wl_names.count(c.workload)) {
        throw ConfigError(co.sub("workload") + ": unknown workload '" + c.workload + "'");
      }
      if (const json* v = co.optional("file_size_bytes")) {
        c.file_size_bytes = as_int(*v, co.sub("file_size_bytes"));
        if (c.file_size_bytes < 0) {
          throw ConfigError(co.sub("file_size_bytes") + ": must be >= 0");
        }
      }
      co.finish();
      if (!seen_controls.insert({c.workload, c.file_size_bytes}).second) {
        throw ConfigError(cpath + ": duplicate control scenario");
      }
      plan.controls.push_back(std::move(c));
    }
  }

  if (const json* v = o.optional("edits")) {
    Obj eo(*v, o.sub("edits"));
    if (const json* r = eo.optional("rate_hz")) {
      plan.edits.rate_hz = as_number(*r, eo.sub("rate_hz"));
      if (plan.edits.rate_hz < 0) throw ConfigError(eo.sub("rate_hz") + ": must be >= 0");
    }
    if (const json* a = eo.optional("append_fraction")) {
      plan.edits.append_fraction = as_number(*a, eo.sub("append_fraction"));
      if (!(plan.edits.append_fraction > 0) || plan.edits.append_fraction > 1) {
        throw ConfigError(eo.sub("append_fraction") + ": must be in (0, 1]");
      }
    }
    eo.finish();
  }

  if (const json* v = o.optional("session")) {
    Obj so(*v, o.sub("session"));
    if (const json* d = so.optional("duration_s")) {
      plan.session.duration_s = as_number(*d, so.sub("duration_s"));
      if (plan.session.duration_s < 0) {
        throw ConfigError(so.sub("duration_s") + ": must be >= 0");
      }
    }
    if (const json* m = so.optional("max_session_s")) {
      plan.session.max_session_s = as_number(*m, so.sub("max_session_s"));
      if (plan.session.max_session_s < 0) {
        throw ConfigError(so.sub("max_session_s") + ": must be >= 0");
      }
    }
    so.finish();
  }

  if (const json* v = o.optional("analysis")) {
    Obj ao(*v, o.sub("analysis"));
    if (const json* a = ao.optional("alpha")) {
      plan.analysis.alpha = as_number(*a, ao.sub("alpha"));
      if (!(plan.analysis.alpha > 0) || !(plan.analysis.alpha < 1)) {
        throw ConfigError(ao.sub("alpha") + ": must be in (0, 1)");
      }
    }
    if (const json* w = ao.optional("whatifs")) {
      if (!w->is_array()) throw ConfigError(ao.sub("whatifs") + ": expected an array");
      for (std::size_t i = 0; i < w->size(); ++i) {
        std::string wpath = ao.sub("whatifs") + "[" + std::to_string(i) + "]";
        Obj wo((*w)[i], wpath);
        WhatIfSpec spec;
        spec.workload = as_string(wo.require("workload"), wo.sub("workload"));
        if (!wl_names.count(spec.workload)) {
          throw ConfigError(wo.sub("workload") + ": unknown workload '" + spec.workload +
                            "'");
        }
        spec.new_interval_s = as_number(wo.require("new_interval_s"), wo.sub("new_interval_s"));
        if (!(spec.new_interval_s > 0)) {
          throw ConfigError(wo.sub("new_interval_s") + ": must be > 0");
        }
        wo.finish();
        plan.analysis.whatifs.push_back(std::move(spec));
      }
    }
    ao.finish();
  }

  if (const json* v = o.optional("output_root")) {
    plan.output_root = as_string(*v, o.sub("output_root"));
    if (plan.output_root.empty()) {
      throw ConfigError(o.sub("output_root") + ": must not be empty");
    }
  }

  o.finish();
  return plan;
}

ExperimentPlan load_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open plan file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("plan file '" + path.string() + "': " + e.what());
  }
  return plan_from_json(doc);
}

nlohmann::json plan_to_json(const ExperimentPlan& plan) {
  json doc;
  doc["name"] = plan.name;
  doc["seed"] = plan.seed;
  doc["randomize_order"] = plan.randomize_order;
  doc["repetitions"] = plan.repetitions;
  doc["file_sizes_bytes"] = plan.file_sizes_bytes;
  doc["cycle"] = {{"warmup_s", plan.cycle.warmup_s},
                  {"cooldown_s", plan.cycle.cooldown_s},
                  {"app_settle_s", plan.cycle.app_settle_s},
                  {"sample_period_s", plan.cycle.sample_period_s}};
  doc["provider"] = {{"kind", plan.provider.kind},
                     {"synthetic",
                      {{"idle_rate_w", plan.provider.synthetic.idle_rate_w},
                       {"save_cost_j", plan.provider.synthetic.save_cost_j},
                       {"max_range_uj", plan.provider.synthetic.max_range_uj},
                       {"realtime", plan.provider.synthetic.realtime}}},
                     {"powercap_root", plan.provider.powercap_root.string()}};

  json ops = json::array();
  for (const auto& op : plan.operations) {
    ops.push_back({{"id", op.id}, {"description", op.description}});
  }
  json feature = {{"name", plan.feature_name},
                  {"profile",
                   {{"trigger", to_string(plan.profile.trigger)},
                    {"frequency", to_string(plan.profile.frequency)},
                    {"persistence", to_string(plan.profile.persistence)},
                    {"scope", to_string(plan.profile.scope)}}},
                  {"operations", ops}};
  json resources = json::array();
  for (auto r : plan.profile.resources) resources.push_back(to_string(r));
  feature["profile"]["resources"] = resources;
  if (!plan.variant_names.empty()) feature["variant_names"] = plan.variant_names;
  doc["feature"] = feature;

  json workloads = json::array();
  for (const auto& w : plan.workloads) {
    workloads.push_back({{"name", w.name},
                         {"trigger",
                          {{"kind", to_string(w.trigger.kind)},
                           {"interval_s", w.trigger.interval_s}}},
                         {"strategy", to_string(w.strategy)},
                         {"logging", to_string(w.logging)},
                         {"save_budget", w.save_budget},
                         {"native_interval_s", w.native_interval_s}});
  }
  doc["workloads"] = workloads;

  json controls = json::array();
  for (const auto& c : plan.controls) {
    controls.push_back({{"workload", c.workload}, {"file_size_bytes", c.file_size_bytes}});
  }
  doc["controls"] = controls;

  doc["edits"] = {{"rate_hz", plan.edits.rate_hz},
                  {"append_fraction", plan.edits.append_fraction}};
  doc["session"] = {{"duration_s", plan.session.duration_s},
                    {"max_session_s", plan.session.max_session_s}};

  json whatifs = json::array();
  for (const auto& w : plan.analysis.whatifs) {
    whatifs.push_back({{"workload", w.workload}, {"new_interval_s", w.new_interval_s}});
  }
  doc["analysis"] = {{"alpha", plan.analysis.alpha}, {"whatifs", whatifs}};
  doc["output_root"] = plan.output_root;
  return doc;
}

}  // namespace bgmark
