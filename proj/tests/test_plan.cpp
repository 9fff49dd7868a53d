// SPDX-License-Identifier: Apache-2.0
#include <string>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "bgmark/errors.hpp"
#include "bgmark/plan.hpp"

using namespace bgmark;
using nlohmann::json;

namespace {

/// Minimal valid plan document tests mutate to probe one field at a time.
json minimal_plan() {
  return json::parse(R"({
    "name": "probe",
    "repetitions": 2,
    "file_sizes_bytes": [0, 100],
    "provider": {"kind": "synthetic"},
    "feature": {
      "name": "autosave",
      "profile": {
        "trigger": "schedule_time",
        "frequency": "periodic",
        "persistence": "long_running",
        "resources": ["disk_io"],
        "scope": "local"
      },
      "operations": [
        {"id": "file_write"},
        {"id": "change_detect"},
        {"id": "logging"}
      ]
    },
    "workloads": [
      {
        "name": "w1",
        "trigger": {"kind": "periodic", "interval_s": 10},
        "strategy": "direct_sync"
      }
    ],
    "controls": [{"workload": "w1"}]
  })");
}

std::string config_error_for(const json& doc) {
  try {
    plan_from_json(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("minimal plan parses with documented defaults") {
  ExperimentPlan plan = plan_from_json(minimal_plan());
  CHECK(plan.name == "probe");
  CHECK(plan.seed == 0);
  CHECK(plan.randomize_order);
  CHECK(plan.cycle.warmup_s == 5.0);
  CHECK(plan.cycle.cooldown_s == 300.0);
  CHECK(plan.cycle.app_settle_s == 5.0);
  CHECK(plan.edits.rate_hz == 1.0);
  CHECK(plan.edits.append_fraction == 0.8);
  CHECK(plan.analysis.alpha == 0.05);
  CHECK(plan.output_root == "bgmark-runs");
  REQUIRE(plan.chain.variants.size() == 3);
  CHECK(plan.chain.variants[0].name == "file_write");  // unnamed -> last op id
  CHECK(plan.workloads[0].logging == LogSink::stream);
  CHECK(plan.workloads[0].save_budget == 12);
  CHECK(plan.session_duration_s(plan.workloads[0]) == 120.0);
  CHECK(plan.workloads[0].hourly_interval_s() == 10.0);  // no native override
  CHECK(plan.workload("w1").name == "w1");
  CHECK_THROWS_AS(plan.workload("nope"), ConfigError);
}

TEST_CASE("normal form round-trips to the same document") {
  ExperimentPlan plan = plan_from_json(minimal_plan());
  json normal = plan_to_json(plan);
  ExperimentPlan again = plan_from_json(normal);
  CHECK(plan_to_json(again) == normal);
}

TEST_CASE("unknown keys are rejected with their field path") {
  json doc = minimal_plan();
  doc["surprise"] = 1;
  CHECK(config_error_for(doc).find("plan.surprise") != std::string::npos);

  doc = minimal_plan();
  doc["workloads"][0]["extra"] = true;
  CHECK(config_error_for(doc).find("plan.workloads[0].extra") != std::string::npos);

  doc = minimal_plan();
  doc["feature"]["profile"]["shade"] = "blue";
  CHECK(config_error_for(doc).find("plan.feature.profile.shade") != std::string::npos);

  doc = minimal_plan();
  doc["provider"]["synthetic"] = {{"idle_rate_w", 1.0}, {"warp", 9}};
  CHECK(config_error_for(doc).find("plan.provider.synthetic.warp") != std::string::npos);
}

TEST_CASE("missing and ill-typed fields name their path") {
  json doc = minimal_plan();
  doc.erase("repetitions");
  CHECK(config_error_for(doc).find("plan.repetitions") != std::string::npos);

  doc = minimal_plan();
  doc["repetitions"] = "thirty";
  CHECK(config_error_for(doc).find("plan.repetitions") != std::string::npos);

  doc = minimal_plan();
  doc["workloads"][0]["trigger"]["interval_s"] = 0;
  CHECK(config_error_for(doc).find("interval_s") != std::string::npos);

  doc = minimal_plan();
  doc["file_sizes_bytes"] = json::array();
  CHECK(config_error_for(doc).find("file_sizes_bytes") != std::string::npos);

  doc = minimal_plan();
  doc["file_sizes_bytes"] = {100, 100};
  CHECK(config_error_for(doc).find("duplicate") != std::string::npos);

  doc = minimal_plan();
  doc["file_sizes_bytes"] = {-5};
  CHECK(!config_error_for(doc).empty());
}

TEST_CASE("name rules: charset and the reserved control name") {
  json doc = minimal_plan();
  doc["workloads"][0]["name"] = "has space";
  CHECK(!config_error_for(doc).empty());

  doc = minimal_plan();
  doc["workloads"][0]["name"] = "control";
  CHECK(config_error_for(doc).find("reserved") != std::string::npos);

  doc = minimal_plan();
  doc["name"] = "";
  CHECK(!config_error_for(doc).empty());

  doc = minimal_plan();
  doc["feature"]["variant_names"] = {"base", "control", "logging"};
  CHECK(config_error_for(doc).find("reserved") != std::string::npos);
}

TEST_CASE("operations are validated against the implemented set") {
  json doc = minimal_plan();
  doc["feature"]["operations"] = {{{"id", "file_write"}}, {{"id", "telemetry"}}};
  CHECK(config_error_for(doc).find("telemetry") != std::string::npos);

  doc = minimal_plan();
  doc["feature"]["operations"] = {{{"id", "logging"}}, {{"id", "file_write"}}};
  CHECK(config_error_for(doc).find("first operation") != std::string::npos);

  doc = minimal_plan();
  doc["feature"]["operations"] = json::array();
  CHECK(!config_error_for(doc).empty());

  doc = minimal_plan();
  doc["feature"]["variant_names"] = {"only-two", "names"};
  CHECK(config_error_for(doc).find("variant_names") != std::string::npos);
}

TEST_CASE("profile violations and enum typos are fatal at parse time") {
  json doc = minimal_plan();
  doc["feature"]["profile"]["resources"] = json::array();
  CHECK(config_error_for(doc).find("resources") != std::string::npos);

  doc = minimal_plan();
  doc["feature"]["profile"]["trigger"] = "sometimes";
  CHECK(!config_error_for(doc).empty());

  doc = minimal_plan();
  doc["workloads"][0]["strategy"] = "yolo_write";
  CHECK(!config_error_for(doc).empty());

  doc = minimal_plan();
  doc["workloads"][0]["logging"] = "printer";
  CHECK(!config_error_for(doc).empty());
}

TEST_CASE("references must resolve: controls and what-ifs") {
  json doc = minimal_plan();
  doc["controls"] = {{{"workload", "ghost"}}};
  CHECK(config_error_for(doc).find("ghost") != std::string::npos);

  doc = minimal_plan();
  doc["controls"] = {{{"workload", "w1"}}, {{"workload", "w1"}}};
  CHECK(config_error_for(doc).find("duplicate") != std::string::npos);

  doc = minimal_plan();
  doc["analysis"] = {{"whatifs", {{{"workload", "ghost"}, {"new_interval_s", 30}}}}};
  CHECK(config_error_for(doc).find("ghost") != std::string::npos);

  doc = minimal_plan();
  doc["analysis"] = {{"alpha", 1.5}};
  CHECK(config_error_for(doc).find("alpha") != std::string::npos);
}

TEST_CASE("duplicate workloads and bad provider kinds are rejected") {
  json doc = minimal_plan();
  doc["workloads"].push_back(doc["workloads"][0]);
  CHECK(config_error_for(doc).find("duplicate") != std::string::npos);

  doc = minimal_plan();
  doc["provider"]["kind"] = "psychic";
  CHECK(!config_error_for(doc).empty());
}

TEST_CASE("shipped canonical plan loads and matches its headline dimensions") {
  ExperimentPlan plan = load_plan(std::string(BGMARK_PLANS_DIR) + "/paper-canonical.json");
  CHECK(plan.name == "paper-canonical");
  CHECK(plan.repetitions == 30);
  CHECK(plan.file_sizes_bytes == std::vector<std::int64_t>{0, 5120, 51200});
  REQUIRE(plan.workloads.size() == 3);
  REQUIRE(plan.chain.variants.size() == 3);
  CHECK(plan.chain.variants[0].name == "base");
  CHECK(plan.chain.variants[1].name == "change");
  CHECK(plan.chain.variants[2].name == "logging");
  CHECK(plan.controls.size() == 3);
  CHECK(plan.cycle.cooldown_s == 300.0);
  CHECK(plan.provider.kind == "rapl_sysfs");
  for (const auto& w : plan.workloads) {
    CHECK(w.trigger.interval_s == 10.0);
    CHECK(w.save_budget == 12);
    CHECK(plan.session_duration_s(w) == 120.0);
  }
  CHECK(plan.workload("mu").hourly_interval_s() == 5.0);
  CHECK(plan.workload("novelwriter").hourly_interval_s() == 30.0);
  CHECK(plan.workload("leo").hourly_interval_s() == 300.0);
  CHECK(plan.workload("mu").strategy == WriteStrategyKind::direct_sync);
  CHECK(plan.workload("novelwriter").strategy == WriteStrategyKind::temp_rename);
  CHECK(plan.workload("leo").strategy == WriteStrategyKind::backup_overwrite);
  CHECK(plan.workload("mu").logging == LogSink::both);
  REQUIRE(plan.analysis.whatifs.size() == 1);
  CHECK(plan.analysis.whatifs[0].workload == "mu");
  CHECK(plan.analysis.whatifs[0].new_interval_s == 30.0);
}

TEST_CASE("shipped desk-scale plan is the fast synthetic variant") {
  ExperimentPlan plan = load_plan(std::string(BGMARK_PLANS_DIR) + "/desk-scale.json");
  CHECK(plan.name == "desk-scale");
  CHECK(plan.repetitions == 5);
  CHECK(plan.cycle.cooldown_s == 0.0);
  CHECK(plan.provider.kind == "synthetic");
  CHECK(plan.provider.synthetic.idle_rate_w == 1.0);
  CHECK(plan.provider.synthetic.save_cost_j == 0.5);
  for (const auto& w : plan.workloads) {
    CHECK(w.trigger.interval_s == 1.2);
    CHECK(plan.session_duration_s(w) == doctest::Approx(14.4));
  }
}

TEST_CASE("load_plan reports unreadable and unparsable files") {
  CHECK_THROWS_AS(load_plan("/no/such/plan.json"), ConfigError);
}
