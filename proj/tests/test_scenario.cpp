#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "ntnsim/scenario.hpp"

using namespace ntnsim;
using nlohmann::json;

namespace {

json minimal() {
    return json{
        {"constellation",
         {{"altitude_km", 550.0}, {"inclination_deg", 53.0}, {"num_planes", 2},
          {"sats_per_plane", 3}}},
        {"sites", json::array({{{"id", "gw-0"}, {"role", "gateway"}}})},
        {"placement", {{"split", "2a"}}},
    };
}

}  // namespace

TEST_CASE("minimal scenario gets the documented defaults") {
    const auto sc = scenario::parse_scenario(minimal());
    CHECK(sc.constellation.num_planes == 2);
    CHECK(sc.sites.size() == 1);
    CHECK(sc.sites[0].role == orbital::SiteRole::gateway);
    CHECK(sc.sites[0].min_elevation_deg == 10.0);
    CHECK(sc.placement.split == placement::SplitOption::o2a);
    CHECK(sc.placement.extension == placement::RicExtension::none);
    CHECK(sc.window.t0_s == 0.0);
    CHECK(sc.window.t1_s == 60.0);
    CHECK(sc.window.step_s == 1.0);
    CHECK(sc.seed == 0);
    CHECK(sc.params.dual_feeder_interval_s == 5.0);
    CHECK(sc.params.feeder_hysteresis_deg == 2.0);
    CHECK(sc.params.predictive);
    CHECK(sc.params.prediction_horizon_s == 120.0);
    CHECK(sc.params.routing_epoch_s == 15.0);
    CHECK(sc.traffic.feeder_capacity_bps == 10e9);
    CHECK(sc.resources.full_gnb_power_w == 78.6);
    CHECK(sc.resources.feeder_modem_power_w == 55.9);
    CHECK(std::isinf(sc.policy.max_isl_range_km));
}

TEST_CASE("unknown keys are rejected at every level") {
    auto j = minimal();
    j["bogus"] = 1;
    CHECK_THROWS_WITH_AS(scenario::parse_scenario(j), doctest::Contains("unknown key 'bogus'"),
                         std::invalid_argument);

    j = minimal();
    j["constellation"]["apogee"] = 600.0;
    CHECK_THROWS_WITH_AS(scenario::parse_scenario(j), doctest::Contains("unknown key 'apogee'"),
                         std::invalid_argument);

    j = minimal();
    j["placement"]["splitt"] = "2a";
    CHECK_THROWS_AS(scenario::parse_scenario(j), std::invalid_argument);

    j = minimal();
    j["params"] = {{"n_eus", 3}};
    CHECK_THROWS_AS(scenario::parse_scenario(j), std::invalid_argument);
}

TEST_CASE("structural validation failures carry rule ids") {
    auto j = minimal();
    j["placement"]["extension"] = "ext1";  // 2a keeps the CU in space
    CHECK_THROWS_WITH_AS(scenario::parse_scenario(j),
                         doctest::Contains("ext1-requires-ground-cu"), std::invalid_argument);

    j = minimal();
    j["placement"]["split"] = "1a";
    j["placement"]["extension"] = "ext2";
    CHECK_THROWS_WITH_AS(scenario::parse_scenario(j), doctest::Contains("ext-requires-space-cu"),
                         std::invalid_argument);

    j = minimal();
    j["sites"] = json::array();
    CHECK_THROWS_WITH_AS(scenario::parse_scenario(j), doctest::Contains("scenario-sites"),
                         std::invalid_argument);

    j = minimal();
    j["sites"].push_back({{"id", "core-0"}, {"role", "core"}});
    j["sites"][1]["id"] = "gw-0";  // duplicate id
    CHECK_THROWS_AS(scenario::parse_scenario(j), std::invalid_argument);

    j = minimal();
    j["window"] = {{"t0_s", 10.0}, {"t1_s", 10.0}, {"step_s", 1.0}};
    CHECK_THROWS_WITH_AS(scenario::parse_scenario(j), doctest::Contains("scenario-window"),
                         std::invalid_argument);

    j = minimal();
    j["params"] = {{"prediction_horizon_s", 2.0}, {"prediction_guard_s", 5.0}};
    CHECK_THROWS_WITH_AS(scenario::parse_scenario(j), doctest::Contains("scenario-params"),
                         std::invalid_argument);
}

TEST_CASE("null max_isl_range_km means unlimited") {
    auto j = minimal();
    j["topology"] = {{"max_isl_range_km", nullptr}};
    auto sc = scenario::parse_scenario(j);
    CHECK(std::isinf(sc.policy.max_isl_range_km));

    j["topology"]["max_isl_range_km"] = 1234.5;
    sc = scenario::parse_scenario(j);
    CHECK(sc.policy.max_isl_range_km == 1234.5);
    CHECK(scenario::to_json(sc)["topology"]["max_isl_range_km"] == 1234.5);
}

TEST_CASE("emit then parse is the identity") {
    auto j = minimal();
    j["name"] = "round-trip";
    j["seed"] = 42;
    j["placement"]["split"] = "2b_cu_separate";
    j["placement"]["extension"] = "ext3";
    j["placement"]["cluster_rule"] = "by_k_hop";
    j["placement"]["cluster_target_size"] = 2;
    j["sites"].push_back({{"id", "core-0"}, {"latitude_deg", 5.0}, {"role", "core"}});
    j["traffic"] = {{"rate_override_bps", {{"E2", 5e6}}}, {"terrestrial_one_way_s", 1e-3}};
    j["topology"] = {{"max_isl_range_km", 4000.0},
                     {"feeder_capable", json::array({{{"plane", 0}, {"slot", 1}}})}};
    j["overrides"] = {{"budget_s", {{"F1_U", 5e-3}}}, {"require_strict_nearrt", true}};
    j["params"] = {{"n_ues", 1000},
                   {"leader_failures", json::array({{{"sat", 3}, {"time_s", 30.0}}})}};

    const auto sc = scenario::parse_scenario(j);
    CHECK(sc.eval.budget_override_s.at(dimensioning::InterfaceClass::F1_U) == 5e-3);
    CHECK(sc.policy.feeder_capable.has_value());
    REQUIRE(sc.params.leader_failures.size() == 1);
    CHECK(sc.params.leader_failures[0].sat == 3);

    const auto emitted = scenario::to_json(sc);
    const auto back = scenario::parse_scenario(emitted);
    CHECK(back == sc);
    CHECK(scenario::to_json(back).dump() == emitted.dump());
}

TEST_CASE("missing scenario file is a parse error") {
    CHECK_THROWS_AS(scenario::parse_scenario_file("/nonexistent/path.json"),
                    std::invalid_argument);
}
