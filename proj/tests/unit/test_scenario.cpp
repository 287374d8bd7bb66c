#include "dualband/errors.hpp"
#include "dualband/scenario.hpp"

#include <doctest.h>

#include <set>

using namespace dualband;

TEST_SUITE("scenario") {

TEST_CASE("reference RB counts")
{
    const ScenarioConfig cfg;
    CHECK(cfg.muw.rb_count() == 55);
    CHECK(cfg.mmw.rb_count() == 5555);
}

TEST_CASE("validation names the offending field")
{
    ScenarioConfig cfg;
    cfg.slot_duration = 0.0;
    try {
        validate(cfg);
        FAIL("zero slot accepted");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "slot_duration");
    }

    ScenarioConfig shared;
    shared.mmw_time_mode = MmwTimeMode::Shared;
    shared.mmw_quota = 100; // 100 * 0.1 ms fills the slot exactly
    CHECK_THROWS_AS(validate(shared), ConfigError);
    shared.mmw_time_mode = MmwTimeMode::Fixed;
    CHECK_NOTHROW(validate(shared));

    ScenarioConfig dup;
    dup.qos_horizons = {2, 2};
    CHECK_THROWS_AS(validate(dup), ConfigError);
}

TEST_CASE("JSON parsing")
{
    const auto cfg = parse_config(R"({"num_ues": 7, "mmw_time_mode": "shared", "qos_horizons": [1, 3]})");
    CHECK(cfg.num_ues == 7);
    CHECK(cfg.mmw_time_mode == MmwTimeMode::Shared);
    CHECK(cfg.qos_horizons == std::vector<std::size_t>{1, 3});
    CHECK(cfg.bits_required == 10e3);

    CHECK_THROWS_AS(parse_config(R"({"num_uess": 7})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"escalation_mode": "sometimes"})"), ConfigError);
    CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
    CHECK_THROWS_AS(parse_config("{"), ConfigError);
}

TEST_CASE("to_json round-trips")
{
    ScenarioConfig cfg;
    cfg.num_ues = 13;
    cfg.eta = 0.25;
    cfg.escalation_mode = EscalationMode::PerUa;
    cfg.rng_seed = 99;
    const auto back = parse_config(to_json(cfg));
    CHECK(to_json(back) == to_json(cfg));
    CHECK(back.escalation_mode == EscalationMode::PerUa);
}

TEST_CASE("topology layout")
{
    ScenarioConfig cfg;
    cfg.num_ues = 20;
    cfg.qos_horizons = {1, 2, 3};
    Rng rng = make_rng(5, 0);
    const Topology topo = generate_topology(cfg, rng);
    REQUIRE(topo.uas.size() == 60);
    for (const UserApp& ua : topo.uas) {
        CHECK(ua.distance_m >= cfg.min_distance_m);
        CHECK(ua.distance_m <= cfg.cell_radius_m);
        CHECK(ua.ue_id == ua.ua_id / 3);
        CHECK(ua.demand_bits == cfg.bits_required);
        // Co-located UAs share position.
        CHECK(ua.distance_m == topo.uas[ua.ue_id * 3].distance_m);
    }
    std::set<std::size_t> seen;
    std::size_t prev = 0;
    for (const QoSClass& q : topo.classes) {
        CHECK(q.horizon > prev);
        prev = q.horizon;
        for (std::size_t id : q.members) {
            CHECK(topo.uas[id].qos_horizon == q.horizon);
            CHECK(seen.insert(id).second);
        }
    }
    CHECK(seen.size() == topo.uas.size());
    CHECK(topo.max_horizon() == prev);
}

TEST_CASE("topology is reproducible per seed and stream")
{
    const ScenarioConfig cfg;
    Rng a = make_rng(3, 0);
    Rng b = make_rng(3, 0);
    Rng c = make_rng(3, 1);
    const auto ta = generate_topology(cfg, a);
    const auto tb = generate_topology(cfg, b);
    const auto tc = generate_topology(cfg, c);
    for (std::size_t i = 0; i < ta.uas.size(); ++i) CHECK(ta.uas[i].distance_m == tb.uas[i].distance_m);
    CHECK(ta.uas[0].distance_m != tc.uas[0].distance_m);
}

} // TEST_SUITE
