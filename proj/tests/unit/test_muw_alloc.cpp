#include "helpers.hpp"

#include "dualband/errors.hpp"
#include "dualband/muw_alloc.hpp"
#include "dualband/oracle/exact.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace dualband;
using testutil::random_instance;
using testutil::rel_close;

namespace {

// Total power of an ownership, each UA's set solved by subset enumeration.
double brute_total(const MuwInstance& inst, const OwnershipMap& own)
{
    double total = 0.0;
    for (std::size_t n = 0; n < inst.num_uas; ++n) {
        std::vector<double> noises;
        for (std::size_t k : own.owned[n]) noises.push_back(inst.noise_at(n, k));
        if (noises.empty()) return INFINITY;
        total += oracle::subset_min_power(noises, inst.demand[n], inst.slot_duration, inst.rb_bandwidth);
    }
    return total;
}

OwnershipMap random_ownership_every_ua(std::mt19937_64& rng, std::size_t uas, std::size_t rbs)
{
    std::vector<std::size_t> perm(rbs);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    std::uniform_int_distribution<std::size_t> pick(0, uas);
    OwnershipMap own(uas, rbs);
    for (std::size_t i = 0; i < rbs; ++i) {
        if (i < uas) {
            own.assign(perm[i], i);
        } else {
            const std::size_t o = pick(rng);
            if (o < uas) own.assign(perm[i], o);
        }
    }
    return own;
}

MuwInstance unit_instance(std::size_t rbs, double demand)
{
    MuwInstance inst;
    inst.num_uas = 1;
    inst.num_rbs = rbs;
    inst.noise.assign(rbs, 1.0);
    inst.demand = {demand};
    inst.distance = {1.0};
    inst.slot_duration = 1.0;
    inst.rb_bandwidth = 1.0;
    return inst;
}

} // namespace

TEST_SUITE("muw_alloc") {

TEST_CASE("ownership map bookkeeping")
{
    OwnershipMap own(2, 4);
    own.assign(3, 0);
    own.assign(1, 0);
    own.assign(2, 1);
    CHECK(own.owned[0] == std::vector<std::size_t>{1, 3});
    own.transfer(3, 1);
    CHECK(own.owned[1] == std::vector<std::size_t>{2, 3});
    own.release(1);
    CHECK(own.rb_owner[1] == OwnershipMap::kUnowned);
    CHECK(own.consistent());
}

TEST_CASE("distance-proportional RB budgets")
{
    CHECK(rb_budgets_from_distance(std::vector<double>{1, 1}, 4) == std::vector<std::size_t>{2, 2});
    CHECK(rb_budgets_from_distance(std::vector<double>{1, 3}, 4) == std::vector<std::size_t>{1, 3});
    CHECK(rb_budgets_from_distance(std::vector<double>{1, 100, 100}, 3) == std::vector<std::size_t>{1, 1, 1});
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> d(5.0, 200.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> dist(1 + trial % 40);
        for (double& v : dist) v = d(rng);
        const auto m = rb_budgets_from_distance(dist, 55);
        CHECK(std::accumulate(m.begin(), m.end(), std::size_t{0}) == 55);
        for (std::size_t v : m) CHECK(v >= 1);
    }
}

TEST_CASE("multiplier initialisation")
{
    const std::vector<double> ones(4, 1.0);
    // 1 - log2(1 / ln 2), evaluated to 40 digits offline.
    CHECK(beta_init(ones, 4.0, 4, 1.0, 1.0) == doctest::Approx(0.4712336270551024).epsilon(1e-14));
    CHECK(beta_init(ones, 0.0, 4, 1.0, 1.0) == doctest::Approx(-std::log2(1.0 / std::log(2.0))));

    std::mt19937_64 rng(32);
    const auto n = testutil::log_uniform(rng, 55, -15.0, -11.0);
    std::vector<double> twice = n;
    for (double& v : twice) v *= 2.0;
    CHECK(beta_init(twice, 10e3, 5, 10e-3, 180e3) - beta_init(n, 10e3, 5, 10e-3, 180e3) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rate estimates")
{
    const MuwInstance inst = unit_instance(4, 4.0);
    BetaState beta = init_beta(inst);
    REQUIRE(beta.rb_budget == std::vector<std::size_t>{4});
    auto r = estimate_rates(inst, beta);
    double sum = 0.0;
    for (double v : r) {
        CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
        sum += v;
    }
    CHECK(inst.slot_duration * sum == doctest::Approx(inst.demand[0]));

    const BetaState before = beta;
    escalate(beta, 0.01);
    CHECK(beta.log2_neg_beta[0] - before.log2_neg_beta[0] == doctest::Approx(0.01).epsilon(1e-12));
    const auto r2 = estimate_rates(inst, beta);
    for (std::size_t k = 0; k < r.size(); ++k) CHECK(r2[k] - r[k] == doctest::Approx(0.01));

    MuwInstance far = inst;
    far.noise[2] = 1e300;
    CHECK(estimate_rates(far, before)[2] == 0.0);
}

TEST_CASE("per-UA escalation touches only the masked UAs")
{
    BetaState beta;
    beta.log2_neg_beta = {1.0, 2.0, 3.0};
    escalate(beta, 0.5, {true, false, true});
    CHECK(beta.log2_neg_beta == std::vector<double>{1.5, 2.0, 3.5});
}

TEST_CASE("greedy feasibility construction")
{
    SUBCASE("single UA saturates every RB")
    {
        const MuwInstance inst = unit_instance(5, 10.0);
        const std::vector<double> r(5, 10.0 / 5.0);
        const auto res = construct_assignment(inst, r);
        CHECK(res.feasible);
        CHECK(res.ownership.owned[0].size() == 5);
    }
    SUBCASE("pigeonhole")
    {
        MuwInstance inst = unit_instance(2, 1.0);
        inst.num_uas = 2;
        inst.noise.assign(4, 1.0);
        inst.demand = {1.0, 1.0};
        inst.distance = {1.0, 1.0};
        const std::vector<double> r{1.0, 0.0, 1.0, 0.0};
        const auto res = construct_assignment(inst, r);
        CHECK_FALSE(res.feasible);
        CHECK(res.ownership.consistent());
    }
}

TEST_CASE("greedy feasibility never beats the exact check")
{
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> shift(-3.0, 1.0);
    std::size_t agree = 0, conservative = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const MuwInstance inst = random_instance(rng, 2, 4);
        BetaState beta = init_beta(inst);
        for (double& b : beta.log2_neg_beta) b += shift(rng);
        const auto r = estimate_rates(inst, beta);
        const bool greedy = construct_assignment(inst, r).feasible;
        const bool exact = oracle::exact_ilp_feasible(r, inst.demand, inst.num_rbs, inst.slot_duration);
        CHECK((!greedy || exact));
        if (greedy == exact) ++agree;
        if (!greedy && exact) ++conservative;
    }
    MESSAGE("greedy agrees on " << agree << " of 500, conservative on " << conservative);
}

TEST_CASE("escalation")
{
    std::mt19937_64 rng(34);
    SUBCASE("feasible start needs no escalation")
    {
        const MuwInstance inst = unit_instance(4, 4.0);
        const auto out = find_feasible_assignment(inst, init_beta(inst), 0.01, EscalationMode::Global, 10);
        CHECK(out.escalations == 0);
    }
    SUBCASE("more UAs than RBs fails loudly")
    {
        const MuwInstance inst = random_instance(rng, 5, 4);
        CHECK_THROWS_AS(find_feasible_assignment(inst, init_beta(inst), 0.01, EscalationMode::Global, 1000000),
                        AllocationError);
    }
    SUBCASE("cap is enforced")
    {
        MuwInstance inst = random_instance(rng, 3, 6);
        BetaState low = init_beta(inst);
        for (double& b : low.log2_neg_beta) b -= 50.0;
        CHECK_THROWS_AS(find_feasible_assignment(inst, low, 0.01, EscalationMode::Global, 5), AllocationError);
    }
    SUBCASE("estimates grow monotonically with escalation")
    {
        const MuwInstance inst = random_instance(rng, 3, 10);
        BetaState beta = init_beta(inst);
        auto prev = estimate_rates(inst, beta);
        for (int i = 0; i < 50; ++i) {
            escalate(beta, 0.01);
            const auto next = estimate_rates(inst, beta);
            for (std::size_t j = 0; j < next.size(); ++j) CHECK(next[j] >= prev[j]);
            prev = next;
        }
    }
    SUBCASE("both modes find a valid start")
    {
        for (int trial = 0; trial < 30; ++trial) {
            const MuwInstance inst = random_instance(rng, 8, 55);
            for (auto mode : {EscalationMode::Global, EscalationMode::PerUa}) {
                const auto out = find_feasible_assignment(inst, init_beta(inst), 0.01, mode, 1000000);
                CHECK(out.ownership.consistent());
                for (const auto& rbs : out.ownership.owned) CHECK_FALSE(rbs.empty());
            }
        }
    }
}

TEST_CASE("power settlement")
{
    std::mt19937_64 rng(35);
    const MuwInstance inst = random_instance(rng, 3, 9);
    OwnershipMap own(3, 9);
    own.assign(4, 0);
    own.assign(0, 1);
    own.assign(1, 1);
    own.assign(2, 2);
    own.assign(5, 2);
    const auto s = settle_power(inst, own);
    CHECK(s[0].total_power ==
          doctest::Approx(power_from_rate(inst.noise_at(0, 4), inst.demand[0] / inst.slot_duration, inst.rb_bandwidth)));

    // Separable: perturbing UA 2's noise leaves the others untouched.
    MuwInstance other = inst;
    other.noise[2 * 9 + 2] *= 10.0;
    const auto s2 = settle_power(other, own);
    CHECK(s2[0].total_power == s[0].total_power);
    CHECK(s2[1].total_power == s[1].total_power);

    // Settled power never exceeds the power implied by the estimates.
    for (int trial = 0; trial < 50; ++trial) {
        const MuwInstance x = random_instance(rng, 4, 55);
        const auto start = find_feasible_assignment(x, init_beta(x), 0.01, EscalationMode::Global, 1000000);
        const auto r = estimate_rates(x, start.beta);
        const auto settled = settle_power(x, start.ownership);
        for (std::size_t n = 0; n < x.num_uas; ++n) {
            double implied = 0.0;
            for (std::size_t k : start.ownership.owned[n]) {
                implied += power_from_rate(x.noise_at(n, k), r[n * x.num_rbs + k], x.rb_bandwidth);
            }
            CHECK(settled[n].total_power <= implied * (1.0 + 1e-12));
        }
    }

    OwnershipMap empty(3, 9);
    CHECK_THROWS_AS(settle_power(inst, empty), AllocationError);
}

TEST_CASE("transfer deltas equal from-scratch differences")
{
    std::mt19937_64 rng(36);
    for (int trial = 0; trial < 200; ++trial) {
        const MuwInstance inst = random_instance(rng, 2, 3);
        const OwnershipMap own = random_ownership_every_ua(rng, 2, 3);
        const auto settled = settle_power(inst, own);
        const auto d = transfer_deltas(inst, own, settled);
        const double before = brute_total(inst, own);
        for (std::size_t k = 0; k < 3; ++k) {
            for (std::size_t r = 0; r < 2; ++r) {
                const std::size_t donor = own.rb_owner[k];
                if (r == donor || (donor != OwnershipMap::kUnowned && own.owned[donor].size() < 2)) {
                    CHECK(std::isinf(d.at(k, r)));
                    continue;
                }
                OwnershipMap moved = own;
                moved.transfer(k, r);
                const double want = before - brute_total(inst, moved);
                CHECK(std::abs(d.at(k, r) - want) <= 1e-9 * before);
            }
        }
    }
}

TEST_CASE("delta special cases")
{
    SUBCASE("RB above the receiver's level contributes nothing")
    {
        MuwInstance inst = unit_instance(3, 1.0);
        inst.num_uas = 2;
        inst.noise = {1.0, 1.0, 50.0, 1.0, 1.0, 1.0};
        inst.demand = {1.0, 1.0};
        inst.distance = {1.0, 1.0};
        OwnershipMap own(2, 3);
        own.assign(0, 0);
        own.assign(1, 1);
        own.assign(2, 1);
        const auto s = settle_power(inst, own);
        const auto d = transfer_deltas(inst, own, s);
        std::vector<std::size_t> rest{1};
        const double donor_change = s[1].total_power - min_power_waterfill(inst.row(1), rest, 1.0, 1.0, 1.0).total_power;
        // Receiver 0 has level 2 < 50 once RB 2 joins, so only the donor side remains.
        CHECK(inst.noise_at(0, 2) >= s[0].water_level);
        CHECK(d.at(2, 0) == doctest::Approx(donor_change));
    }
    SUBCASE("identical UAs gain nothing from swapping")
    {
        MuwInstance inst = unit_instance(4, 2.0);
        inst.num_uas = 2;
        inst.noise.assign(8, 1.5);
        inst.demand = {2.0, 2.0};
        inst.distance = {1.0, 1.0};
        OwnershipMap own(2, 4);
        own.assign(0, 0);
        own.assign(1, 0);
        own.assign(2, 1);
        own.assign(3, 1);
        const auto d = transfer_deltas(inst, own, settle_power(inst, own));
        for (double v : d.net) CHECK(v <= 1e-12);
    }
}

TEST_CASE("local search descends and terminates")
{
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 40; ++trial) {
        const MuwInstance inst = random_instance(rng, 5, 55);
        const auto start = find_feasible_assignment(inst, init_beta(inst), 0.01, EscalationMode::Global, 1000000);
        std::size_t steps = 0;
        const auto res = local_search(inst, start.ownership, [&](const DescentStep& s) {
            ++steps;
            CHECK(s.iteration == steps);
        });
        CHECK(res.transfers == steps);
        CHECK(res.total_power <= res.initial_power);
        for (std::size_t i = 1; i < res.power_trace.size(); ++i) {
            CHECK(res.power_trace[i] < res.power_trace[i - 1]);
        }
        CHECK(res.ownership.consistent());
        for (std::size_t n = 0; n < inst.num_uas; ++n) {
            CHECK_FALSE(res.ownership.owned[n].empty());
            CHECK(rel_close(inst.slot_duration * res.solutions[n].total_rate(), inst.demand[n], 1e-9));
        }

        // The result is a fixed point.
        const auto again = local_search(inst, res.ownership);
        CHECK(again.transfers == 0);
        CHECK(again.ownership == res.ownership);
    }
}

TEST_CASE("local search against the exhaustive optimum")
{
    std::mt19937_64 rng(38);
    ScenarioConfig cfg;
    double worst = 1.0;
    for (int trial = 0; trial < 50; ++trial) {
        const MuwInstance inst = random_instance(rng, 2, 4);
        const auto eod = allocate_muw(inst, {}, cfg);
        const auto exact = oracle::exact_muw_optimum(inst);
        REQUIRE(exact.feasible);
        CHECK(eod.total_power >= exact.total_power * (1.0 - 1e-9));
        worst = std::max(worst, eod.total_power / exact.total_power);
    }
    MESSAGE("worst EOD / optimum ratio on 2x4: " << worst);
}

TEST_CASE("single microwave UA reaches the unconstrained optimum")
{
    std::mt19937_64 rng(39);
    ScenarioConfig cfg;
    for (int trial = 0; trial < 20; ++trial) {
        const MuwInstance inst = random_instance(rng, 1, 55);
        const auto out = allocate_muw(inst, std::vector<std::size_t>{42}, cfg);
        const auto full = min_power_waterfill(inst.row(0), inst.demand[0], inst.slot_duration, inst.rb_bandwidth);
        CHECK(rel_close(out.total_power, full.total_power, 1e-9));
        CHECK(out.uas == std::vector<std::size_t>{42});
        for (std::size_t k = 0; k < 55; ++k) {
            if (full.active[k]) CHECK(out.ownership.rb_owner[k] == 0);
        }
    }
}

} // TEST_SUITE
