#include "helpers.hpp"

#include "dualband/errors.hpp"
#include "dualband/oracle/exact.hpp"

#include <doctest.h>

#include <cmath>

using namespace dualband;
using namespace dualband::oracle;

TEST_SUITE("oracle") {

TEST_CASE("subset enumeration on hand instances")
{
    const std::vector<double> a{1.0, 100.0};
    CHECK(subset_min_power(a, 1.0, 1.0, 1.0) == doctest::Approx(1.0));
    const std::vector<double> b{1.0, 1.0, 1.0, 1.0};
    CHECK(subset_min_power(b, 4.0, 1.0, 1.0) == doctest::Approx(4.0));
    CHECK(subset_min_power(b, 0.0, 1.0, 1.0) == 0.0);
}

TEST_CASE("exact microwave optimum")
{
    std::mt19937_64 rng(41);
    SUBCASE("one UA equals water-filling over all RBs")
    {
        const MuwInstance inst = testutil::random_instance(rng, 1, 6);
        const auto r = exact_muw_optimum(inst);
        CHECK(r.feasible);
        CHECK(r.total_power ==
              doctest::Approx(min_power_total(inst.row(0), inst.demand[0], inst.slot_duration, inst.rb_bandwidth)));
    }
    SUBCASE("pigeonhole")
    {
        const MuwInstance inst = testutil::random_instance(rng, 2, 1);
        CHECK_FALSE(exact_muw_optimum(inst).feasible);
    }
    SUBCASE("both enumeration orders agree")
    {
        for (int trial = 0; trial < 30; ++trial) {
            const MuwInstance inst = testutil::random_instance(rng, 2 + trial % 2, 3 + trial % 4);
            const auto f = exact_muw_optimum(inst, {}, EnumerationOrder::Forward);
            const auto r = exact_muw_optimum(inst, {}, EnumerationOrder::Reverse);
            CHECK(f.feasible == r.feasible);
            CHECK(f.total_power == doctest::Approx(r.total_power).epsilon(1e-12));
        }
    }
    SUBCASE("budget")
    {
        const MuwInstance big = testutil::random_instance(rng, 4, 6);
        CHECK_THROWS_AS(exact_muw_optimum(big), BudgetError);
        OracleBudget tight;
        tight.max_partitions = 10;
        CHECK_THROWS_AS(exact_muw_optimum(testutil::random_instance(rng, 2, 4), tight), BudgetError);
    }
}

TEST_CASE("exact grouping")
{
    const std::vector<ProxyEntry> equal{{0, 1.0}, {1, 1.0}, {2, 1.0}, {3, 1.0}, {4, 1.0}, {5, 1.0}};
    CHECK(exact_grouping(equal, 3).objective == 0.0);

    const std::vector<ProxyEntry> traced{{0, 4.0}, {1, 3.0}, {2, 2.0}, {3, 1.0}};
    const auto r = exact_grouping(traced, 2);
    CHECK(r.objective == 0.0);
    CHECK(r.partitions == 14); // 7 unlabelled 2-partitions, each in two labellings
    CHECK(r.label[0] == r.label[3]);
    CHECK(r.label[1] == r.label[2]);

    // N = T: every labelled partition is a permutation of singletons.
    const std::vector<ProxyEntry> three{{0, 1.0}, {1, 2.0}, {2, 4.0}};
    const auto s = exact_grouping(three, 3);
    CHECK(s.partitions == 6);
    CHECK(s.objective == doctest::Approx(0.5 + 0.5)); // 1,2,4 ascending: |1-1/2| + |1-2/4|

    OracleBudget tight;
    tight.max_partitions = 100;
    CHECK_THROWS_AS(exact_grouping(equal, 3, tight), BudgetError);
}

TEST_CASE("exact 0-1 feasibility")
{
    const std::vector<double> none{0.0, 0.0};
    CHECK(exact_ilp_feasible(std::vector<double>{1.0, 1.0, 1.0, 1.0}, none, 2, 1.0));

    // tau * sum of every estimate stays below the demand.
    CHECK_FALSE(exact_ilp_feasible(std::vector<double>{1.0, 1.0, 1.0}, std::vector<double>{3.5}, 3, 1.0));
    CHECK(exact_ilp_feasible(std::vector<double>{1.0, 1.0, 1.0}, std::vector<double>{3.0}, 3, 1.0));

    // Two UAs that both need both RBs.
    CHECK_FALSE(exact_ilp_feasible(std::vector<double>{1.0, 1.0, 1.0, 1.0}, std::vector<double>{2.0, 2.0}, 2, 1.0));

    OracleBudget budget;
    budget.max_uas = 2;
    budget.max_rbs = 12;
    const std::vector<double> r(24, 1.0);
    CHECK(exact_ilp_feasible(r, std::vector<double>{6.0, 6.0}, 12, 1.0, budget));
    CHECK_THROWS_AS(exact_ilp_feasible(std::vector<double>(26, 1.0), std::vector<double>{1.0, 1.0}, 13, 1.0, budget),
                    BudgetError);
}

} // TEST_SUITE
