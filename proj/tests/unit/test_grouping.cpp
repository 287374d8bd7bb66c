#include "dualband/grouping.hpp"
#include "dualband/oracle/exact.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace dualband;

namespace {

std::vector<ProxyEntry> entries(std::initializer_list<double> proxies)
{
    std::vector<ProxyEntry> out;
    for (double p : proxies) out.push_back({out.size(), p});
    return out;
}

std::vector<std::size_t> ids(std::size_t n)
{
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), std::size_t{0});
    return v;
}

} // namespace

TEST_SUITE("grouping") {

TEST_CASE("proxy depends only on distance, increasingly")
{
    const ScenarioConfig cfg;
    UserApp a;
    a.demand_bits = cfg.bits_required;
    a.distance_m = 50.0;
    UserApp b = a;
    b.ua_id = 7;
    CHECK(proxy_power(a, cfg) == proxy_power(b, cfg));
    double prev = 0.0;
    for (double d : {5.0, 20.0, 50.0, 120.0, 200.0}) {
        a.distance_m = d;
        const double p = proxy_power(a, cfg);
        CHECK(p > prev);
        prev = p;
    }
}

TEST_CASE("traced greedy grouping")
{
    const auto ga = group_users(entries({4, 3, 2, 1}), 2, 1.0, 1.0);
    REQUIRE(ga.groups.size() == 2);
    CHECK(ga.groups[0].members == std::vector<std::size_t>{0, 3});
    CHECK(ga.groups[1].members == std::vector<std::size_t>{1, 2});
    CHECK(ga.groups[0].power == 5.0);
    CHECK(ga.groups[1].power == 5.0);
    CHECK(grouping_objective(ga) == 0.0);
}

TEST_CASE("seeding and tie rule")
{
    const auto seeded = group_users(entries({1, 9, 5}), 3, 1.0, 1.0);
    CHECK(seeded.groups[0].members == std::vector<std::size_t>{1});
    CHECK(seeded.groups[1].members == std::vector<std::size_t>{2});
    CHECK(seeded.groups[2].members == std::vector<std::size_t>{0});

    const auto flat = group_users(entries({4, 3, 2, 1, 1}), 2, 0.0, 0.0);
    CHECK(flat.groups[0].members.size() == 4);
    CHECK(flat.groups[1].members.size() == 1);

    const auto under = group_users(entries({1}), 3, 1.0, 1.0);
    CHECK(under.underfilled);
    CHECK(std::isinf(grouping_objective(under)));
}

TEST_CASE("grouping objective")
{
    const std::vector<std::size_t> c1{1, 2};
    const std::vector<double> p1{3, 3};
    CHECK(grouping_objective(c1, p1) == doctest::Approx(0.5));
    const std::vector<std::size_t> c2{2, 2};
    const std::vector<double> p2{5, 5};
    CHECK(grouping_objective(c2, p2) == 0.0);
    const std::vector<std::size_t> c3{2, 0};
    const std::vector<double> p3{5, 0};
    CHECK(std::isinf(grouping_objective(c3, p3)));
}

TEST_CASE("every grouping method yields a partition")
{
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> p(1e-7, 1e-3);
    std::uniform_int_distribution<std::size_t> n_pick(1, 40);
    std::uniform_int_distribution<std::size_t> t_pick(1, 5);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = n_pick(rng);
        const std::size_t t = t_pick(rng);
        std::vector<ProxyEntry> uas;
        for (std::size_t i = 0; i < n; ++i) uas.push_back({i, p(rng)});
        const auto members = ids(n);
        const auto gb = group_users(uas, t, 1.0, 1.0);
        const auto cyc = cyclic_grouping(uas, t);
        const auto rnd = random_grouping(uas, t, rng);
        for (const auto* ga : {&gb, &cyc, &rnd}) {
            CHECK(is_partition(*ga, members));
            CHECK(ga->size() == n);
            if (n >= t) {
                for (const auto& g : ga->groups) CHECK_FALSE(g.members.empty());
            }
        }
    }
}

TEST_CASE("permutation of equal proxies leaves the objective unchanged")
{
    const std::vector<ProxyEntry> a{{0, 2.0}, {1, 2.0}, {2, 1.0}, {3, 1.0}, {4, 3.0}};
    const std::vector<ProxyEntry> b{{3, 1.0}, {0, 2.0}, {4, 3.0}, {2, 1.0}, {1, 2.0}};
    CHECK(grouping_objective(group_users(a, 2, 1.0, 1.0)) == grouping_objective(group_users(b, 2, 1.0, 1.0)));
}

TEST_CASE("greedy grouping beats random partitions on average")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> p(1e-7, 1e-4);
    std::vector<double> diff;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<ProxyEntry> uas;
        for (std::size_t i = 0; i < 30; ++i) uas.push_back({i, p(rng)});
        diff.push_back(grouping_objective(random_grouping(uas, 3, rng)) -
                       grouping_objective(group_users(uas, 3, 1.0, 1.0)));
    }
    const double mean = std::accumulate(diff.begin(), diff.end(), 0.0) / 200.0;
    double ss = 0.0;
    for (double d : diff) ss += (d - mean) * (d - mean);
    const double se = std::sqrt(ss / 199.0) / std::sqrt(200.0);
    CHECK(mean / se > 1.645);
}

TEST_CASE("greedy against exhaustive grouping on small classes")
{
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> p(1e-7, 1e-4);
    std::uniform_int_distribution<std::size_t> n_pick(3, 9);
    std::uniform_int_distribution<std::size_t> t_pick(2, 3);
    double worst = 0.0;
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = n_pick(rng);
        const std::size_t t = t_pick(rng);
        std::vector<ProxyEntry> uas;
        for (std::size_t i = 0; i < n; ++i) uas.push_back({i, p(rng)});
        const double gb = grouping_objective(group_users(uas, t, 1.0, 1.0));
        const auto exact = oracle::exact_grouping(uas, t);
        CHECK(exact.objective <= gb + 1e-12);
        worst = std::max(worst, gb - exact.objective);
    }
    MESSAGE("largest greedy-minus-exact objective gap: " << worst);
}

} // TEST_SUITE
