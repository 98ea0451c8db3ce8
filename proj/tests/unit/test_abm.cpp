#include <doctest.h>

#include <cmath>

#include "epinet/abm.hpp"
#include "epinet/error.hpp"
#include "epinet/network.hpp"

using namespace epinet;

namespace {

AgentPopulation seeded(std::size_t n, double gamma, std::size_t infected,
                       std::optional<double> mu = std::nullopt)
{
    auto pop = AgentPopulation::homogeneous(n, gamma, mu);
    for (std::size_t a = 0; a < infected; ++a)
        pop.states[a] = AgentState::Infected;
    return pop;
}

double mean_final(const EnsembleResult &ens)
{
    double sum = 0.0;
    for (double f : ens.replica_final_sizes)
        sum += f;
    return sum / static_cast<double>(ens.replica_final_sizes.size());
}

} // namespace

TEST_CASE("step without infected agents changes nothing")
{
    const auto pop = seeded(20, 0.1, 0);
    const auto t = transmission_from_network(complete_network(20), 1.0);
    Rng rng(3);
    const Rng before = rng;
    const auto next = abm_step(pop, t, 0.5, rng);
    CHECK(next.states == pop.states);
    CHECK(rng == before);
}

TEST_CASE("zero transmission only allows recovery")
{
    const auto pop = seeded(50, 0.5, 25);
    const auto t = TransmissionMatrix::zero(50);
    Rng rng(9);
    auto cur = pop;
    for (int k = 0; k < 20; ++k)
        cur = abm_step(cur, t, 0.5, rng);
    const auto c = cur.counts();
    CHECK(c.s == 25);
    CHECK(c.i + c.r == 25);
    CHECK(c.r > 0);
}

TEST_CASE("infection probability of a single exposed agent")
{
    // Agent 1 is exposed to agent 0 at rate 0.5; gamma = 0 keeps 0 infected.
    const auto t = TransmissionMatrix::from_entries(2, {{0, 1, 0.5}});
    auto pop = seeded(2, 0.0, 1);
    Rng rng(77);
    const int draws = 100000;
    int hits = 0;
    for (int k = 0; k < draws; ++k)
        hits += abm_step(pop, t, 0.1, rng).states[1] == AgentState::Infected;
    const double p = -std::expm1(-0.05);
    const double sigma = std::sqrt(p * (1 - p) / draws);
    CHECK(std::abs(static_cast<double>(hits) / draws - p) <= 3.0 * sigma);
}

TEST_CASE("dimension mismatch")
{
    Rng rng(1);
    CHECK_THROWS_AS(abm_step(seeded(3, 0.1, 1), TransmissionMatrix::zero(4), 0.1, rng), DimensionError);
    CHECK_THROWS_AS(abm_step(seeded(3, 0.1, 1), TransmissionMatrix::zero(3), 0.0, rng), DomainError);
}

TEST_CASE("simulate_abm")
{
    const auto t = transmission_from_network(complete_network(100), 0.004);
    const auto flat = simulate_abm(seeded(100, 0.1, 0), t, 0.1, 20.0, 5);
    for (const auto &s : flat.states())
        CHECK(s == CompartmentState{100, 0, 0, 0});

    const auto everyone = simulate_abm(seeded(100, 0.0, 1), transmission_from_network(complete_network(100), 1.0),
                                       0.1, 10.0, 5);
    CHECK(everyone.back() == CompartmentState{0, 100, 0, 0});

    const auto a = simulate_abm(seeded(100, 0.1, 2), t, 0.1, 80.0, 11);
    const auto b = simulate_abm(seeded(100, 0.1, 2), t, 0.1, 80.0, 11);
    CHECK(a.states() == b.states());
    CHECK(a.meta.seed == 11u);
    for (const auto &s : a.states()) {
        CHECK(s.total() == 100.0);
        CHECK(std::floor(s.i) == s.i);
    }
}

TEST_CASE("deaths take their share of exits")
{
    // gamma = mu: half of all exits should be deaths.
    auto pop = seeded(4000, 0.1, 4000, 0.1);
    const auto traj = simulate_abm(pop, TransmissionMatrix::zero(4000), 0.1, 200.0, 21);
    const double d = traj.back().d, r = traj.back().r;
    CHECK(d + r == 4000.0);
    // Binomial(4000, 1/2) standard deviation is about 32.
    CHECK(std::abs(d - 2000.0) < 130.0);
}

TEST_CASE("ensembles")
{
    const auto t = transmission_from_network(complete_network(60), 0.01);
    const auto pop = seeded(60, 0.1, 1);

    const auto single = monte_carlo(pop, t, 0.1, 50.0, 1, 8);
    const auto direct = simulate_abm(pop, t, 0.1, 50.0, derive_seed(8, 0));
    CHECK(single.mean_trajectory().states() == direct.states());
    CHECK(single.seeds.front() == derive_seed(8, 0));

    const auto idle = monte_carlo(seeded(60, 0.1, 0), t, 0.1, 10.0, 20, 8);
    for (double f : idle.replica_final_sizes)
        CHECK(f == 0.0);

    const auto serial = monte_carlo(pop, t, 0.1, 50.0, 40, 123, 1);
    const auto parallel = monte_carlo(pop, t, 0.1, 50.0, 40, 123, 4);
    CHECK(serial.mean == parallel.mean);
    CHECK(serial.replica_final_sizes == parallel.replica_final_sizes);
    CHECK(serial.population == 60);
}

TEST_CASE("larger transmission does not shrink outbreaks")
{
    const auto pop = seeded(200, 0.1, 1);
    const auto net = complete_network(200);
    const double low = mean_final(monte_carlo(pop, transmission_from_network(net, 0.0006), 0.2, 200.0, 150, 4));
    const double high = mean_final(monte_carlo(pop, transmission_from_network(net, 0.0012), 0.2, 200.0, 150, 4));
    CHECK(high >= low);
}

TEST_CASE("outbreak statistics")
{
    EnsembleResult same;
    same.population = 10;
    same.replica_final_sizes = {4, 4, 4, 4};
    const auto flat = outbreak_size_distribution(same);
    CHECK(flat.skewness == 0.0);
    CHECK(flat.max == flat.mean);
    CHECK(flat.histogram[4] == 4);

    EnsembleResult one;
    one.population = 10;
    one.replica_final_sizes = {3};
    CHECK_FALSE(outbreak_size_distribution(one).skewness.has_value());
    const std::vector<double> lonely{1.0};
    CHECK_THROWS_AS(sample_skewness(lonely), DomainError);

    const std::vector<double> skewed{0, 0, 0, 1, 10};
    CHECK(sample_skewness(skewed) > 0.0);
}

TEST_CASE("subcritical outbreaks stay small")
{
    const std::size_t n = 1000;
    const auto ens = monte_carlo(seeded(n, 0.1, 1), transmission_from_network(complete_network(n), 0.05 / n), 0.2,
                                 200.0, 2000, 17);
    const auto stats = outbreak_size_distribution(ens);
    CHECK(*stats.skewness > 0.0);
    CHECK(stats.major_fraction < 0.01);
    CHECK(stats.major_threshold == 100.0);
}
