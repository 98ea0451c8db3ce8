#include <doctest.h>

#include <cmath>

#include "epinet/error.hpp"
#include "epinet/interventions.hpp"
#include "epinet/network.hpp"
#include "epinet/trajectory_stats.hpp"

using namespace epinet;

namespace {

AgentPopulation seeded(std::size_t n, double gamma, std::vector<AgentId> infected,
                       std::optional<double> mu = std::nullopt)
{
    auto pop = AgentPopulation::homogeneous(n, gamma, mu);
    for (AgentId a : infected)
        pop.states[a] = AgentState::Infected;
    return pop;
}

Communities halves(std::size_t n)
{
    Communities c(2);
    for (AgentId a = 0; a < n; ++a)
        c[a < n / 2 ? 0 : 1].push_back(a);
    return c;
}

double degree_of(const TransmissionMatrix &t)
{
    double entries = 0.0;
    for (const auto &e : t.entries())
        entries += e.rate > 0.0;
    return entries / static_cast<double>(t.size());
}

/// Records every matrix handed to it and never changes state.
class RecordingProcess final : public EpidemicProcess {
public:
    explicit RecordingProcess(std::size_t n) : n_(n) {}
    std::size_t population() const override { return n_; }
    CompartmentState counts() const override { return {static_cast<double>(n_), 0, 0, 0}; }
    void set_transmission(std::shared_ptr<const TransmissionMatrix> m) override { seen.push_back(*m); }
    void advance(double, double) override {}
    double vaccinate(double, std::uint64_t) override { return 0.0; }

    std::vector<TransmissionMatrix> seen;

private:
    std::size_t n_;
};

} // namespace

TEST_CASE("density reduction")
{
    const auto t = transmission_from_network(complete_network(30), 0.1);
    CHECK(apply_density_reduction(t, 0.0, 1) == t);

    const auto none = apply_density_reduction(t, 1.0, 1);
    for (AgentId a = 0; a < 30; ++a)
        for (AgentId b = 0; b < 30; ++b)
            CHECK(none.rate(a, b) == (a == b ? 0.1 : 0.0));

    // Uniform removal of half the pairs halves the degree in expectation.
    const auto er = transmission_from_network(erdos_renyi(1000, 0.01, 4), 1.0);
    double ratio = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed)
        ratio += degree_of(apply_density_reduction(er, 0.5, seed)) / degree_of(er) / 20.0;
    CHECK(ratio == doctest::Approx(0.5).epsilon(0.01));

    CHECK(apply_density_reduction(er, 0.3, 5) == apply_density_reduction(er, 0.3, 5));
    CHECK_THROWS_AS(apply_density_reduction(er, 1.2, 5), DomainError);
}

TEST_CASE("compartmentalization")
{
    const auto t = transmission_from_network(complete_network(10), 1.0);
    CHECK(apply_compartmentalization(t, {{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}}, 1.0, 1) == t);

    const auto cut = apply_compartmentalization(t, halves(10), 1.0, 1);
    for (AgentId a = 0; a < 10; ++a)
        for (AgentId b = 0; b < 10; ++b)
            CHECK(cut.rate(a, b) == ((a < 5) == (b < 5) ? 1.0 : 0.0));
    // Five neighbours within each half, the agent itself included.
    CHECK(degree_of(cut) == 5.0);

    const auto partial = apply_compartmentalization(t, halves(10), 0.4, 2);
    CHECK(degree_of(partial) == doctest::Approx((100.0 - 2 * 10) / 10.0));

    CHECK_THROWS_AS(apply_compartmentalization(t, {{0, 1, 2}, {3, 4}}, 1.0, 1), DomainError);
    CHECK_THROWS_AS(apply_compartmentalization(t, {{0, 1, 2, 3, 4, 5}, {5, 6, 7, 8, 9}}, 1.0, 1), DomainError);
    CHECK_THROWS_AS(community_labels({{0, 12}}, 10), DomainError);
}

TEST_CASE("vaccination")
{
    const auto pop = seeded(100, 0.1, {0, 1});
    CHECK(apply_vaccination(pop, 0.0, 3).states == pop.states);
    const auto all = apply_vaccination(pop, 1.0, 3).counts();
    CHECK(all.s == 0);
    CHECK(all.i == 2);
    CHECK(all.r == 98);
    CHECK(apply_vaccination(pop, 0.5, 3).counts().r == 49);

    auto p = ProbabilityState::all_susceptible(4);
    const auto q = apply_vaccination(p, 0.25);
    CHECK(q.s.isApprox(Eigen::VectorXd::Constant(4, 0.75)));
    CHECK(q.r.isApprox(Eigen::VectorXd::Constant(4, 0.25)));
    CHECK_THROWS_AS(apply_vaccination(p, -0.1), DomainError);

    // Full coverage before seeding: the outbreak cannot grow.
    const auto t = transmission_from_network(complete_network(100), 0.05);
    const InterventionSchedule full({{Vaccinate{1.0}, 0.0, {}, {}, {}}}, 100);
    const auto traj = run_scheduled_abm(pop, t, full, 0.1, 50.0, 4);
    CHECK(traj.meta.vaccinated == 98.0);
    for (const auto &s : traj.states())
        CHECK(s.i <= 2.0);
}

TEST_CASE("schedule validation lists every problem")
{
    const std::vector<Intervention> bad{
        {DensityReduction{1.5}, 0.0, {}, {}, {}},
        {Vaccinate{0.5}, 1.0, 5.0, {}, {}},
        {TransmissionScale{-1.0}, 3.0, 2.0, {}, {}},
        {Compartmentalize{{{0, 1}}, 1.0}, 0.0, {}, {}, {}},
        {DensityReduction{0.5}, 0.0, 4.0, {}, 3.0},
    };
    try {
        InterventionSchedule schedule(bad, 4);
        FAIL("expected a validation error");
    } catch (const ValidationError &err) {
        CHECK(err.problems().size() >= 6);
    }

    const InterventionSchedule ok({{TransmissionScale{0.5}, 5.0, {}, {}, {}}, {DensityReduction{0.2}, 1.0, 3.0, {}, {}}},
                                  4);
    CHECK(ok.entries().front().activation == 1.0);
}

TEST_CASE("empty schedule matches the plain run")
{
    const auto t = transmission_from_network(complete_network(80), 0.005);
    const auto pop = seeded(80, 0.1, {0, 1, 2});
    const auto plain = simulate_abm(pop, t, 0.1, 60.0, 77);
    const auto scheduled = run_scheduled_abm(pop, t, InterventionSchedule{}, 0.1, 60.0, 77);
    CHECK(plain.times() == scheduled.times());
    CHECK(plain.states() == scheduled.states());
}

TEST_CASE("zero transmission scale stops all infection")
{
    const auto t = transmission_from_network(complete_network(80), 0.05);
    const InterventionSchedule stop({{TransmissionScale{0.0}, 0.0, {}, {}, {}}}, 80);
    const auto traj = run_scheduled_abm(seeded(80, 0.1, {0}), t, stop, 0.1, 60.0, 1);
    for (const auto &s : traj.states())
        CHECK(s.s == 79.0);
}

TEST_CASE("reverting restores the exact matrix")
{
    const std::size_t n = 40;
    const auto base = transmission_from_network(erdos_renyi(n, 0.3, 2), 0.37);
    const InterventionSchedule schedule(
        {{DensityReduction{0.4}, 1.0, 3.0, {}, {}},
         {Compartmentalize{halves(n), 0.7}, 2.0, 4.0, {}, {}},
         {TransmissionScale{0.3}, 1.5, {}, {}, 2.0}},
        n);
    RecordingProcess probe(n);
    const auto traj = run_scheduled(probe, base, schedule, 0.5, 6.0, 99);
    REQUIRE(probe.seen.size() >= 4);
    CHECK(probe.seen.front() == base);
    CHECK(probe.seen.back() == base);
    CHECK_FALSE(probe.seen[2] == base);

    std::size_t activations = 0, deactivations = 0;
    for (const auto &e : traj.meta.interventions) {
        activations += e.action == "activate";
        deactivations += e.action == "deactivate";
    }
    CHECK(activations == 3);
    CHECK(deactivations == 3);
}

TEST_CASE("triggered lockdown produces a second wave")
{
    const std::size_t n = 1000;
    const auto t = transmission_from_network(complete_network(n), 3e-4);
    const InterventionSchedule lockdown({{DensityReduction{0.6}, 0.0, {}, 0.05, 30.0}}, n);
    const auto traj = run_scheduled_meanfield(uniform_probability_state({990, 10, 0, 0}, n), t,
                                              Eigen::VectorXd::Constant(n, 0.1), lockdown, 0.1, 300.0);
    const auto infected = infected_series(traj);
    const auto maxima = local_maxima(infected);
    REQUIRE(maxima.size() >= 2);
    CHECK(traj.times()[maxima[1]] - traj.times()[maxima[0]] >= 10.0);

    // The trigger fires at the first boundary above 5% infected.
    REQUIRE(traj.meta.interventions.size() == 2);
    const double fired = traj.meta.interventions.front().time;
    for (std::size_t k = 0; traj.times()[k] < fired; ++k)
        CHECK(infected[k] <= 50.0);
    CHECK(traj.meta.interventions.back().time == doctest::Approx(fired + 30.0));
}

TEST_CASE("stronger lockdowns do not enlarge outbreaks")
{
    const std::size_t n = 150;
    const auto t = transmission_from_network(complete_network(n), 0.003);
    const auto pop = seeded(n, 0.1, {0});
    auto mean_final = [&](double fraction) {
        const InterventionSchedule s({{DensityReduction{fraction}, 0.0, {}, {}, {}}}, n);
        const auto ens = monte_carlo_scheduled(pop, t, s, 0.2, 150.0, 100, 8);
        double sum = 0.0;
        for (double f : ens.replica_final_sizes)
            sum += f;
        return sum / 100.0;
    };
    const double light = mean_final(0.2);
    const double heavy = mean_final(0.6);
    CHECK(heavy <= light);
}

TEST_CASE("compartmentalized outbreaks stay in their community")
{
    const std::size_t n = 60;
    const auto t = transmission_from_network(complete_network(n), 0.02);
    const InterventionSchedule wall({{Compartmentalize{halves(n), 1.0}, 0.0, {}, {}, {}}}, n);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        std::shared_ptr<const TransmissionMatrix> view(std::shared_ptr<const TransmissionMatrix>(), &t);
        AbmProcess process(seeded(n, 0.1, {0}), view, seed);
        run_scheduled(process, t, wall, 0.2, 100.0, seed);
        for (AgentId a = 30; a < n; ++a)
            REQUIRE(process.agents().states[a] == AgentState::Susceptible);
    }
}

TEST_CASE("healthcare capacity raises deaths")
{
    const std::size_t n = 400;
    const auto t = transmission_from_network(complete_network(n), 0.002);
    const auto pop = seeded(n, 0.1, {0, 1, 2, 3, 4}, 0.01);
    auto deaths = [&](std::optional<HealthcareCapacity> cap) {
        RunHooks hooks;
        hooks.capacity = cap;
        double total = 0.0;
        for (std::uint64_t seed = 0; seed < 30; ++seed)
            total += run_scheduled_abm(pop, t, InterventionSchedule{}, 0.1, 150.0, seed, hooks).back().d;
        return total;
    };
    CHECK(deaths(HealthcareCapacity{20.0, 4.0}) > deaths(std::nullopt));
}
