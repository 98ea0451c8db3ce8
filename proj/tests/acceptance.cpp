// Acceptance suite: one line per criterion, exit status 1 if any fails.
//
// Reference values come from oracles written here, independently of the
// library: a hand-rolled RK4 for the homogeneous SIR system, an exact
// dynamic program over the discrete-time agent chain for N = 3, closed-form
// growth rates, and a direct 2x2 solve for the Leontief example.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "epinet/abm.hpp"
#include "epinet/compartmental.hpp"
#include "epinet/csv.hpp"
#include "epinet/econ.hpp"
#include "epinet/interventions.hpp"
#include "epinet/meanfield.hpp"
#include "epinet/network.hpp"
#include "epinet/random.hpp"
#include "epinet/runner.hpp"
#include "epinet/scenario.hpp"
#include "epinet/trajectory_stats.hpp"

using namespace epinet;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char *format, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

const std::filesystem::path kScenarioDir = EPINET_SCENARIO_DIR;

// Homogeneous SIR by RK4, written out by hand as an oracle.
std::vector<std::array<double, 3>> sir_oracle(double beta, double gamma, std::array<double, 3> x, double dt,
                                              std::size_t steps)
{
    auto f = [&](const std::array<double, 3> &y) {
        const double inf = beta * y[0] * y[1];
        const double rec = gamma * y[1];
        return std::array<double, 3>{-inf, inf - rec, rec};
    };
    std::vector<std::array<double, 3>> out{x};
    for (std::size_t k = 0; k < steps; ++k) {
        const auto k1 = f(x);
        std::array<double, 3> y;
        for (int c = 0; c < 3; ++c) y[c] = x[c] + 0.5 * dt * k1[c];
        const auto k2 = f(y);
        for (int c = 0; c < 3; ++c) y[c] = x[c] + 0.5 * dt * k2[c];
        const auto k3 = f(y);
        for (int c = 0; c < 3; ++c) y[c] = x[c] + dt * k3[c];
        const auto k4 = f(y);
        for (int c = 0; c < 3; ++c) x[c] += dt / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        out.push_back(x);
    }
    return out;
}

// 1. Mean-field on the complete network reproduces the compartmental model.
Outcome reduction()
{
    const std::size_t n = 1000;
    const double beta = 3e-4, gamma = 0.1, dt = 0.1, t_end = 200.0;
    const auto start = Clock::now();
    const auto t_matrix = transmission_from_network(complete_network(n), beta);
    const auto p0 = uniform_probability_state({990.0, 10.0, 0.0, 0.0}, n);
    const auto mf = integrate_meanfield(p0, t_matrix, Eigen::VectorXd::Constant(n, gamma), dt, t_end).aggregate();
    const double runtime = seconds_since(start);
    const auto ode = simulate_compartmental(CompartmentalKind::SIR, {beta, gamma, {}, {}}, {990.0, 10.0, 0.0, 0.0},
                                            t_end, dt);
    const auto oracle = sir_oracle(beta, gamma, {990.0, 10.0, 0.0}, dt, 2000);

    double dev = 0.0, oracle_dev = 0.0;
    bool same_grid = mf.size() == ode.size() && ode.size() == oracle.size();
    for (std::size_t k = 0; same_grid && k < ode.size(); ++k) {
        const auto &a = mf.states()[k];
        const auto &b = ode.states()[k];
        dev = std::max({dev, std::abs(a.s - b.s), std::abs(a.i - b.i), std::abs(a.r - b.r)});
        oracle_dev = std::max({oracle_dev, std::abs(b.s - oracle[k][0]), std::abs(b.i - oracle[k][1]),
                               std::abs(b.r - oracle[k][2])});
    }
    return {same_grid && dev <= 1e-8 && oracle_dev <= 1e-8 && runtime < 10.0,
            fmt("max |meanfield - SIR| = %.3g, SIR vs hand RK4 = %.3g, runtime %.2f s", dev, oracle_dev, runtime)};
}

// 2. Aggregate parameters of a homogeneous complete network are exact.
Outcome equivalent_params()
{
    std::mt19937_64 gen(20240611);
    std::uniform_real_distribution<double> beta_dist(1e-6, 1e-2), gamma_dist(0.01, 1.0);
    std::uniform_int_distribution<std::size_t> n_dist(2, 400);
    std::size_t exact = 0;
    for (int trial = 0; trial < 10; ++trial) {
        const double beta = beta_dist(gen), gamma = gamma_dist(gen);
        const std::size_t n = n_dist(gen);
        const auto eq = aggregate_equivalent_params(transmission_from_network(complete_network(n), beta),
                                                    Eigen::VectorXd::Constant(n, gamma), n);
        exact += eq.beta_eff == beta && eq.gamma_eff == gamma && eq.r0() == beta / gamma;
    }
    return {exact == 10, fmt("%zu/10 triples returned (beta, gamma, beta/gamma) exactly", exact)};
}

// 3. ABM ensemble mean converges to the ODE as N grows.
Outcome abm_convergence()
{
    const double gamma = 0.1, dt = 0.1, t_end = 120.0;
    const auto start = Clock::now();
    auto discrepancy = [&](std::size_t n) {
        const double beta = 3.0 * gamma / static_cast<double>(n);
        const auto i0 = static_cast<std::size_t>(std::llround(0.02 * static_cast<double>(n)));
        auto pop = AgentPopulation::homogeneous(n, gamma);
        for (std::size_t a = 0; a < i0; ++a)
            pop.states[a] = AgentState::Infected;
        const auto t_matrix = transmission_from_network(complete_network(n), beta);
        const auto ens = monte_carlo(pop, t_matrix, dt, t_end, 500, 1000 + n);
        const double abm_peak = trajectory_stats(ens.mean_trajectory()).peak_infected;
        const double nn = static_cast<double>(n), ii = static_cast<double>(i0);
        const auto ode = sir_oracle(beta, gamma, {nn - ii, ii, 0.0}, dt, static_cast<std::size_t>(t_end / dt));
        double ode_peak = 0.0;
        for (const auto &x : ode)
            ode_peak = std::max(ode_peak, x[1]);
        return std::abs(abm_peak - ode_peak) / ode_peak;
    };
    const double d100 = discrepancy(100);
    const double d1000 = discrepancy(1000);
    const double runtime = seconds_since(start);
    return {d1000 <= 0.05 && d1000 < d100 && runtime < 300.0,
            fmt("relative peak error N=100: %.4f, N=1000: %.4f, runtime %.1f s", d100, d1000, runtime)};
}

// 4. N = 3 final sizes against exact enumeration of the discrete-time chain.
Outcome small_instance()
{
    const double beta = 0.3, gamma = 0.1, dt = 0.5, t_end = 600.0;
    const std::size_t replicas = 100000;
    const double p_rec = -std::expm1(-gamma * dt);

    // prob[s][i]: probability mass over (susceptible, infected) counts.
    std::array<std::array<double, 4>, 4> prob{};
    prob[2][1] = 1.0;
    std::array<double, 4> absorbed{}; // by final susceptible count
    auto binom = [](int n, int k, double p) {
        double c = 1.0;
        for (int j = 0; j < k; ++j)
            c = c * (n - j) / (j + 1);
        return c * std::pow(p, k) * std::pow(1.0 - p, n - k);
    };
    const auto steps = static_cast<std::size_t>(t_end / dt);
    for (std::size_t step = 0; step < steps; ++step) {
        std::array<std::array<double, 4>, 4> next{};
        for (int s = 0; s <= 3; ++s) {
            for (int i = 1; s + i <= 3; ++i) {
                const double mass = prob[s][i];
                if (mass == 0.0)
                    continue;
                const double p_inf = -std::expm1(-beta * i * dt);
                for (int new_inf = 0; new_inf <= s; ++new_inf)
                    for (int rec = 0; rec <= i; ++rec)
                        next[s - new_inf][i - rec + new_inf] +=
                            mass * binom(s, new_inf, p_inf) * binom(i, rec, p_rec);
            }
        }
        for (int s = 0; s <= 3; ++s) {
            absorbed[s] += next[s][0];
            next[s][0] = 0.0;
        }
        prob = next;
    }
    double unabsorbed = 0.0;
    for (const auto &row : prob)
        for (double m : row)
            unabsorbed += m;
    // Final size k = 3 - s; absorbed[s] for s = 2, 1, 0 gives sizes 1, 2, 3.
    const std::array<double, 3> expected{absorbed[2], absorbed[1], absorbed[0]};

    const auto start = Clock::now();
    auto pop = AgentPopulation::homogeneous(3, gamma);
    pop.states[0] = AgentState::Infected;
    const auto ens = monte_carlo(pop, transmission_from_network(complete_network(3), beta), dt, t_end, replicas, 4242);
    const double runtime = seconds_since(start);

    std::array<double, 3> observed{};
    bool in_range = true;
    for (double f : ens.replica_final_sizes) {
        const auto k = static_cast<int>(f);
        if (k < 1 || k > 3)
            in_range = false;
        else
            observed[k - 1] += 1.0;
    }
    double chi2 = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double e = expected[k] * replicas;
        chi2 += (observed[k] - e) * (observed[k] - e) / e;
    }
    const double p_value = std::exp(-chi2 / 2.0); // chi-square survival function, 2 degrees of freedom
    return {in_range && unabsorbed < 1e-12 && p_value > 0.01 && runtime < 60.0,
            fmt("expected (%.4f, %.4f, %.4f), unabsorbed mass %.1e, chi2 = %.3f, p = %.3f, runtime %.1f s",
                expected[0], expected[1], expected[2], unabsorbed, chi2, p_value, runtime)};
}

// 5. Below threshold I never grows; above it I grows at first.
Outcome threshold()
{
    const double n = 1000.0, gamma = 0.1;
    const CompartmentState init{n - 10.0, 10.0, 0.0, 0.0};
    const auto sub = infected_series(
        simulate_compartmental(CompartmentalKind::SIR, {0.5 * gamma / n, gamma, {}, {}}, init, 100.0, 0.1));
    const auto super = infected_series(
        simulate_compartmental(CompartmentalKind::SIR, {3.0 * gamma / n, gamma, {}, {}}, init, 100.0, 0.1));
    bool non_increasing = true, increasing = true;
    for (std::size_t k = 0; k + 1 < sub.size(); ++k)
        non_increasing = non_increasing && sub[k + 1] <= sub[k];
    for (std::size_t k = 0; k < 10; ++k)
        increasing = increasing && super[k + 1] > super[k];
    return {non_increasing && increasing,
            fmt("R0=0.5 non-increasing: %s, R0=3 increasing over first 10 steps: %s", non_increasing ? "yes" : "no",
                increasing ? "yes" : "no")};
}

// 6. Doubling time of 2 days for an early growth rate of 0.3465 per day.
Outcome doubling()
{
    const double n = 10000.0, gamma = 0.1, beta = (0.3465 + gamma) / n;
    const auto traj = simulate_compartmental(CompartmentalKind::SIR, {beta, gamma, {}, {}},
                                             {n - 1.0, 1.0, 0.0, 0.0}, 60.0, 0.1);
    const auto g = doubling_time(traj, 0.0, 10.0);
    const double measured = g.doubling_time.value_or(INFINITY);
    const double oracle = std::log(2.0) / 0.3465;
    return {std::abs(measured - 2.0) <= 0.05 * 2.0,
            fmt("measured %.4f days, ln2/0.3465 = %.4f", measured, oracle)};
}

// 7. Every model kind conserves the population.
Outcome conservation()
{
    std::mt19937_64 gen(777);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    std::size_t checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 20 + static_cast<std::size_t>(u(gen) * 180);
        const double nn = static_cast<double>(n);
        const double gamma = 0.05 + 0.3 * u(gen);
        const double r0 = 0.5 + 4.0 * u(gen);
        const std::uint64_t seed = gen();
        std::vector<Trajectory> runs;
        switch (trial % 5) {
        case 0: { // compartmental, all three variants
            const auto kind = std::array{CompartmentalKind::SIR, CompartmentalKind::SIRD,
                                         CompartmentalKind::SIRS}[trial / 5 % 3];
            EpidemicParams p{r0 * gamma / nn, gamma, {}, {}};
            if (kind == CompartmentalKind::SIRD)
                p.mu = 0.02 * u(gen);
            if (kind == CompartmentalKind::SIRS)
                p.xi = 0.05 * u(gen);
            const double i0 = 1.0 + std::floor(0.1 * nn * u(gen));
            runs.push_back(simulate_compartmental(kind, p, {nn - i0, i0, 0.0, 0.0}, 80.0, 0.1));
            break;
        }
        case 1:
        case 2: { // ABM on a random graph, with and without deaths, with interventions
            const auto net = trial % 2 ? erdos_renyi(n, 0.1, seed) : barabasi_albert(n, 2, seed);
            const double beta = r0 * gamma / std::max(1.0, average_degree(net));
            auto pop = AgentPopulation::homogeneous(n, gamma, trial % 2 ? std::optional(0.01) : std::nullopt);
            pop.states[0] = AgentState::Infected;
            pop.states[1] = AgentState::Infected;
            const InterventionSchedule sched({{DensityReduction{0.5 * u(gen)}, 10.0, 30.0, {}, {}},
                                              {Vaccinate{0.3 * u(gen)}, 5.0, {}, {}, {}}},
                                             n);
            RunHooks hooks;
            if (pop.mu.size())
                hooks.capacity = HealthcareCapacity{0.05 * nn, 2.0};
            runs.push_back(
                run_scheduled_abm(pop, transmission_from_network(net, beta), sched, 0.1, 80.0, seed, hooks));
            break;
        }
        case 3: { // mean-field on a small-world graph, with a triggered lockdown
            const auto net = watts_strogatz(n, 4, 0.2, seed);
            const double beta = r0 * gamma / average_degree(net);
            const InterventionSchedule sched({{DensityReduction{0.5}, 0.0, {}, 0.02, 20.0}}, n);
            auto p0 = ProbabilityState::all_susceptible(n);
            p0.s[0] = 0.0;
            p0.i[0] = 1.0;
            runs.push_back(run_scheduled_meanfield(p0, transmission_from_network(net, beta),
                                                   Eigen::VectorXd::Constant(n, gamma), sched, 0.1, 80.0, seed));
            break;
        }
        default: { // ABM ensemble mean
            auto pop = AgentPopulation::homogeneous(n, gamma);
            pop.states[0] = AgentState::Infected;
            const auto t = transmission_from_network(complete_network(n), r0 * gamma / nn);
            runs.push_back(monte_carlo(pop, t, 0.2, 60.0, 5, seed).mean_trajectory());
            break;
        }
        }
        for (const auto &traj : runs) {
            for (const auto &s : traj.states())
                worst = std::max(worst, std::abs(s.total() - nn) / nn);
            ++checked;
        }
    }
    return {checked == 100 && worst <= 1e-8,
            fmt("%zu random scenarios, worst |S+I+R+D - N| / N = %.3g", checked, worst)};
}

// 8. Vaccinating beyond 1 - 1/R0 before seeding prevents major outbreaks.
Outcome herd_immunity()
{
    const std::size_t n = 1000;
    const double gamma = 0.1, beta = 3.0 * gamma / n;
    const auto t_matrix = transmission_from_network(complete_network(n), beta);
    auto pop = AgentPopulation::homogeneous(n, gamma);
    pop.states[0] = AgentState::Infected;
    const auto start = Clock::now();
    auto mean_final = [&](double coverage) {
        const InterventionSchedule sched({{Vaccinate{coverage}, 0.0, {}, {}, {}}}, n);
        const auto ens = monte_carlo_scheduled(pop, t_matrix, sched, 0.1, 300.0, 200, 99);
        double sum = 0.0;
        for (double f : ens.replica_final_sizes)
            sum += f;
        return sum / static_cast<double>(ens.replica_final_sizes.size()) / static_cast<double>(n);
    };
    const double vaccinated = mean_final(0.7);
    const double unvaccinated = mean_final(0.0);
    const double runtime = seconds_since(start);
    return {vaccinated < 0.05 && unvaccinated > 0.5 && runtime < 300.0,
            fmt("mean final size / N: coverage 0.7 -> %.4f, coverage 0 -> %.4f, runtime %.1f s", vaccinated,
                unvaccinated, runtime)};
}

// 9. Supercritical single-seed outbreaks either die out or become major.
Outcome outbreak_asymmetry()
{
    const std::size_t n = 500;
    const double gamma = 0.1, beta = 3.0 * gamma / n;
    auto pop = AgentPopulation::homogeneous(n, gamma);
    pop.states[0] = AgentState::Infected;
    const auto ens = monte_carlo(pop, transmission_from_network(complete_network(n), beta), 0.1, 250.0, 2000, 31337);
    const auto stats = outbreak_size_distribution(ens);
    const double nn = static_cast<double>(n);
    std::size_t middle = 0;
    for (double f : ens.replica_final_sizes)
        middle += f > 0.2 * nn && f < 0.6 * nn;
    const double extinction = 1.0 - stats.major_fraction;
    const double middle_share = static_cast<double>(middle) / 2000.0;
    return {std::abs(extinction - 1.0 / 3.0) <= 0.05 && middle_share < 0.02 && stats.major_fraction > 0.1,
            fmt("extinction fraction %.4f (1/R0 = 0.3333), major %.4f, between 0.2N and 0.6N %.4f", extinction,
                stats.major_fraction, middle_share)};
}

// 10. Cutting every inter-community contact confines the outbreak.
Outcome confinement()
{
    const std::size_t n = 100;
    const double gamma = 0.1, beta = 4.0 * gamma / 50.0;
    Communities halves(2);
    for (AgentId a = 0; a < n; ++a)
        halves[a < 50 ? 0 : 1].push_back(a);
    const InterventionSchedule sched({{Compartmentalize{halves, 1.0}, 0.0, {}, {}, {}}}, n);
    const auto t_matrix = transmission_from_network(complete_network(n), beta);
    auto pop = AgentPopulation::homogeneous(n, gamma);
    pop.states[3] = AgentState::Infected;

    std::size_t leaked = 0, spread = 0;
    for (std::size_t r = 0; r < 1000; ++r) {
        const auto seed = derive_seed(555, r);
        std::shared_ptr<const TransmissionMatrix> view(std::shared_ptr<const TransmissionMatrix>(), &t_matrix);
        AbmProcess process(pop, view, seed);
        run_scheduled(process, t_matrix, sched, 0.2, 150.0, seed);
        const auto &states = process.agents().states;
        leaked += std::any_of(states.begin() + 50, states.end(),
                              [](AgentState s) { return s != AgentState::Susceptible; });
        spread += std::count_if(states.begin(), states.begin() + 50,
                                [](AgentState s) { return s != AgentState::Susceptible; }) > 5;
    }
    return {leaked == 0 && spread > 0,
            fmt("replicas with infections outside the seeded community: %zu of 1000 (%zu spread inside)", leaked,
                spread)};
}

// 11. Leontief solves meet the residual bound; the 2x2 example is exact.
Outcome leontief()
{
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = static_cast<Eigen::Index>(1 + trial % 20);
        Eigen::MatrixXd a(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                a(i, j) = u(gen);
        // Column sums below one make the table productive.
        const double target = 0.5 + 0.49 * u(gen);
        for (Eigen::Index j = 0; j < n; ++j)
            a.col(j) *= target / a.col(j).sum();
        Eigen::VectorXd d(n);
        for (Eigen::Index i = 0; i < n; ++i)
            d[i] = 100.0 * u(gen);
        std::vector<std::string> names;
        for (Eigen::Index i = 0; i < n; ++i)
            names.push_back("s" + std::to_string(i));
        const IOTable table(names, a, d, Eigen::VectorXd::Constant(n, 0.5));
        const Eigen::VectorXd x = leontief_output(table, d);
        worst = std::max(worst, (x - a * x - d).norm() / d.norm());
    }
    Eigen::MatrixXd a(2, 2);
    a << 0.1, 0.2, 0.3, 0.1;
    const IOTable table({"a", "b"}, a, Eigen::Vector2d(10, 20), Eigen::Vector2d(0.5, 0.5));
    const Eigen::VectorXd x = leontief_output(table, Eigen::Vector2d(10, 20));
    // (I - A) x = d by Cramer's rule: det = 0.9 * 0.9 - 0.2 * 0.3 = 0.75.
    const double x0 = (0.9 * 10 + 0.2 * 20) / 0.75, x1 = (0.3 * 10 + 0.9 * 20) / 0.75;
    const double hand = std::max(std::abs(x[0] - x0), std::abs(x[1] - x1));
    return {worst <= 1e-9 && hand <= 1e-9,
            fmt("worst relative residual %.3g over 100 tables; 2x2 -> (%.12g, %.12g), error %.3g", worst, x[0], x[1],
                hand)};
}

std::string read_file(const std::filesystem::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

// 12. Same scenario and seed give byte-identical CSV, whatever the threads.
Outcome determinism()
{
    const auto root = std::filesystem::temp_directory_path() / "epinet_acceptance_determinism";
    std::filesystem::remove_all(root);
    std::size_t identical = 0, total = 0;
    std::string mismatches;
    for (const auto &entry : std::filesystem::directory_iterator(kScenarioDir)) {
        if (entry.path().extension() != ".yaml")
            continue;
        std::vector<std::string> outputs;
        for (unsigned threads : {1u, 3u}) {
            Scenario sc = load_scenario(entry.path());
            sc.run.threads = threads;
            sc.output.directory = root / std::to_string(threads);
            run_scenario(sc);
            outputs.push_back(read_file(sc.output.directory / (sc.output.prefix + ".csv")));
        }
        ++total;
        if (outputs[0] == outputs[1] && !outputs[0].empty())
            ++identical;
        else
            mismatches += " " + entry.path().filename().string();
    }
    std::filesystem::remove_all(root);
    return {total > 0 && identical == total,
            fmt("%zu/%zu bundled scenarios byte-identical across runs with 1 and 3 threads%s", identical, total,
                mismatches.c_str())};
}

// 13. Lockdown with release gives two waves and a non-monotone economy.
Outcome multi_wave()
{
    const auto waves = execute_scenario(load_scenario(kScenarioDir / "lockdown_release.yaml"));
    std::vector<double> t, infected;
    for (const auto &row : waves.trajectory.rows) {
        t.push_back(row[0]);
        infected.push_back(row[2]);
    }
    const auto maxima = local_maxima(infected);
    double widest = 0.0;
    for (std::size_t k = 1; k < maxima.size(); ++k)
        widest = std::max(widest, t[maxima[k]] - t[maxima[k - 1]]);

    const auto coupled = execute_scenario(load_scenario(kScenarioDir / "coupled_lockdown.yaml"));
    std::vector<double> index;
    for (const auto &row : coupled.trajectory.rows)
        index.push_back(row.back());
    std::vector<double> negated(index.size());
    std::transform(index.begin(), index.end(), negated.begin(), [](double v) { return -v; });
    const std::size_t peaks = local_maxima(index).size();
    const std::size_t troughs = local_maxima(negated).size();
    const double lowest = *std::min_element(index.begin(), index.end());
    return {maxima.size() >= 2 && widest >= 10.0 && peaks >= 1 && troughs >= 1 && lowest < 1.0,
            fmt("I local maxima: %zu (spacing %.1f), index troughs: %zu, index peaks: %zu, min index %.4f",
                maxima.size(), widest, troughs, peaks, lowest)};
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 mean-field reduces to SIR on the complete network", reduction},
        {"2 aggregate parameters exact for homogeneous networks", equivalent_params},
        {"3 ABM ensemble converges to the ODE", abm_convergence},
        {"4 N=3 final sizes match exact enumeration", small_instance},
        {"5 epidemic threshold", threshold},
        {"6 doubling time", doubling},
        {"7 population conservation", conservation},
        {"8 herd-immunity threshold", herd_immunity},
        {"9 outbreak-size asymmetry", outbreak_asymmetry},
        {"10 compartmentalization confinement", confinement},
        {"11 Leontief correctness", leontief},
        {"12 determinism", determinism},
        {"13 multi-wave lockdown scenario", multi_wave},
    };
    int failures = 0;
    for (const auto &[name, check] : criteria) {
        Outcome result;
        const auto start = Clock::now();
        try {
            result = check();
        } catch (const std::exception &err) {
            result = {false, std::string("exception: ") + err.what()};
        }
        failures += !result.pass;
        std::printf("[%s] %s: %s (%.1f s)\n", result.pass ? "PASS" : "FAIL", name.c_str(), result.detail.c_str(),
                    seconds_since(start));
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures ? 1 : 0;
}
