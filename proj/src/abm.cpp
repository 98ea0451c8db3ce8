#include "epinet/abm.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "epinet/error.hpp"
#include "epinet/integrator.hpp"

namespace epinet {

StateCounts AgentPopulation::counts() const noexcept
{
    StateCounts c;
    for (auto s : states) {
        switch (s) {
        case AgentState::Susceptible:
            ++c.s;
            break;
        case AgentState::Infected:
            ++c.i;
            break;
        case AgentState::Recovered:
            ++c.r;
            break;
        case AgentState::Dead:
            ++c.d;
            break;
        }
    }
    return c;
}

void AgentPopulation::validate() const
{
    if (gamma.size() != states.size())
        throw DimensionError("one recovery rate per agent required");
    if (!mu.empty() && mu.size() != states.size())
        throw DimensionError("death rates must be absent or one per agent");
    for (double g : gamma)
        if (!std::isfinite(g) || g < 0.0)
            throw DomainError("recovery rates must be finite and non-negative");
    for (double m : mu)
        if (!std::isfinite(m) || m < 0.0)
            throw DomainError("death rates must be finite and non-negative");
    if (mu.empty())
        for (auto s : states)
            if (s == AgentState::Dead)
                throw ConfigError("dead agents require death rates");
}

AgentPopulation AgentPopulation::homogeneous(std::size_t n, double gamma, std::optional<double> mu)
{
    AgentPopulation pop;
    pop.states.assign(n, AgentState::Susceptible);
    pop.gamma.assign(n, gamma);
    if (mu)
        pop.mu.assign(n, *mu);
    pop.validate();
    return pop;
}

AbmProcess::AbmProcess(AgentPopulation pop, std::shared_ptr<const TransmissionMatrix> t_matrix, std::uint64_t seed)
    : AbmProcess(std::move(pop), std::move(t_matrix), Rng(seed))
{
}

AbmProcess::AbmProcess(AgentPopulation pop, std::shared_ptr<const TransmissionMatrix> t_matrix, Rng rng)
    : pop_(std::move(pop)), rng_(rng)
{
    pop_.validate();
    tally_ = pop_.counts();
    set_transmission(std::move(t_matrix));
}

void AbmProcess::set_transmission(std::shared_ptr<const TransmissionMatrix> matrix)
{
    if (!matrix || matrix->size() != pop_.size())
        throw DimensionError("transmission matrix does not match population size");
    matrix_ = std::move(matrix);
    rebuild_pressure();
}

void AbmProcess::rebuild_pressure()
{
    hazard_.assign(pop_.size(), 0.0);
    sources_.assign(pop_.size(), 0);
    for (AgentId j = 0; j < pop_.size(); ++j)
        if (pop_.states[j] == AgentState::Infected)
            add_source(j);
}

void AbmProcess::add_source(AgentId j)
{
    matrix_->for_each_outgoing(j, [this](AgentId i, double rate) {
        hazard_[i] += rate;
        ++sources_[i];
    });
}

void AbmProcess::remove_source(AgentId j)
{
    matrix_->for_each_outgoing(j, [this](AgentId i, double rate) {
        // Reset exactly once the last source is gone so rounding residue
        // never leaves a phantom hazard behind.
        if (--sources_[i] == 0)
            hazard_[i] = 0.0;
        else
            hazard_[i] -= rate;
    });
}

void AbmProcess::advance(double, double dt)
{
    if (!(dt > 0.0))
        throw DomainError("time step must be positive");
    // Without infected agents nothing can change and no draws happen.
    if (tally_.i == 0)
        return;

    infected_now_.clear();
    exits_now_.clear();
    const bool deaths = !pop_.mu.empty();

    for (AgentId a = 0; a < pop_.size(); ++a) {
        switch (pop_.states[a]) {
        case AgentState::Susceptible: {
            const double h = hazard_[a];
            if (h > 0.0 && uniform01(rng_) < -std::expm1(-h * dt))
                infected_now_.push_back(a);
            break;
        }
        case AgentState::Infected: {
            const double recover = pop_.gamma[a];
            const double die = deaths ? pop_.mu[a] * death_multiplier_ : 0.0;
            const double total = recover + die;
            if (!(total > 0.0))
                break;
            const double p_exit = -std::expm1(-total * dt);
            const double u = uniform01(rng_);
            if (u < p_exit)
                exits_now_.emplace_back(a, u < p_exit * (recover / total) ? AgentState::Recovered : AgentState::Dead);
            break;
        }
        default:
            break;
        }
    }

    for (const auto &[a, to] : exits_now_) {
        pop_.states[a] = to;
        remove_source(a);
        --tally_.i;
        if (to == AgentState::Recovered)
            ++tally_.r;
        else
            ++tally_.d;
    }
    for (AgentId a : infected_now_) {
        pop_.states[a] = AgentState::Infected;
        add_source(a);
        --tally_.s;
        ++tally_.i;
    }
}

double AbmProcess::vaccinate(double fraction, std::uint64_t seed)
{
    const std::size_t k = vaccinate_susceptibles(pop_.states, fraction, seed);
    tally_.s -= k;
    tally_.r += k;
    return static_cast<double>(k);
}

std::size_t vaccinate_susceptibles(std::vector<AgentState> &states, double fraction, std::uint64_t seed)
{
    if (!(fraction >= 0.0 && fraction <= 1.0))
        throw DomainError("vaccination fraction must lie in [0, 1]");
    std::vector<AgentId> susceptible;
    for (AgentId a = 0; a < states.size(); ++a)
        if (states[a] == AgentState::Susceptible)
            susceptible.push_back(a);

    const auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(susceptible.size())));
    Rng rng(seed);
    for (std::size_t idx : sample_without_replacement(susceptible.size(), k, rng))
        states[susceptible[idx]] = AgentState::Recovered;
    return k;
}

AgentPopulation abm_step(const AgentPopulation &pop, const TransmissionMatrix &t_matrix, double dt, Rng &rng)
{
    if (t_matrix.size() != pop.size())
        throw DimensionError("transmission matrix does not match population size");
    // Non-owning handle: the process does not outlive this call.
    std::shared_ptr<const TransmissionMatrix> view(std::shared_ptr<const TransmissionMatrix>(), &t_matrix);
    AbmProcess process(pop, view, rng);
    process.advance(0.0, dt);
    rng = process.rng();
    return process.agents();
}

Trajectory simulate_abm(const AgentPopulation &pop0, const TransmissionMatrix &t_matrix, double dt,
                        double t_end, std::uint64_t seed)
{
    const auto grid = time_grid(t_end, dt);
    std::shared_ptr<const TransmissionMatrix> view(std::shared_ptr<const TransmissionMatrix>(), &t_matrix);
    AbmProcess process(pop0, view, seed);

    Trajectory traj;
    traj.meta.model = "abm";
    traj.meta.seed = seed;
    traj.append(grid.front(), process.counts());
    for (std::size_t k = 1; k < grid.size(); ++k) {
        process.advance(grid[k - 1], grid[k] - grid[k - 1]);
        traj.append(grid[k], process.counts());
    }
    return traj;
}

Trajectory EnsembleResult::mean_trajectory() const
{
    Trajectory traj;
    traj.meta.model = "abm/ensemble-mean";
    for (std::size_t k = 0; k < times.size(); ++k)
        traj.append(times[k], mean[k]);
    return traj;
}

EnsembleResult run_ensemble(std::size_t n_replicas, std::uint64_t base_seed, const ReplicaFn &replica,
                            unsigned threads)
{
    if (n_replicas == 0)
        throw DomainError("an ensemble needs at least one replica");

    EnsembleResult out;
    out.seeds.resize(n_replicas);
    for (std::size_t r = 0; r < n_replicas; ++r)
        out.seeds[r] = derive_seed(base_seed, r);
    out.replica_final_sizes.assign(n_replicas, 0.0);

    struct Partial {
        std::vector<double> times;
        std::vector<CompartmentState> sums;
    };

    std::mutex merge_mutex;
    std::optional<Partial> total;
    std::exception_ptr failure;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> abort{false};

    auto merge = [&](Partial &&part) {
        std::lock_guard lock(merge_mutex);
        if (!total) {
            total = std::move(part);
            return;
        }
        if (part.times != total->times)
            throw DomainError("ensemble replicas returned different time grids");
        for (std::size_t k = 0; k < part.sums.size(); ++k) {
            total->sums[k].s += part.sums[k].s;
            total->sums[k].i += part.sums[k].i;
            total->sums[k].r += part.sums[k].r;
            total->sums[k].d += part.sums[k].d;
        }
    };

    auto worker = [&] {
        try {
            std::optional<Partial> mine;
            for (std::size_t r = next++; r < n_replicas && !abort; r = next++) {
                const Trajectory traj = replica(r, out.seeds[r]);
                if (traj.empty())
                    throw DomainError("replica returned an empty trajectory");
                const auto &last = traj.back();
                out.replica_final_sizes[r] = last.r + last.d - traj.meta.vaccinated;
                if (!mine) {
                    mine = Partial{traj.times(), traj.states()};
                    continue;
                }
                if (traj.times() != mine->times)
                    throw DomainError("ensemble replicas returned different time grids");
                for (std::size_t k = 0; k < mine->sums.size(); ++k) {
                    const auto &s = traj.states()[k];
                    mine->sums[k].s += s.s;
                    mine->sums[k].i += s.i;
                    mine->sums[k].r += s.r;
                    mine->sums[k].d += s.d;
                }
            }
            if (mine)
                merge(std::move(*mine));
        } catch (...) {
            std::lock_guard lock(merge_mutex);
            if (!failure)
                failure = std::current_exception();
            abort = true;
        }
    };

    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_replicas));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);

    const double n = static_cast<double>(n_replicas);
    out.times = std::move(total->times);
    out.mean.reserve(total->sums.size());
    for (const auto &s : total->sums)
        out.mean.push_back({s.s / n, s.i / n, s.r / n, s.d / n});
    out.population = static_cast<std::size_t>(std::llround(out.mean.front().total()));
    return out;
}

EnsembleResult monte_carlo(const AgentPopulation &pop0, const TransmissionMatrix &t_matrix, double dt,
                           double t_end, std::size_t n_replicas, std::uint64_t base_seed, unsigned threads)
{
    pop0.validate();
    if (t_matrix.size() != pop0.size())
        throw DimensionError("transmission matrix does not match population size");
    return run_ensemble(
        n_replicas, base_seed,
        [&](std::size_t, std::uint64_t seed) { return simulate_abm(pop0, t_matrix, dt, t_end, seed); }, threads);
}

double sample_skewness(std::span<const double> values)
{
    if (values.size() < 2)
        throw DomainError("skewness needs at least two values");
    const auto n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values)
        mean += v;
    mean /= n;
    double m2 = 0.0, m3 = 0.0;
    for (double v : values) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    if (m2 == 0.0)
        return 0.0;
    return m3 / std::pow(m2, 1.5);
}

OutbreakStats outbreak_size_distribution(const EnsembleResult &ens, double major_threshold_fraction)
{
    const auto &sizes = ens.replica_final_sizes;
    if (sizes.empty())
        throw DomainError("outbreak statistics of an empty ensemble");
    if (!(major_threshold_fraction >= 0.0 && major_threshold_fraction <= 1.0))
        throw DomainError("major-outbreak threshold must be a fraction of N");

    OutbreakStats out;
    out.histogram.assign(ens.population + 1, 0);
    double sum = 0.0;
    for (double v : sizes) {
        const auto k = static_cast<std::size_t>(std::llround(std::clamp(v, 0.0, static_cast<double>(ens.population))));
        ++out.histogram[k];
        sum += v;
    }
    const auto n = static_cast<double>(sizes.size());
    out.mean = sum / n;

    std::vector<double> sorted(sizes);
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    out.median = m % 2 == 1 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
    out.max = sorted.back();
    if (m >= 2)
        out.skewness = sample_skewness(sizes);

    out.major_threshold = major_threshold_fraction * static_cast<double>(ens.population);
    std::size_t major = 0;
    for (double v : sizes)
        if (v > out.major_threshold)
            ++major;
    out.major_fraction = static_cast<double>(major) / n;
    return out;
}

} // namespace epinet
