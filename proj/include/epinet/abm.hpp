#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "epinet/process.hpp"
#include "epinet/random.hpp"
#include "epinet/transmission.hpp"
#include "epinet/types.hpp"

namespace epinet {

enum class AgentState : std::uint8_t { Susceptible, Infected, Recovered, Dead };

struct StateCounts {
    std::size_t s = 0;
    std::size_t i = 0;
    std::size_t r = 0;
    std::size_t d = 0;

    CompartmentState as_state() const noexcept
    {
        return {static_cast<double>(s), static_cast<double>(i), static_cast<double>(r), static_cast<double>(d)};
    }
};

/// Discrete per-agent states with individual recovery rates and, for SIRD,
/// individual death rates (`mu` empty otherwise).
struct AgentPopulation {
    std::vector<AgentState> states;
    std::vector<double> gamma;
    std::vector<double> mu;

    std::size_t size() const noexcept { return states.size(); }
    StateCounts counts() const noexcept;

    /// Throws DimensionError/DomainError on inconsistent sizes or rates.
    void validate() const;

    /// n susceptible agents sharing the same rates.
    static AgentPopulation homogeneous(std::size_t n, double gamma, std::optional<double> mu = std::nullopt);
};

/// Moves round(fraction * #S) uniformly chosen susceptible agents to R.
/// Returns the number moved.
std::size_t vaccinate_susceptibles(std::vector<AgentState> &states, double fraction, std::uint64_t seed);

/// One synchronous step of length dt.
///
/// A susceptible agent i is infected with probability 1 - exp(-h_i dt),
/// h_i = sum over infected j of T(j, i). An infected agent leaves I with
/// probability 1 - exp(-(gamma_i + mu_i) dt), to D with share mu_i / (gamma_i
/// + mu_i) and to R otherwise. Newly infected agents transmit from the next
/// step on. Draws are taken in agent order, one per agent at risk.
AgentPopulation abm_step(const AgentPopulation &pop, const TransmissionMatrix &t_matrix, double dt, Rng &rng);

/// Stateful agent-based simulation. Keeps the force of infection on every
/// agent up to date incrementally, so a step costs O(N) plus O(row length)
/// per state change.
class AbmProcess final : public EpidemicProcess {
public:
    AbmProcess(AgentPopulation pop, std::shared_ptr<const TransmissionMatrix> t_matrix, std::uint64_t seed);
    AbmProcess(AgentPopulation pop, std::shared_ptr<const TransmissionMatrix> t_matrix, Rng rng);

    std::size_t population() const override { return pop_.size(); }
    CompartmentState counts() const override { return tally_.as_state(); }
    void set_transmission(std::shared_ptr<const TransmissionMatrix> matrix) override;
    void advance(double t, double dt) override;
    double vaccinate(double fraction, std::uint64_t seed) override;
    void set_death_rate_multiplier(double factor) override { death_multiplier_ = factor; }

    const AgentPopulation &agents() const noexcept { return pop_; }
    const StateCounts &tally() const noexcept { return tally_; }
    const Rng &rng() const noexcept { return rng_; }

private:
    void rebuild_pressure();
    void add_source(AgentId j);
    void remove_source(AgentId j);

    AgentPopulation pop_;
    std::shared_ptr<const TransmissionMatrix> matrix_;
    Rng rng_;
    StateCounts tally_;
    std::vector<double> hazard_;
    std::vector<std::uint32_t> sources_; // infectious agents with a positive rate into each agent
    double death_multiplier_ = 1.0;
    std::vector<AgentId> infected_now_;
    std::vector<std::pair<AgentId, AgentState>> exits_now_;
};

/// Repeated synchronous steps on time_grid(t_end, dt), recording the integer
/// counts at every sample. Deterministic in (inputs, seed).
Trajectory simulate_abm(const AgentPopulation &pop0, const TransmissionMatrix &t_matrix, double dt,
                        double t_end, std::uint64_t seed);

struct EnsembleResult {
    std::size_t population = 0;
    std::vector<double> times;
    std::vector<CompartmentState> mean;       // per-sample mean counts
    std::vector<double> replica_final_sizes; // R + D at the end, minus vaccinated agents
    std::vector<std::uint64_t> seeds;

    Trajectory mean_trajectory() const;
};

/// Runs replica r with seed derive_seed(base_seed, r).
using ReplicaFn = std::function<Trajectory(std::size_t replica, std::uint64_t seed)>;

/// Runs replicas on up to `threads` workers (0 = hardware concurrency).
/// Every replica writes to its own slot and counts are summed exactly, so
/// the result does not depend on scheduling. Replicas must return
/// trajectories on a common time grid with integer counts.
EnsembleResult run_ensemble(std::size_t n_replicas, std::uint64_t base_seed, const ReplicaFn &replica,
                            unsigned threads = 0);

EnsembleResult monte_carlo(const AgentPopulation &pop0, const TransmissionMatrix &t_matrix, double dt,
                           double t_end, std::size_t n_replicas, std::uint64_t base_seed, unsigned threads = 0);

struct OutbreakStats {
    std::vector<std::size_t> histogram; // histogram[k] = replicas with final size k
    double mean = 0.0;
    double median = 0.0;
    double max = 0.0;
    std::optional<double> skewness; // needs at least two replicas
    double major_threshold = 0.0;
    double major_fraction = 0.0; // share of replicas with final size > major_threshold
};

inline constexpr double kDefaultMajorOutbreakFraction = 0.1;

OutbreakStats outbreak_size_distribution(const EnsembleResult &ens,
                                         double major_threshold_fraction = kDefaultMajorOutbreakFraction);

/// Sample skewness m3 / m2^(3/2) (zero for identical values). Throws
/// DomainError for fewer than two values.
double sample_skewness(std::span<const double> values);

} // namespace epinet
