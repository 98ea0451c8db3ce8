#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "epinet/abm.hpp"
#include "epinet/meanfield.hpp"
#include "epinet/process.hpp"
#include "epinet/transmission.hpp"
#include "epinet/types.hpp"

namespace epinet {

using AgentPair = std::pair<AgentId, AgentId>;
using Communities = std::vector<std::vector<AgentId>>;

/// Lockdown: remove a random share of the contacts.
struct DensityReduction {
    double fraction = 0.0;
};

/// Cut a random share of the contacts between communities.
struct Compartmentalize {
    Communities communities;
    double cut_fraction = 1.0;
};

/// Move a random share of the susceptibles to R. Irreversible.
struct Vaccinate {
    double fraction = 0.0;
};

/// Multiply every transmission rate.
struct TransmissionScale {
    double factor = 1.0;
};

using InterventionKind = std::variant<DensityReduction, Compartmentalize, Vaccinate, TransmissionScale>;

struct Intervention {
    InterventionKind kind;
    /// Time-based activation, or the earliest time a trigger may fire.
    double activation = 0.0;
    /// Absolute end time. Reversible kinds only.
    std::optional<double> deactivation;
    /// Activate at the first step boundary where I / N exceeds this.
    std::optional<double> trigger_infected_fraction;
    /// Active period counted from the actual activation. Reversible kinds only.
    std::optional<double> duration;

    bool reversible() const noexcept { return !std::holds_alternative<Vaccinate>(kind); }
    std::string describe() const;
};

/// Interventions sorted (stably) by activation time.
class InterventionSchedule {
public:
    InterventionSchedule() = default;

    /// Throws ValidationError listing every problem found.
    InterventionSchedule(std::vector<Intervention> entries, std::size_t population);

    /// Every problem with the entries, empty when valid.
    static std::vector<std::string> problems(const std::vector<Intervention> &entries, std::size_t population);

    const std::vector<Intervention> &entries() const noexcept { return entries_; }
    bool empty() const noexcept { return entries_.empty(); }

private:
    std::vector<Intervention> entries_;
};

/// Above `capacity` infected, death rates are multiplied by `death_multiplier`.
struct HealthcareCapacity {
    double capacity = 0.0;
    double death_multiplier = 1.0;
};

/// Optional per-run extensions of run_scheduled.
struct RunHooks {
    std::optional<HealthcareCapacity> capacity;
    /// Extra multiplier on every rate, evaluated at each step boundary after
    /// the schedule has been processed.
    std::function<double(double t, const CompartmentState &counts)> transmission_factor;
    /// Called for every recorded sample.
    std::function<void(double t, const CompartmentState &counts)> on_sample;
};

/// Community index of every agent. Throws DomainError unless the
/// communities cover agents 0..n-1 exactly once.
std::vector<std::size_t> community_labels(const Communities &communities, std::size_t n);

/// round(fraction * P) of the P contact pairs (off-diagonal, either
/// direction positive), chosen uniformly.
std::vector<AgentPair> select_density_reduction(const TransmissionMatrix &t_matrix, double fraction,
                                                std::uint64_t seed);

/// round(cut_fraction * C) of the C pairs that cross communities.
std::vector<AgentPair> select_compartment_cuts(const TransmissionMatrix &t_matrix, const Communities &communities,
                                               double cut_fraction, std::uint64_t seed);

/// Copy of t_matrix with both directions of every listed pair set to zero.
TransmissionMatrix remove_pairs(const TransmissionMatrix &t_matrix, const std::vector<AgentPair> &pairs);

TransmissionMatrix apply_density_reduction(const TransmissionMatrix &t_matrix, double fraction, std::uint64_t seed);

TransmissionMatrix apply_compartmentalization(const TransmissionMatrix &t_matrix, const Communities &communities,
                                              double cut_fraction, std::uint64_t seed);

AgentPopulation apply_vaccination(const AgentPopulation &pop, double fraction, std::uint64_t seed);

/// Mean-field version: every agent moves fraction * p_S to p_R.
ProbabilityState apply_vaccination(const ProbabilityState &p, double fraction);

/// Drives a process through the schedule on time_grid(t_end, dt).
///
/// At every step boundary, before stepping: expired interventions are
/// reverted, due (or triggered) ones applied, the effective transmission
/// matrix is rebuilt from `base` and the active set, and the sample for that
/// time is recorded. The effective matrix is a pure function of the active
/// set, so reverting restores the prior entries exactly. Random selections
/// for entry k use derive_seed(splitmix64(run_seed), k).
Trajectory run_scheduled(EpidemicProcess &process, const TransmissionMatrix &base,
                         const InterventionSchedule &schedule, double dt, double t_end, std::uint64_t run_seed,
                         const RunHooks &hooks = {});

Trajectory run_scheduled_abm(const AgentPopulation &pop0, const TransmissionMatrix &base,
                             const InterventionSchedule &schedule, double dt, double t_end, std::uint64_t seed,
                             const RunHooks &hooks = {});

Trajectory run_scheduled_meanfield(const ProbabilityState &p0, const TransmissionMatrix &base,
                                   const Eigen::VectorXd &gamma, const InterventionSchedule &schedule, double dt,
                                   double t_end, std::uint64_t seed = 0, const RunHooks &hooks = {});

/// Ensemble of scheduled ABM runs; replica r runs with derive_seed(base_seed, r).
EnsembleResult monte_carlo_scheduled(const AgentPopulation &pop0, const TransmissionMatrix &base,
                                     const InterventionSchedule &schedule, double dt, double t_end,
                                     std::size_t n_replicas, std::uint64_t base_seed, unsigned threads = 0,
                                     const std::optional<HealthcareCapacity> &capacity = std::nullopt);

} // namespace epinet
