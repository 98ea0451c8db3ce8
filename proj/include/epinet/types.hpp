#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace epinet {

/// Rates of the compartmental dynamics. All rates are per unit time.
///
/// `beta` is the rate of infection per susceptible-infected pairing, so the
/// force of infection on one susceptible is beta * I with I a raw count.
/// `mu` (deaths from I) and `xi` (waning R -> S) are only present for the
/// SIRD and SIRS variants respectively.
struct EpidemicParams {
    double beta = 0.0;
    double gamma = 0.0;
    std::optional<double> mu;
    std::optional<double> xi;

    /// Total exit rate from I.
    double removal_rate() const noexcept { return gamma + mu.value_or(0.0); }

    /// Throws DomainError if any rate is negative or non-finite.
    void validate() const;
};

/// Aggregate compartment sizes of a closed population. Real-valued so the
/// same record serves ODE solutions, expected counts and ABM counts.
struct CompartmentState {
    double s = 0.0;
    double i = 0.0;
    double r = 0.0;
    double d = 0.0;

    double total() const noexcept { return s + i + r + d; }

    friend bool operator==(const CompartmentState &, const CompartmentState &) = default;
};

/// One applied or reverted intervention.
struct InterventionEvent {
    double time = 0.0;
    std::string action; // "activate", "deactivate" or "expired"
    std::string description;
};

struct TrajectoryMeta {
    std::string model;
    EpidemicParams params;
    std::optional<std::uint64_t> seed;
    std::vector<InterventionEvent> interventions;
    // Agents (expected agents for mean-field runs) moved S -> R by vaccination.
    double vaccinated = 0.0;
};

/// Time-indexed compartment states. Sample times are strictly increasing.
class Trajectory {
public:
    Trajectory() = default;

    /// Throws DomainError unless t is greater than the last sample time.
    void append(double t, const CompartmentState &state);

    std::size_t size() const noexcept { return times_.size(); }
    bool empty() const noexcept { return times_.empty(); }

    const std::vector<double> &times() const noexcept { return times_; }
    const std::vector<CompartmentState> &states() const noexcept { return states_; }

    const CompartmentState &back() const { return states_.back(); }

    TrajectoryMeta meta;

private:
    std::vector<double> times_;
    std::vector<CompartmentState> states_;
};

} // namespace epinet
