#pragma once

#include <optional>
#include <string_view>

#include "epinet/integrator.hpp"
#include "epinet/types.hpp"

namespace epinet {

enum class CompartmentalKind { SIR, SIRD, SIRS };

std::string_view to_string(CompartmentalKind kind) noexcept;
std::optional<CompartmentalKind> parse_compartmental_kind(std::string_view text) noexcept;

struct CompartmentDerivative {
    double ds = 0.0;
    double di = 0.0;
    double dr = 0.0;
    double dd = 0.0;

    double sum() const noexcept { return ds + di + dr + dd; }
};

/// dS = -beta I S, dI = beta I S - gamma I, dR = gamma I. Ignores mu and xi.
CompartmentDerivative sir_derivative(const CompartmentState &state, const EpidemicParams &params) noexcept;

/// SIR with deaths competing with recovery: dI gains -mu I, dD = mu I.
/// Throws ConfigError when params.mu is absent.
CompartmentDerivative sird_derivative(const CompartmentState &state, const EpidemicParams &params);

/// SIR with waning immunity xi R flowing back from R to S.
/// Throws ConfigError when params.xi is absent.
CompartmentDerivative sirs_derivative(const CompartmentState &state, const EpidemicParams &params);

CompartmentDerivative compartmental_derivative(CompartmentalKind kind, const CompartmentState &state,
                                               const EpidemicParams &params);

/// Throws ConfigError if the rates required by `kind` are missing and
/// DomainError if any rate is invalid.
void validate_params(CompartmentalKind kind, const EpidemicParams &params);

/// beta / (gamma + mu), with mu taken as zero when absent. Because beta is a
/// per-pairing rate this is the reproduction number per susceptible; multiply
/// by the population (population_reproduction_number) for the usual R0.
/// Throws DomainError when gamma + mu is zero.
double basic_reproduction_number(const EpidemicParams &params);

/// beta * N / (gamma + mu): expected secondary cases in a fully susceptible
/// population of size N.
double population_reproduction_number(const EpidemicParams &params, double population);

/// Integrates the chosen variant with RK4 on time_grid(t_end, dt).
Trajectory simulate_compartmental(CompartmentalKind kind, const EpidemicParams &params,
                                  const CompartmentState &initial, double t_end,
                                  double dt = kDefaultTimeStep);

struct GrowthEstimate {
    double growth_rate = 0.0;            // least-squares slope of ln I
    std::optional<double> doubling_time; // absent when the series is not growing

    bool growing() const noexcept { return doubling_time.has_value(); }
};

/// Fits ln I(t) = a + lambda t by ordinary least squares over the samples
/// with window_start <= t <= window_end and reports ln 2 / lambda.
/// Throws DomainError if the window lies outside the trajectory, holds fewer
/// than two samples, or contains a non-positive I.
GrowthEstimate doubling_time(const Trajectory &traj, double window_start, double window_end);

} // namespace epinet
