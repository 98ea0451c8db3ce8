#include "epinet/compartmental.hpp"

#include <cmath>
#include <vector>

#include "epinet/error.hpp"

namespace epinet {

std::string_view to_string(CompartmentalKind kind) noexcept
{
    switch (kind) {
    case CompartmentalKind::SIR:
        return "SIR";
    case CompartmentalKind::SIRD:
        return "SIRD";
    case CompartmentalKind::SIRS:
        return "SIRS";
    }
    return "?";
}

std::optional<CompartmentalKind> parse_compartmental_kind(std::string_view text) noexcept
{
    if (text == "SIR")
        return CompartmentalKind::SIR;
    if (text == "SIRD")
        return CompartmentalKind::SIRD;
    if (text == "SIRS")
        return CompartmentalKind::SIRS;
    return std::nullopt;
}

CompartmentDerivative sir_derivative(const CompartmentState &x, const EpidemicParams &p) noexcept
{
    const double infection = p.beta * x.i * x.s;
    const double recovery = p.gamma * x.i;
    return {-infection, infection - recovery, recovery, 0.0};
}

CompartmentDerivative sird_derivative(const CompartmentState &x, const EpidemicParams &p)
{
    if (!p.mu)
        throw ConfigError("SIRD model requires a death rate mu");
    const double infection = p.beta * x.i * x.s;
    return {-infection, infection - (p.gamma + *p.mu) * x.i, p.gamma * x.i, *p.mu * x.i};
}

CompartmentDerivative sirs_derivative(const CompartmentState &x, const EpidemicParams &p)
{
    if (!p.xi)
        throw ConfigError("SIRS model requires a waning rate xi");
    const double infection = p.beta * x.i * x.s;
    const double recovery = p.gamma * x.i;
    const double waning = *p.xi * x.r;
    return {-infection + waning, infection - recovery, recovery - waning, 0.0};
}

CompartmentDerivative compartmental_derivative(CompartmentalKind kind, const CompartmentState &state,
                                               const EpidemicParams &params)
{
    switch (kind) {
    case CompartmentalKind::SIRD:
        return sird_derivative(state, params);
    case CompartmentalKind::SIRS:
        return sirs_derivative(state, params);
    case CompartmentalKind::SIR:
        break;
    }
    return sir_derivative(state, params);
}

void validate_params(CompartmentalKind kind, const EpidemicParams &params)
{
    params.validate();
    if (kind == CompartmentalKind::SIRD && !params.mu)
        throw ConfigError("SIRD model requires a death rate mu");
    if (kind == CompartmentalKind::SIRS && !params.xi)
        throw ConfigError("SIRS model requires a waning rate xi");
}

double basic_reproduction_number(const EpidemicParams &params)
{
    const double removal = params.removal_rate();
    if (!(removal > 0.0))
        throw DomainError("reproduction number undefined: gamma + mu is zero");
    return params.beta / removal;
}

double population_reproduction_number(const EpidemicParams &params, double population)
{
    return basic_reproduction_number(params) * population;
}

Trajectory simulate_compartmental(CompartmentalKind kind, const EpidemicParams &params,
                                  const CompartmentState &initial, double t_end, double dt)
{
    validate_params(kind, params);
    if (initial.s < 0 || initial.i < 0 || initial.r < 0 || initial.d < 0)
        throw DomainError("initial compartment sizes must be non-negative");

    const DerivativeFn rhs = [&](double, const StateVector &x, StateVector &dx) {
        const auto d = compartmental_derivative(kind, {x[0], x[1], x[2], x[3]}, params);
        dx << d.ds, d.di, d.dr, d.dd;
    };

    StateVector x0(4);
    x0 << initial.s, initial.i, initial.r, initial.d;

    Trajectory traj;
    traj.meta.model = "compartmental/" + std::string(to_string(kind));
    traj.meta.params = params;
    integrate_fixed_step(rhs, x0, t_end, dt, [&](double t, const StateVector &x) {
        traj.append(t, {x[0], x[1], x[2], x[3]});
    });
    return traj;
}

GrowthEstimate doubling_time(const Trajectory &traj, double window_start, double window_end)
{
    if (traj.empty())
        throw DomainError("doubling time of an empty trajectory");
    const auto &times = traj.times();
    if (window_start > window_end || window_start < times.front() || window_end > times.back())
        throw DomainError("doubling-time window lies outside the trajectory");

    std::vector<double> ts, ys;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t = times[k];
        if (t < window_start || t > window_end)
            continue;
        const double infected = traj.states()[k].i;
        if (!(infected > 0.0))
            throw DomainError("doubling time needs strictly positive I over the window");
        ts.push_back(t);
        ys.push_back(std::log(infected));
    }
    if (ts.size() < 2)
        throw DomainError("doubling-time window holds fewer than two samples");

    const auto n = static_cast<double>(ts.size());
    double t_mean = 0, y_mean = 0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        t_mean += ts[k];
        y_mean += ys[k];
    }
    t_mean /= n;
    y_mean /= n;

    double sxx = 0, sxy = 0;
    bool constant = true;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        sxx += (ts[k] - t_mean) * (ts[k] - t_mean);
        sxy += (ts[k] - t_mean) * (ys[k] - y_mean);
        constant = constant && ys[k] == ys.front();
    }
    const double slope = constant ? 0.0 : sxy / sxx;

    GrowthEstimate out;
    out.growth_rate = slope;
    if (slope > 0.0)
        out.doubling_time = std::log(2.0) / slope;
    return out;
}

} // namespace epinet
