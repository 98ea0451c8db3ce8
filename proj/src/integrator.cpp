#include "epinet/integrator.hpp"

#include <cmath>
#include <sstream>

#include "epinet/error.hpp"

namespace epinet {

std::vector<double> time_grid(double t_end, double dt)
{
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw DomainError("time step must be positive and finite");
    if (!(t_end >= 0.0) || !std::isfinite(t_end))
        throw DomainError("end time must be non-negative and finite");

    const double ratio = t_end / dt;
    const double nearest = std::round(ratio);
    const double steps = std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio) ? nearest : std::ceil(ratio);
    const auto n = static_cast<std::size_t>(steps);

    std::vector<double> grid;
    grid.reserve(n + 1);
    for (std::size_t k = 0; k < n; ++k)
        grid.push_back(static_cast<double>(k) * dt);
    // (n - 1) * dt < t_end always holds, so the grid stays strictly increasing.
    grid.push_back(t_end);
    return grid;
}

Rk4Stepper::Rk4Stepper(Eigen::Index dimension)
    : k1_(dimension), k2_(dimension), k3_(dimension), k4_(dimension), tmp_(dimension)
{
}

namespace {

void check_finite(const StateVector &k, double t)
{
    if (!k.allFinite()) {
        std::ostringstream msg;
        msg << "non-finite derivative at t = " << t;
        throw IntegrationError(msg.str(), t);
    }
}

} // namespace

void Rk4Stepper::step(const DerivativeFn &f, double t, StateVector &x, double h)
{
    const double half = 0.5 * h;

    f(t, x, k1_);
    check_finite(k1_, t);
    tmp_ = x + half * k1_;

    f(t + half, tmp_, k2_);
    check_finite(k2_, t + half);
    tmp_ = x + half * k2_;

    f(t + half, tmp_, k3_);
    check_finite(k3_, t + half);
    tmp_ = x + h * k3_;

    f(t + h, tmp_, k4_);
    check_finite(k4_, t + h);

    x += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
}

void integrate_fixed_step(const DerivativeFn &f, const StateVector &x0, double t_end, double dt,
                          const SampleObserver &observe)
{
    const auto grid = time_grid(t_end, dt);
    StateVector x = x0;
    Rk4Stepper stepper(x.size());

    observe(grid.front(), x);
    for (std::size_t k = 1; k < grid.size(); ++k) {
        stepper.step(f, grid[k - 1], x, grid[k] - grid[k - 1]);
        observe(grid[k], x);
    }
}

OdeSolution integrate_fixed_step(const DerivativeFn &f, const StateVector &x0, double t_end, double dt)
{
    OdeSolution out;
    integrate_fixed_step(f, x0, t_end, dt, [&](double t, const StateVector &x) {
        out.times.push_back(t);
        out.states.push_back(x);
    });
    return out;
}

} // namespace epinet
