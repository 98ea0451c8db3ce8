#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

namespace epinet {

using StateVector = Eigen::VectorXd;

/// Right-hand side of an autonomous or time-dependent ODE system. Must write
/// dx/dt into the third argument, which is already sized like x.
using DerivativeFn = std::function<void(double t, const StateVector &x, StateVector &dxdt)>;

/// Called once per sample with the time and the state at that time.
using SampleObserver = std::function<void(double t, const StateVector &x)>;

inline constexpr double kDefaultTimeStep = 0.1;

/// Sample times 0, dt, 2dt, ... with the last one placed exactly on t_end.
/// A final partial step is used when t_end is not a multiple of dt; step
/// counts within 1e-9 relative of an integer are snapped to it.
std::vector<double> time_grid(double t_end, double dt);

/// Classical fourth-order Runge-Kutta stepper with reusable workspace.
class Rk4Stepper {
public:
    explicit Rk4Stepper(Eigen::Index dimension);

    /// Advances x from t to t + h in place. Throws IntegrationError if any
    /// stage derivative is not finite.
    void step(const DerivativeFn &f, double t, StateVector &x, double h);

private:
    StateVector k1_, k2_, k3_, k4_, tmp_;
};

struct OdeSolution {
    std::vector<double> times;
    std::vector<StateVector> states;
};

/// RK4 on the grid produced by time_grid(t_end, dt).
OdeSolution integrate_fixed_step(const DerivativeFn &f, const StateVector &x0, double t_end, double dt);

/// Same as above without materialising the solution.
void integrate_fixed_step(const DerivativeFn &f, const StateVector &x0, double t_end, double dt,
                          const SampleObserver &observe);

} // namespace epinet
