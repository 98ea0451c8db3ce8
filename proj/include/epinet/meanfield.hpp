#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "epinet/integrator.hpp"
#include "epinet/network.hpp"
#include "epinet/process.hpp"
#include "epinet/transmission.hpp"
#include "epinet/types.hpp"

namespace epinet {

/// Per-agent probabilities of being susceptible, infected or recovered.
struct ProbabilityState {
    Eigen::VectorXd s;
    Eigen::VectorXd i;
    Eigen::VectorXd r;

    std::size_t size() const noexcept { return static_cast<std::size_t>(s.size()); }

    /// Throws DimensionError on mismatched lengths and DomainError when an
    /// entry leaves [-tol, 1 + tol] or an agent's probabilities do not sum
    /// to one within tol.
    void validate(double tol = 1e-9) const;

    static ProbabilityState all_susceptible(std::size_t n);
};

struct ProbabilityDerivative {
    Eigen::VectorXd ds;
    Eigen::VectorXd di;
    Eigen::VectorXd dr;
};

/// Force of infection on every agent under the independence closure:
/// beta_i = sum_j T(j, i) p_I(j).
Eigen::VectorXd effective_beta(const TransmissionMatrix &t_matrix, const ProbabilityState &p);

/// dp_S = -p_S beta_i, dp_I = p_S beta_i - gamma_i p_I, dp_R = gamma_i p_I.
ProbabilityDerivative meanfield_derivative(const ProbabilityState &p, const TransmissionMatrix &t_matrix,
                                           const Eigen::VectorXd &gamma);

struct ProbabilityTrajectory {
    std::vector<double> times;
    std::vector<ProbabilityState> states;

    /// Expected counts at every sample.
    Trajectory aggregate() const;
};

/// RK4 on time_grid(t_end, dt). Probabilities are checked after every step
/// and never clamped: leaving [-1e-9, 1 + 1e-9] or breaking per-agent
/// normalisation by more than 1e-9 raises IntegrationError (dt too large).
ProbabilityTrajectory integrate_meanfield(const ProbabilityState &p0, const TransmissionMatrix &t_matrix,
                                          const Eigen::VectorXd &gamma, double dt, double t_end);

/// Expected number of agents in each state.
CompartmentState aggregate_counts(const ProbabilityState &p);

/// Every agent gets (S/n, I/n, R/n). Throws DomainError unless the state
/// sums to n (relative tolerance 1e-12) and has no deaths.
ProbabilityState uniform_probability_state(const CompartmentState &state, std::size_t n);

/// Aggregate SIR rates implied by a heterogeneous network model.
struct EquivalentParams {
    double beta_eff = 0.0;  // (sum_i sum_j T(j, i)) / n^2
    double gamma_eff = 0.0; // (sum_i gamma_i) / n

    /// beta_eff / gamma_eff. Throws DomainError when gamma_eff is zero.
    double r0() const;
};

/// The sums are accumulated exactly and rounded once, so homogeneous inputs
/// (T = beta on every entry, gamma_i = gamma) give back beta and gamma
/// bit-for-bit.
EquivalentParams aggregate_equivalent_params(const TransmissionMatrix &t_matrix, const Eigen::VectorXd &gamma,
                                             std::size_t n);

/// Homogeneous network reduction: SIR rates with per-pair beta scaled by
/// n_avg / N, n_avg = average_degree(net). Returns beta unchanged on a
/// complete network.
EpidemicParams homogeneous_reduction(double beta, const ContactNetwork &net, double gamma);

/// Mean-field dynamics exposed as a steppable process.
class MeanFieldProcess final : public EpidemicProcess {
public:
    MeanFieldProcess(ProbabilityState p0, std::shared_ptr<const TransmissionMatrix> t_matrix, Eigen::VectorXd gamma);
    MeanFieldProcess(const MeanFieldProcess &) = delete;
    MeanFieldProcess &operator=(const MeanFieldProcess &) = delete;

    std::size_t population() const override { return n_; }
    CompartmentState counts() const override;
    void set_transmission(std::shared_ptr<const TransmissionMatrix> matrix) override;
    void advance(double t, double dt) override;
    /// Deterministic: moves `fraction` of every agent's p_S to p_R.
    double vaccinate(double fraction, std::uint64_t seed) override;

    ProbabilityState state() const;

private:
    std::size_t n_;
    std::shared_ptr<const TransmissionMatrix> matrix_;
    Eigen::VectorXd gamma_;
    StateVector x_; // [p_S; p_I; p_R]
    Rk4Stepper stepper_;
    DerivativeFn rhs_;
};

} // namespace epinet
