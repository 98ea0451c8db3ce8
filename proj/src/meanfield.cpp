#include "epinet/meanfield.hpp"

#include <cmath>
#include <sstream>

#include <mpfr.h>

#include "epinet/error.hpp"

namespace epinet {

namespace {

constexpr double kProbabilityTolerance = 1e-9;

/// Exact running sum of doubles. 2176 bits cover the whole double exponent
/// range plus 2^27 terms of headroom, so no addition ever rounds.
class ExactSum {
public:
    ExactSum()
    {
        mpfr_init2(acc_, 2176);
        mpfr_set_zero(acc_, 1);
    }
    ~ExactSum() { mpfr_clear(acc_); }
    ExactSum(const ExactSum &) = delete;
    ExactSum &operator=(const ExactSum &) = delete;

    void add(double v) { mpfr_add_d(acc_, acc_, v, MPFR_RNDN); }

    /// Correctly rounded sum / divisor.
    double divided_by(double divisor) const
    {
        mpfr_t q;
        mpfr_init2(q, 53);
        mpfr_div_d(q, acc_, divisor, MPFR_RNDN);
        const double out = mpfr_get_d(q, MPFR_RNDN);
        mpfr_clear(q);
        return out;
    }

private:
    mpfr_t acc_;
};

} // namespace

void ProbabilityState::validate(double tol) const
{
    if (i.size() != s.size() || r.size() != s.size())
        throw DimensionError("probability vectors must have equal length");
    for (Eigen::Index a = 0; a < s.size(); ++a) {
        for (double v : {s[a], i[a], r[a]})
            if (!(v >= -tol && v <= 1.0 + tol))
                throw DomainError("probability outside [0, 1] for agent " + std::to_string(a));
        if (!(std::abs(s[a] + i[a] + r[a] - 1.0) <= tol))
            throw DomainError("probabilities of agent " + std::to_string(a) + " do not sum to one");
    }
}

ProbabilityState ProbabilityState::all_susceptible(std::size_t n)
{
    const auto size = static_cast<Eigen::Index>(n);
    return {Eigen::VectorXd::Ones(size), Eigen::VectorXd::Zero(size), Eigen::VectorXd::Zero(size)};
}

Eigen::VectorXd effective_beta(const TransmissionMatrix &t_matrix, const ProbabilityState &p)
{
    if (t_matrix.size() != p.size())
        throw DimensionError("transmission matrix does not match probability state");
    return t_matrix.incoming(p.i);
}

ProbabilityDerivative meanfield_derivative(const ProbabilityState &p, const TransmissionMatrix &t_matrix,
                                           const Eigen::VectorXd &gamma)
{
    if (static_cast<std::size_t>(gamma.size()) != p.size())
        throw DimensionError("recovery-rate vector does not match probability state");
    if ((gamma.array() < 0.0).any())
        throw DomainError("recovery rates must be non-negative");
    const Eigen::VectorXd force = effective_beta(t_matrix, p);
    ProbabilityDerivative out;
    const Eigen::ArrayXd infection = p.s.array() * force.array();
    const Eigen::ArrayXd recovery = gamma.array() * p.i.array();
    out.ds = -infection.matrix();
    out.di = (infection - recovery).matrix();
    out.dr = recovery.matrix();
    return out;
}

Trajectory ProbabilityTrajectory::aggregate() const
{
    Trajectory traj;
    traj.meta.model = "meanfield";
    for (std::size_t k = 0; k < times.size(); ++k)
        traj.append(times[k], aggregate_counts(states[k]));
    return traj;
}

MeanFieldProcess::MeanFieldProcess(ProbabilityState p0, std::shared_ptr<const TransmissionMatrix> t_matrix,
                                   Eigen::VectorXd gamma)
    : n_(p0.size()), gamma_(std::move(gamma)), x_(3 * static_cast<Eigen::Index>(p0.size())),
      stepper_(3 * static_cast<Eigen::Index>(p0.size()))
{
    p0.validate(kProbabilityTolerance);
    if (static_cast<std::size_t>(gamma_.size()) != n_)
        throw DimensionError("recovery-rate vector does not match probability state");
    if ((gamma_.array() < 0.0).any() || !gamma_.allFinite())
        throw DomainError("recovery rates must be finite and non-negative");
    const auto n = static_cast<Eigen::Index>(n_);
    x_ << p0.s, p0.i, p0.r;
    set_transmission(std::move(t_matrix));

    rhs_ = [this, n](double, const StateVector &x, StateVector &dx) {
        const Eigen::VectorXd force = matrix_->incoming(x.segment(n, n));
        const auto infection = (x.segment(0, n).array() * force.array()).eval();
        const auto recovery = (gamma_.array() * x.segment(n, n).array()).eval();
        dx.segment(0, n) = -infection.matrix();
        dx.segment(n, n) = (infection - recovery).matrix();
        dx.segment(2 * n, n) = recovery.matrix();
    };
}

void MeanFieldProcess::set_transmission(std::shared_ptr<const TransmissionMatrix> matrix)
{
    if (!matrix || matrix->size() != n_)
        throw DimensionError("transmission matrix does not match probability state");
    matrix_ = std::move(matrix);
}

CompartmentState MeanFieldProcess::counts() const
{
    const auto n = static_cast<Eigen::Index>(n_);
    return {x_.segment(0, n).sum(), x_.segment(n, n).sum(), x_.segment(2 * n, n).sum(), 0.0};
}

ProbabilityState MeanFieldProcess::state() const
{
    const auto n = static_cast<Eigen::Index>(n_);
    return {x_.segment(0, n), x_.segment(n, n), x_.segment(2 * n, n)};
}

void MeanFieldProcess::advance(double t, double dt)
{
    if (!(dt > 0.0))
        throw DomainError("time step must be positive");
    stepper_.step(rhs_, t, x_, dt);

    const auto n = static_cast<Eigen::Index>(n_);
    for (Eigen::Index a = 0; a < n; ++a) {
        const double ps = x_[a], pi = x_[n + a], pr = x_[2 * n + a];
        const bool in_range = ps >= -kProbabilityTolerance && ps <= 1.0 + kProbabilityTolerance &&
                              pi >= -kProbabilityTolerance && pi <= 1.0 + kProbabilityTolerance &&
                              pr >= -kProbabilityTolerance && pr <= 1.0 + kProbabilityTolerance;
        if (!in_range || !(std::abs(ps + pi + pr - 1.0) <= kProbabilityTolerance)) {
            std::ostringstream msg;
            msg << "mean-field probabilities of agent " << a << " left [0, 1] at t = " << t + dt
                << "; reduce the time step";
            throw IntegrationError(msg.str(), t + dt);
        }
    }
}

double MeanFieldProcess::vaccinate(double fraction, std::uint64_t)
{
    if (!(fraction >= 0.0 && fraction <= 1.0))
        throw DomainError("vaccination fraction must lie in [0, 1]");
    const auto n = static_cast<Eigen::Index>(n_);
    double moved = 0.0;
    for (Eigen::Index a = 0; a < n; ++a) {
        const double mass = fraction * x_[a];
        x_[a] -= mass;
        x_[2 * n + a] += mass;
        moved += mass;
    }
    return moved;
}

ProbabilityTrajectory integrate_meanfield(const ProbabilityState &p0, const TransmissionMatrix &t_matrix,
                                          const Eigen::VectorXd &gamma, double dt, double t_end)
{
    const auto grid = time_grid(t_end, dt);
    std::shared_ptr<const TransmissionMatrix> view(std::shared_ptr<const TransmissionMatrix>(), &t_matrix);
    MeanFieldProcess process(p0, view, gamma);

    ProbabilityTrajectory out;
    out.times = grid;
    out.states.reserve(grid.size());
    out.states.push_back(process.state());
    for (std::size_t k = 1; k < grid.size(); ++k) {
        process.advance(grid[k - 1], grid[k] - grid[k - 1]);
        out.states.push_back(process.state());
    }
    return out;
}

CompartmentState aggregate_counts(const ProbabilityState &p)
{
    return {p.s.sum(), p.i.sum(), p.r.sum(), 0.0};
}

ProbabilityState uniform_probability_state(const CompartmentState &state, std::size_t n)
{
    if (n == 0)
        throw DomainError("uniform probability state needs at least one agent");
    const auto total = static_cast<double>(n);
    if (state.d != 0.0)
        throw DomainError("mean-field states carry no deaths");
    if (!(std::abs(state.total() - total) <= 1e-12 * total))
        throw DomainError("compartment sizes do not sum to the number of agents");
    if (state.s < 0 || state.i < 0 || state.r < 0)
        throw DomainError("compartment sizes must be non-negative");
    const auto size = static_cast<Eigen::Index>(n);
    return {Eigen::VectorXd::Constant(size, state.s / total), Eigen::VectorXd::Constant(size, state.i / total),
            Eigen::VectorXd::Constant(size, state.r / total)};
}

double EquivalentParams::r0() const
{
    if (gamma_eff == 0.0)
        throw DomainError("reproduction number undefined: mean recovery rate is zero");
    return beta_eff / gamma_eff;
}

EquivalentParams aggregate_equivalent_params(const TransmissionMatrix &t_matrix, const Eigen::VectorXd &gamma,
                                             std::size_t n)
{
    if (n == 0)
        throw DomainError("equivalent parameters need at least one agent");
    if (t_matrix.size() != n || static_cast<std::size_t>(gamma.size()) != n)
        throw DimensionError("transmission matrix and recovery rates must both cover n agents");

    ExactSum rates;
    for (AgentId j = 0; j < n; ++j)
        t_matrix.for_each_outgoing(j, [&](AgentId, double r) { rates.add(r); });
    ExactSum recovery;
    for (Eigen::Index a = 0; a < gamma.size(); ++a)
        recovery.add(gamma[a]);

    const auto count = static_cast<double>(n);
    return {rates.divided_by(count * count), recovery.divided_by(count)};
}

EpidemicParams homogeneous_reduction(double beta, const ContactNetwork &net, double gamma)
{
    const double n_avg = average_degree(net);
    EpidemicParams out;
    out.beta = beta * (n_avg / static_cast<double>(net.n_agents()));
    out.gamma = gamma;
    return out;
}

} // namespace epinet
