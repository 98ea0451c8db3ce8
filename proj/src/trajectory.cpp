#include "epinet/trajectory_stats.hpp"

#include <cmath>

#include "epinet/error.hpp"

namespace epinet {

void EpidemicParams::validate() const
{
    auto check = [](double v, const char *name) {
        if (!std::isfinite(v) || v < 0.0)
            throw DomainError(std::string(name) + " must be finite and non-negative");
    };
    check(beta, "beta");
    check(gamma, "gamma");
    if (mu)
        check(*mu, "mu");
    if (xi)
        check(*xi, "xi");
}

void Trajectory::append(double t, const CompartmentState &state)
{
    if (!times_.empty() && !(t > times_.back()))
        throw DomainError("trajectory times must be strictly increasing");
    times_.push_back(t);
    states_.push_back(state);
}

SummaryStats trajectory_stats(const Trajectory &traj)
{
    if (traj.empty())
        throw DomainError("summary statistics of an empty trajectory");

    const auto &states = traj.states();
    const auto &times = traj.times();
    std::size_t peak = 0;
    for (std::size_t k = 1; k < states.size(); ++k)
        if (states[k].i > states[peak].i)
            peak = k;

    SummaryStats out;
    out.peak_infected = states[peak].i;
    out.peak_time = times[peak];
    out.time_to_peak = times[peak] - times.front();
    out.final_size = states.back().r + states.back().d;
    return out;
}

std::vector<std::size_t> local_maxima(std::span<const double> values)
{
    std::vector<std::size_t> out;
    const std::size_t n = values.size();
    std::size_t k = 1;
    while (k + 1 < n) {
        if (values[k] > values[k - 1]) {
            // Walk across a plateau and see which way it leaves.
            std::size_t end = k;
            while (end + 1 < n && values[end + 1] == values[k])
                ++end;
            if (end + 1 < n && values[end + 1] < values[k])
                out.push_back(k);
            k = end + 1;
        } else {
            ++k;
        }
    }
    return out;
}

std::vector<double> infected_series(const Trajectory &traj)
{
    std::vector<double> out;
    out.reserve(traj.size());
    for (const auto &s : traj.states())
        out.push_back(s.i);
    return out;
}

} // namespace epinet
