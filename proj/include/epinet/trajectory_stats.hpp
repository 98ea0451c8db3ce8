#pragma once

#include <span>
#include <vector>

#include "epinet/types.hpp"

namespace epinet {

struct SummaryStats {
    double peak_infected = 0.0;
    double peak_time = 0.0;
    double time_to_peak = 0.0; // peak_time minus the first sample time
    double final_size = 0.0;   // r + d at the last sample
};

/// Peak of I (first occurrence on ties) and final size. Throws DomainError on
/// an empty trajectory.
SummaryStats trajectory_stats(const Trajectory &traj);

/// Indices of local maxima of a sequence. Runs of equal values count once; a
/// maximum needs a strictly smaller neighbour on both sides, so the endpoints
/// never qualify.
std::vector<std::size_t> local_maxima(std::span<const double> values);

std::vector<double> infected_series(const Trajectory &traj);

} // namespace epinet
