#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "epinet/interventions.hpp"
#include "epinet/process.hpp"
#include "epinet/types.hpp"

namespace epinet {

/// Input-output table of a linear multi-sector economy. coefficients(i, j)
/// is the input from sector i needed per unit output of sector j.
///
/// The constructor rejects tables that are not productive (spectral radius
/// of A at least one), so every later solve is well posed.
class IOTable {
public:
    IOTable(std::vector<std::string> sectors, Eigen::MatrixXd coefficients, Eigen::VectorXd final_demand,
            Eigen::VectorXd labor_share);

    std::size_t n_sectors() const noexcept { return sectors_.size(); }
    const std::vector<std::string> &sectors() const noexcept { return sectors_; }
    const Eigen::MatrixXd &coefficients() const noexcept { return a_; }
    const Eigen::VectorXd &final_demand() const noexcept { return demand_; }
    const Eigen::VectorXd &labor_share() const noexcept { return labor_; }
    double spectral_radius() const noexcept { return spectral_radius_; }

    /// Gross output at the table's own final demand.
    const Eigen::VectorXd &baseline_output() const noexcept { return baseline_; }

    /// Index of a sector by name, if present.
    std::optional<std::size_t> find(const std::string &name) const;

    /// Solves (I - A) x = demand.
    Eigen::VectorXd solve(const Eigen::VectorXd &demand) const;

private:
    std::vector<std::string> sectors_;
    Eigen::MatrixXd a_;
    Eigen::VectorXd demand_;
    Eigen::VectorXd labor_;
    double spectral_radius_ = 0.0;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    Eigen::VectorXd baseline_;
};

/// Reads the CSV layout: a header of sector names, n coefficient rows, a
/// final-demand row and a labor-share row. Throws ParseError with the line
/// of the first malformed row, or the table's own validation errors.
IOTable parse_io_table(std::istream &in);
IOTable read_io_table(const std::filesystem::path &path);
void write_io_table(std::ostream &out, const IOTable &table);

/// Gross output x with x = A x + demand. Throws DomainError on negative
/// demand or when the residual exceeds 1e-9 * |demand|.
Eigen::VectorXd leontief_output(const IOTable &table, const Eigen::VectorXd &demand);

struct SectorShock {
    Eigen::VectorXd labor_multiplier;  // in [0, 1]
    Eigen::VectorXd demand_multiplier; // >= 0
};

/// Per-sector sensitivities of the economy to the epidemic, aligned with
/// the table's sectors.
struct ShockMapping {
    double sickness_absence = 0.0;
    Eigen::VectorXd closure;
    Eigen::VectorXd demand_sensitivity;

    /// Builds from named sensitivities. Sectors missing from a map, or names
    /// the table does not know, are reported together in a ValidationError.
    static ShockMapping from_named(const IOTable &table, double sickness_absence,
                                   const std::map<std::string, double> &closure,
                                   const std::map<std::string, double> &demand_sensitivity);
};

/// labor = clamp(1 - labor_share * (I / N) * sickness_absence - closure * lockdown, 0, 1)
/// demand = max(0, 1 - demand_sensitivity * lockdown)
SectorShock epidemic_shock(const IOTable &table, const CompartmentState &state, bool lockdown,
                           const ShockMapping &mapping);

struct ShockedOutput {
    Eigen::VectorXd output;
    double index = 1.0; // total output over total baseline output
};

/// Leontief solve at the shocked demand, then each sector capped at its
/// labor multiplier times baseline output.
ShockedOutput shocked_output(const IOTable &table, const SectorShock &shock);

/// Lockdown with hysteresis: switched on when I / N rises above
/// `on_threshold`, off again when it falls below `off_threshold`.
struct LockdownPolicy {
    double on_threshold = 1.0;
    double off_threshold = 0.0;
    double transmission_factor = 1.0;

    void validate() const;
};

struct CoupledTrajectory {
    Trajectory epidemic;
    std::vector<std::string> sectors;
    std::vector<Eigen::VectorXd> sector_output; // one per sample
    std::vector<double> index;
    std::vector<bool> lockdown;
};

/// Runs the epidemic process under the schedule and the lockdown policy,
/// solving the economy at every sample. The policy is evaluated at each step
/// boundary and, while on, scales every transmission rate and marks the
/// lockdown flag used by epidemic_shock.
CoupledTrajectory simulate_coupled(EpidemicProcess &process, const TransmissionMatrix &base,
                                   const InterventionSchedule &schedule, const IOTable &table,
                                   const ShockMapping &mapping, const std::optional<LockdownPolicy> &policy,
                                   double dt, double t_end, std::uint64_t seed,
                                   const std::optional<HealthcareCapacity> &capacity = std::nullopt);

} // namespace epinet
