#include "epinet/econ.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "epinet/error.hpp"

namespace epinet {

namespace {

std::string trim(const std::string &s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv(const std::string &line)
{
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
        cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',')
        cells.emplace_back();
    return cells;
}

double parse_number(const std::string &cell, std::size_t line, std::size_t column)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(cell, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (cell.empty() || used != cell.size() || !std::isfinite(v))
        throw ParseError("expected a finite number, got '" + cell + "'", line, column);
    return v;
}

} // namespace

IOTable::IOTable(std::vector<std::string> sectors, Eigen::MatrixXd coefficients, Eigen::VectorXd final_demand,
                 Eigen::VectorXd labor_share)
    : sectors_(std::move(sectors)), a_(std::move(coefficients)), demand_(std::move(final_demand)),
      labor_(std::move(labor_share))
{
    const auto n = static_cast<Eigen::Index>(sectors_.size());
    if (n == 0)
        throw DimensionError("input-output table needs at least one sector");
    if (a_.rows() != n || a_.cols() != n || demand_.size() != n || labor_.size() != n)
        throw DimensionError("input-output table dimensions do not match the number of sectors");
    for (std::size_t i = 0; i < sectors_.size(); ++i) {
        if (sectors_[i].empty())
            throw DomainError("sector names must be non-empty");
        for (std::size_t j = 0; j < i; ++j)
            if (sectors_[i] == sectors_[j])
                throw DomainError("duplicate sector name '" + sectors_[i] + "'");
    }
    if (!a_.allFinite() || (a_.array() < 0.0).any())
        throw DomainError("technical coefficients must be finite and non-negative");
    if (!demand_.allFinite() || (demand_.array() < 0.0).any())
        throw DomainError("final demand must be finite and non-negative");
    if (!labor_.allFinite() || (labor_.array() < 0.0).any() || (labor_.array() > 1.0).any())
        throw DomainError("labor shares must lie in [0, 1]");

    spectral_radius_ = Eigen::EigenSolver<Eigen::MatrixXd>(a_, false).eigenvalues().cwiseAbs().maxCoeff();
    if (!(spectral_radius_ < 1.0)) {
        std::ostringstream msg;
        msg << "economy is not productive: spectral radius of A is " << spectral_radius_;
        throw DomainError(msg.str());
    }
    lu_.compute(Eigen::MatrixXd::Identity(n, n) - a_);
    baseline_ = solve(demand_);
}

std::optional<std::size_t> IOTable::find(const std::string &name) const
{
    const auto it = std::find(sectors_.begin(), sectors_.end(), name);
    if (it == sectors_.end())
        return std::nullopt;
    return static_cast<std::size_t>(it - sectors_.begin());
}

Eigen::VectorXd IOTable::solve(const Eigen::VectorXd &demand) const
{
    if (demand.size() != a_.rows())
        throw DimensionError("demand vector does not match the number of sectors");
    Eigen::VectorXd x = lu_.solve(demand);
    // One refinement step keeps the residual near rounding level for
    // ill-conditioned tables.
    const Eigen::VectorXd r = demand - (x - a_ * x);
    x += lu_.solve(r);
    return x;
}

IOTable parse_io_table(std::istream &in)
{
    std::vector<std::pair<std::size_t, std::string>> rows;
    std::string line;
    for (std::size_t no = 1; std::getline(in, line); ++no) {
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#')
            continue;
        rows.emplace_back(no, t);
    }
    if (rows.empty())
        throw ParseError("empty input-output table", 1, 1);

    std::vector<std::string> sectors = split_csv(rows.front().second);
    const std::size_t n = sectors.size();
    for (std::size_t c = 0; c < n; ++c)
        if (sectors[c].empty())
            throw ParseError("empty sector name in header", rows.front().first, c + 1);
    if (rows.size() != n + 3)
        throw ParseError("expected " + std::to_string(n + 3) + " rows (header, " + std::to_string(n) +
                             " coefficient rows, final demand, labor share), found " + std::to_string(rows.size()),
                         rows.back().first, 1);

    auto numeric_row = [&](std::size_t r) {
        const auto &[no, text] = rows[r];
        const auto cells = split_csv(text);
        if (cells.size() != n)
            throw ParseError("expected " + std::to_string(n) + " values, found " + std::to_string(cells.size()), no,
                             1);
        Eigen::VectorXd v(static_cast<Eigen::Index>(n));
        for (std::size_t c = 0; c < n; ++c)
            v[static_cast<Eigen::Index>(c)] = parse_number(cells[c], no, c + 1);
        return v;
    };

    Eigen::MatrixXd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r)
        a.row(static_cast<Eigen::Index>(r)) = numeric_row(r + 1).transpose();
    Eigen::VectorXd demand = numeric_row(n + 1);
    Eigen::VectorXd labor = numeric_row(n + 2);
    return IOTable(std::move(sectors), std::move(a), std::move(demand), std::move(labor));
}

IOTable read_io_table(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open input-output table '" + path.string() + "'");
    return parse_io_table(in);
}

void write_io_table(std::ostream &out, const IOTable &table)
{
    const auto n = static_cast<Eigen::Index>(table.n_sectors());
    out << std::setprecision(17);
    auto write_row = [&](const auto &values) {
        for (Eigen::Index c = 0; c < n; ++c)
            out << (c ? "," : "") << values[c];
        out << '\n';
    };
    for (Eigen::Index c = 0; c < n; ++c)
        out << (c ? "," : "") << table.sectors()[static_cast<std::size_t>(c)];
    out << '\n';
    for (Eigen::Index r = 0; r < n; ++r)
        write_row(table.coefficients().row(r));
    write_row(table.final_demand());
    write_row(table.labor_share());
}

Eigen::VectorXd leontief_output(const IOTable &table, const Eigen::VectorXd &demand)
{
    if (!demand.allFinite() || (demand.array() < 0.0).any())
        throw DomainError("demand must be finite and non-negative");
    Eigen::VectorXd x = table.solve(demand);
    const double residual = (x - table.coefficients() * x - demand).norm();
    if (residual > 1e-9 * demand.norm())
        throw DomainError("Leontief solve residual exceeds tolerance");
    return x;
}

ShockMapping ShockMapping::from_named(const IOTable &table, double sickness_absence,
                                      const std::map<std::string, double> &closure,
                                      const std::map<std::string, double> &demand_sensitivity)
{
    std::vector<std::string> problems;
    ShockMapping m;
    m.sickness_absence = sickness_absence;
    const auto n = static_cast<Eigen::Index>(table.n_sectors());

    auto resolve = [&](const std::map<std::string, double> &named, const char *what) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
        for (const auto &[name, value] : named)
            if (!table.find(name))
                problems.push_back(std::string(what) + ": unknown sector '" + name + "'");
        for (Eigen::Index s = 0; s < n; ++s) {
            const auto &name = table.sectors()[static_cast<std::size_t>(s)];
            const auto it = named.find(name);
            if (it == named.end())
                problems.push_back(std::string(what) + ": missing sector '" + name + "'");
            else
                v[s] = it->second;
        }
        return v;
    };
    m.closure = resolve(closure, "closure");
    m.demand_sensitivity = resolve(demand_sensitivity, "demand_sensitivity");
    if (!problems.empty())
        throw ValidationError(std::move(problems));
    return m;
}

SectorShock epidemic_shock(const IOTable &table, const CompartmentState &state, bool lockdown,
                           const ShockMapping &mapping)
{
    const auto n = static_cast<Eigen::Index>(table.n_sectors());
    if (mapping.closure.size() != n || mapping.demand_sensitivity.size() != n)
        throw DimensionError("shock mapping does not cover every sector");
    const double total = state.total();
    const double infected_share = total > 0.0 ? state.i / total : 0.0;
    const double on = lockdown ? 1.0 : 0.0;

    SectorShock shock;
    shock.labor_multiplier = (1.0 - table.labor_share().array() * (infected_share * mapping.sickness_absence) -
                              mapping.closure.array() * on)
                                 .cwiseMax(0.0)
                                 .cwiseMin(1.0);
    shock.demand_multiplier = (1.0 - mapping.demand_sensitivity.array() * on).cwiseMax(0.0);
    return shock;
}

ShockedOutput shocked_output(const IOTable &table, const SectorShock &shock)
{
    const auto n = static_cast<Eigen::Index>(table.n_sectors());
    if (shock.labor_multiplier.size() != n || shock.demand_multiplier.size() != n)
        throw DimensionError("shock does not match the number of sectors");
    if ((shock.labor_multiplier.array() < 0.0).any() || (shock.labor_multiplier.array() > 1.0).any() ||
        (shock.demand_multiplier.array() < 0.0).any())
        throw DomainError("shock multipliers out of range");

    const Eigen::VectorXd demand = shock.demand_multiplier.cwiseProduct(table.final_demand());
    const Eigen::VectorXd cap = shock.labor_multiplier.cwiseProduct(table.baseline_output());
    ShockedOutput out;
    out.output = leontief_output(table, demand).cwiseMin(cap);
    const double base = table.baseline_output().sum();
    out.index = base > 0.0 ? out.output.sum() / base : 1.0;
    return out;
}

void LockdownPolicy::validate() const
{
    std::vector<std::string> problems;
    if (!(on_threshold >= 0.0))
        problems.emplace_back("lockdown on-threshold must be non-negative");
    if (!(off_threshold >= 0.0) || off_threshold > on_threshold)
        problems.emplace_back("lockdown off-threshold must lie in [0, on-threshold]");
    if (!std::isfinite(transmission_factor) || transmission_factor < 0.0)
        problems.emplace_back("lockdown transmission factor must be finite and non-negative");
    if (!problems.empty())
        throw ValidationError(std::move(problems));
}

CoupledTrajectory simulate_coupled(EpidemicProcess &process, const TransmissionMatrix &base,
                                   const InterventionSchedule &schedule, const IOTable &table,
                                   const ShockMapping &mapping, const std::optional<LockdownPolicy> &policy,
                                   double dt, double t_end, std::uint64_t seed,
                                   const std::optional<HealthcareCapacity> &capacity)
{
    if (policy)
        policy->validate();
    const double n = static_cast<double>(process.population());

    CoupledTrajectory out;
    out.sectors = table.sectors();
    bool lockdown = false;
    std::vector<InterventionEvent> switches;

    RunHooks hooks;
    hooks.capacity = capacity;
    if (policy) {
        hooks.transmission_factor = [&](double t, const CompartmentState &c) {
            const double share = c.i / n;
            if (!lockdown && share > policy->on_threshold) {
                lockdown = true;
                switches.push_back({t, "activate", "lockdown"});
            } else if (lockdown && share < policy->off_threshold) {
                lockdown = false;
                switches.push_back({t, "deactivate", "lockdown"});
            }
            return lockdown ? policy->transmission_factor : 1.0;
        };
    }
    hooks.on_sample = [&](double, const CompartmentState &c) {
        const auto result = shocked_output(table, epidemic_shock(table, c, lockdown, mapping));
        out.sector_output.push_back(result.output);
        out.index.push_back(result.index);
        out.lockdown.push_back(lockdown);
    };

    out.epidemic = run_scheduled(process, base, schedule, dt, t_end, seed, hooks);
    auto &log = out.epidemic.meta.interventions;
    log.insert(log.end(), switches.begin(), switches.end());
    std::stable_sort(log.begin(), log.end(),
                     [](const InterventionEvent &a, const InterventionEvent &b) { return a.time < b.time; });
    return out;
}

} // namespace epinet
