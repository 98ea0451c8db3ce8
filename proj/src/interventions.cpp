#include "epinet/interventions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "epinet/error.hpp"
#include "epinet/integrator.hpp"
#include "epinet/random.hpp"

namespace epinet {

namespace {

bool is_fraction(double v)
{
    return v >= 0.0 && v <= 1.0;
}

std::size_t rounded_share(double fraction, std::size_t count)
{
    return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(count)));
}

std::vector<AgentPair> pick(const std::vector<AgentPair> &candidates, double fraction, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<AgentPair> out;
    for (std::size_t idx : sample_without_replacement(candidates.size(), rounded_share(fraction, candidates.size()), rng))
        out.push_back(candidates[idx]);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

std::string Intervention::describe() const
{
    std::ostringstream out;
    std::visit(
        [&out](const auto &k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, DensityReduction>)
                out << "density_reduction(fraction=" << k.fraction << ")";
            else if constexpr (std::is_same_v<K, Compartmentalize>)
                out << "compartmentalize(communities=" << k.communities.size() << ", cut_fraction=" << k.cut_fraction
                    << ")";
            else if constexpr (std::is_same_v<K, Vaccinate>)
                out << "vaccinate(fraction=" << k.fraction << ")";
            else
                out << "transmission_scale(factor=" << k.factor << ")";
        },
        kind);
    return out.str();
}

std::vector<std::string> InterventionSchedule::problems(const std::vector<Intervention> &entries,
                                                        std::size_t population)
{
    std::vector<std::string> out;
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const auto &e = entries[k];
        const std::string where = "intervention " + std::to_string(k) + " (" + e.describe() + "): ";
        std::visit(
            [&](const auto &kind) {
                using K = std::decay_t<decltype(kind)>;
                if constexpr (std::is_same_v<K, DensityReduction> || std::is_same_v<K, Vaccinate>) {
                    if (!is_fraction(kind.fraction))
                        out.push_back(where + "fraction must lie in [0, 1]");
                } else if constexpr (std::is_same_v<K, Compartmentalize>) {
                    if (!is_fraction(kind.cut_fraction))
                        out.push_back(where + "cut_fraction must lie in [0, 1]");
                    try {
                        community_labels(kind.communities, population);
                    } catch (const DomainError &err) {
                        out.push_back(where + err.what());
                    }
                } else {
                    if (!std::isfinite(kind.factor) || kind.factor < 0.0)
                        out.push_back(where + "factor must be finite and non-negative");
                }
            },
            e.kind);
        if (!std::isfinite(e.activation) || e.activation < 0.0)
            out.push_back(where + "activation time must be finite and non-negative");
        if (e.deactivation && !(*e.deactivation > e.activation))
            out.push_back(where + "deactivation must come after activation");
        if (e.deactivation && e.duration)
            out.push_back(where + "give either a deactivation time or a duration, not both");
        if (e.duration && !(*e.duration > 0.0))
            out.push_back(where + "duration must be positive");
        if (e.trigger_infected_fraction && !is_fraction(*e.trigger_infected_fraction))
            out.push_back(where + "trigger must be a fraction of the population");
        if (!e.reversible() && (e.deactivation || e.duration))
            out.push_back(where + "vaccination is irreversible and cannot be deactivated");
    }
    return out;
}

InterventionSchedule::InterventionSchedule(std::vector<Intervention> entries, std::size_t population)
{
    auto found = problems(entries, population);
    if (!found.empty())
        throw ValidationError(std::move(found));
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Intervention &a, const Intervention &b) { return a.activation < b.activation; });
    entries_ = std::move(entries);
}

std::vector<std::size_t> community_labels(const Communities &communities, std::size_t n)
{
    constexpr std::size_t unassigned = static_cast<std::size_t>(-1);
    std::vector<std::size_t> labels(n, unassigned);
    for (std::size_t c = 0; c < communities.size(); ++c) {
        for (AgentId a : communities[c]) {
            if (a >= n)
                throw DomainError("community member " + std::to_string(a) + " is not an agent");
            if (labels[a] != unassigned)
                throw DomainError("agent " + std::to_string(a) + " belongs to more than one community");
            labels[a] = c;
        }
    }
    for (std::size_t a = 0; a < n; ++a)
        if (labels[a] == unassigned)
            throw DomainError("agent " + std::to_string(a) + " belongs to no community");
    return labels;
}

std::vector<AgentPair> select_density_reduction(const TransmissionMatrix &t_matrix, double fraction,
                                                std::uint64_t seed)
{
    if (!is_fraction(fraction))
        throw DomainError("density reduction fraction must lie in [0, 1]");
    return pick(t_matrix.symmetric_pairs(), fraction, seed);
}

std::vector<AgentPair> select_compartment_cuts(const TransmissionMatrix &t_matrix, const Communities &communities,
                                               double cut_fraction, std::uint64_t seed)
{
    if (!is_fraction(cut_fraction))
        throw DomainError("cut fraction must lie in [0, 1]");
    const auto labels = community_labels(communities, t_matrix.size());
    std::vector<AgentPair> crossing;
    for (const auto &pair : t_matrix.symmetric_pairs())
        if (labels[pair.first] != labels[pair.second])
            crossing.push_back(pair);
    return pick(crossing, cut_fraction, seed);
}

TransmissionMatrix remove_pairs(const TransmissionMatrix &t_matrix, const std::vector<AgentPair> &pairs)
{
    TransmissionMatrix out = t_matrix;
    for (const auto &[a, b] : pairs)
        out.zero_pair(a, b);
    return out;
}

TransmissionMatrix apply_density_reduction(const TransmissionMatrix &t_matrix, double fraction, std::uint64_t seed)
{
    return remove_pairs(t_matrix, select_density_reduction(t_matrix, fraction, seed));
}

TransmissionMatrix apply_compartmentalization(const TransmissionMatrix &t_matrix, const Communities &communities,
                                              double cut_fraction, std::uint64_t seed)
{
    return remove_pairs(t_matrix, select_compartment_cuts(t_matrix, communities, cut_fraction, seed));
}

AgentPopulation apply_vaccination(const AgentPopulation &pop, double fraction, std::uint64_t seed)
{
    AgentPopulation out = pop;
    vaccinate_susceptibles(out.states, fraction, seed);
    return out;
}

ProbabilityState apply_vaccination(const ProbabilityState &p, double fraction)
{
    if (!is_fraction(fraction))
        throw DomainError("vaccination fraction must lie in [0, 1]");
    ProbabilityState out = p;
    const Eigen::VectorXd moved = fraction * p.s;
    out.s -= moved;
    out.r += moved;
    return out;
}

Trajectory run_scheduled(EpidemicProcess &process, const TransmissionMatrix &base,
                         const InterventionSchedule &schedule, double dt, double t_end, std::uint64_t run_seed,
                         const RunHooks &hooks)
{
    const std::size_t n = process.population();
    if (base.size() != n)
        throw DimensionError("transmission matrix does not match population size");
    const auto grid = time_grid(t_end, dt);
    const auto &entries = schedule.entries();

    enum class Phase { Pending, Active, Done };
    std::vector<Phase> phase(entries.size(), Phase::Pending);
    std::vector<double> ends(entries.size(), 0.0);
    std::vector<std::vector<AgentPair>> removed(entries.size());
    const std::uint64_t stream = splitmix64(run_seed);

    Trajectory traj;
    double extra_factor = 1.0;

    auto rebuild = [&] {
        auto effective = std::make_shared<TransmissionMatrix>(base);
        for (std::size_t k = 0; k < entries.size(); ++k)
            if (phase[k] == Phase::Active)
                for (const auto &[a, b] : removed[k])
                    effective->zero_pair(a, b);
        for (std::size_t k = 0; k < entries.size(); ++k)
            if (phase[k] == Phase::Active)
                if (const auto *s = std::get_if<TransmissionScale>(&entries[k].kind))
                    effective->scale(s->factor);
        if (extra_factor != 1.0)
            effective->scale(extra_factor);
        process.set_transmission(std::move(effective));
    };
    rebuild();

    auto log = [&](double t, const char *action, const std::string &what) {
        traj.meta.interventions.push_back({t, action, what});
    };

    for (std::size_t step = 0; step < grid.size(); ++step) {
        const double t = grid[step];
        const bool boundary = step + 1 < grid.size();

        if (boundary) {
            bool changed = false;
            const CompartmentState before = process.counts();

            for (std::size_t k = 0; k < entries.size(); ++k) {
                if (phase[k] == Phase::Active && t >= ends[k]) {
                    phase[k] = Phase::Done;
                    changed = true;
                    log(t, "deactivate", entries[k].describe());
                }
            }

            for (std::size_t k = 0; k < entries.size(); ++k) {
                const auto &e = entries[k];
                if (phase[k] != Phase::Pending || t < e.activation)
                    continue;
                if (e.trigger_infected_fraction && !(before.i / static_cast<double>(n) > *e.trigger_infected_fraction))
                    continue;

                const std::uint64_t seed = derive_seed(stream, k);
                if (const auto *v = std::get_if<Vaccinate>(&e.kind)) {
                    traj.meta.vaccinated += process.vaccinate(v->fraction, seed);
                    phase[k] = Phase::Done;
                    log(t, "activate", e.describe());
                    continue;
                }

                ends[k] = e.deactivation ? *e.deactivation
                          : e.duration   ? t + *e.duration
                                         : std::numeric_limits<double>::infinity();
                if (t >= ends[k]) {
                    // The whole window fell between two step boundaries.
                    phase[k] = Phase::Done;
                    log(t, "expired", e.describe());
                    continue;
                }
                if (const auto *d = std::get_if<DensityReduction>(&e.kind))
                    removed[k] = select_density_reduction(base, d->fraction, seed);
                else if (const auto *c = std::get_if<Compartmentalize>(&e.kind))
                    removed[k] = select_compartment_cuts(base, c->communities, c->cut_fraction, seed);
                phase[k] = Phase::Active;
                changed = true;
                log(t, "activate", e.describe());
            }

            const CompartmentState after = process.counts();
            if (hooks.transmission_factor) {
                const double factor = hooks.transmission_factor(t, after);
                if (factor != extra_factor) {
                    extra_factor = factor;
                    changed = true;
                }
            }
            if (changed)
                rebuild();
            if (hooks.capacity)
                process.set_death_rate_multiplier(after.i > hooks.capacity->capacity ? hooks.capacity->death_multiplier
                                                                                    : 1.0);
        }

        const CompartmentState now = process.counts();
        traj.append(t, now);
        if (hooks.on_sample)
            hooks.on_sample(t, now);
        if (boundary)
            process.advance(t, grid[step + 1] - t);
    }
    return traj;
}

Trajectory run_scheduled_abm(const AgentPopulation &pop0, const TransmissionMatrix &base,
                             const InterventionSchedule &schedule, double dt, double t_end, std::uint64_t seed,
                             const RunHooks &hooks)
{
    std::shared_ptr<const TransmissionMatrix> view(std::shared_ptr<const TransmissionMatrix>(), &base);
    AbmProcess process(pop0, view, seed);
    Trajectory traj = run_scheduled(process, base, schedule, dt, t_end, seed, hooks);
    traj.meta.model = "abm";
    traj.meta.seed = seed;
    return traj;
}

Trajectory run_scheduled_meanfield(const ProbabilityState &p0, const TransmissionMatrix &base,
                                   const Eigen::VectorXd &gamma, const InterventionSchedule &schedule, double dt,
                                   double t_end, std::uint64_t seed, const RunHooks &hooks)
{
    std::shared_ptr<const TransmissionMatrix> view(std::shared_ptr<const TransmissionMatrix>(), &base);
    MeanFieldProcess process(p0, view, gamma);
    Trajectory traj = run_scheduled(process, base, schedule, dt, t_end, seed, hooks);
    traj.meta.model = "meanfield";
    return traj;
}

EnsembleResult monte_carlo_scheduled(const AgentPopulation &pop0, const TransmissionMatrix &base,
                                     const InterventionSchedule &schedule, double dt, double t_end,
                                     std::size_t n_replicas, std::uint64_t base_seed, unsigned threads,
                                     const std::optional<HealthcareCapacity> &capacity)
{
    return run_ensemble(
        n_replicas, base_seed,
        [&](std::size_t, std::uint64_t seed) {
            RunHooks hooks;
            hooks.capacity = capacity;
            return run_scheduled_abm(pop0, base, schedule, dt, t_end, seed, hooks);
        },
        threads);
}

} // namespace epinet
