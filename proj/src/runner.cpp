#include "epinet/runner.hpp"

#include <cmath>
#include <fstream>
#include <memory>

#include "epinet/compartmental.hpp"
#include "epinet/econ.hpp"
#include "epinet/error.hpp"
#include "epinet/interventions.hpp"
#include "epinet/meanfield.hpp"
#include "epinet/random.hpp"
#include "epinet/trajectory_stats.hpp"

namespace epinet {

using nlohmann::json;

namespace {

constexpr std::uint64_t kInitialStateStream = 0x696e6974ULL;

json optional_number(const std::optional<double> &v)
{
    return v ? json(*v) : json(nullptr);
}

json intervention_json(const Intervention &iv)
{
    json j;
    std::visit(
        [&j](const auto &k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, DensityReduction>) {
                j["kind"] = "density_reduction";
                j["fraction"] = k.fraction;
            } else if constexpr (std::is_same_v<K, Compartmentalize>) {
                j["kind"] = "compartmentalize";
                j["communities"] = k.communities;
                j["cut_fraction"] = k.cut_fraction;
            } else if constexpr (std::is_same_v<K, Vaccinate>) {
                j["kind"] = "vaccinate";
                j["fraction"] = k.fraction;
            } else {
                j["kind"] = "transmission_scale";
                j["factor"] = k.factor;
            }
        },
        iv.kind);
    j["activation"] = iv.activation;
    j["deactivation"] = optional_number(iv.deactivation);
    j["duration"] = optional_number(iv.duration);
    j["trigger_infected_fraction"] = optional_number(iv.trigger_infected_fraction);
    return j;
}

bool has_deaths(const Scenario &sc)
{
    return sc.kind == CompartmentalKind::SIRD;
}

std::vector<std::string> epidemic_columns(const Scenario &sc)
{
    std::vector<std::string> h{"t", "S", "I", "R"};
    if (has_deaths(sc))
        h.emplace_back("D");
    return h;
}

CsvTable trajectory_table(const Scenario &sc, const Trajectory &traj)
{
    CsvTable table;
    table.header = epidemic_columns(sc);
    const bool deaths = has_deaths(sc);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const auto &s = traj.states()[k];
        std::vector<double> row{traj.times()[k], s.s, s.i, s.r};
        if (deaths)
            row.push_back(s.d);
        table.rows.push_back(std::move(row));
    }
    return table;
}

json log_json(const std::vector<InterventionEvent> &log)
{
    json out = json::array();
    for (const auto &e : log)
        out.push_back({{"time", e.time}, {"action", e.action}, {"description", e.description}});
    return out;
}

json network_json(const Scenario &sc, const ContactNetwork &net)
{
    return {{"generator", sc.network.generator},
            {"agents", net.n_agents()},
            {"entries", net.entry_count()},
            {"average_degree", average_degree(net)},
            {"self_loops", net.has_self_loops()}};
}

/// Early-growth doubling time over [0, w]: w is the first sample where I
/// reaches four times its initial value, or the peak if that comes first.
json doubling_json(const Trajectory &traj)
{
    json out = {{"doubling_time", nullptr}, {"growth_rate", nullptr}, {"window", nullptr}};
    const auto &times = traj.times();
    const auto &states = traj.states();
    if (traj.size() < 2 || !(states.front().i > 0.0))
        return out;
    const auto stats = trajectory_stats(traj);
    double end = stats.peak_time;
    for (std::size_t k = 0; k < traj.size() && times[k] <= stats.peak_time; ++k) {
        if (states[k].i >= 4.0 * states.front().i) {
            end = times[k];
            break;
        }
    }
    if (!(end > times.front())) {
        // Declining from the start: fit while infections remain.
        end = times.front();
        for (std::size_t k = 0; k < traj.size() && states[k].i > 0.0; ++k)
            end = times[k];
    }
    if (!(end > times.front()))
        return out;
    try {
        const auto g = doubling_time(traj, times.front(), end);
        out["growth_rate"] = g.growth_rate;
        out["doubling_time"] = optional_number(g.doubling_time);
        out["window"] = {times.front(), end};
    } catch (const Error &) {
    }
    return out;
}

json summary_json(const Trajectory &traj, double vaccinated)
{
    const auto stats = trajectory_stats(traj);
    const auto &last = traj.back();
    const auto infected = infected_series(traj);
    json out = {{"peak_infected", stats.peak_infected},
                {"peak_time", stats.peak_time},
                {"final_size", last.r + last.d - vaccinated},
                {"final_state", {{"S", last.s}, {"I", last.i}, {"R", last.r}, {"D", last.d}}},
                {"infected_local_maxima", local_maxima(infected).size()},
                {"vaccinated", vaccinated}};
    out.update(doubling_json(traj));
    return out;
}

std::shared_ptr<const TransmissionMatrix> network_matrix(const Scenario &sc, const ContactNetwork &net)
{
    return std::make_shared<const TransmissionMatrix>(transmission_from_network(net, sc.params.beta));
}

void add_equivalent_r0(json &summary, const TransmissionMatrix &t_matrix, const Scenario &sc)
{
    const Eigen::VectorXd gamma = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(sc.population),
                                                            sc.params.removal_rate());
    const auto eq = aggregate_equivalent_params(t_matrix, gamma, sc.population);
    summary["beta_eff"] = eq.beta_eff;
    summary["gamma_eff"] = eq.gamma_eff;
    if (eq.gamma_eff > 0.0) {
        summary["r0_per_pair"] = eq.r0();
        summary["r0"] = eq.beta_eff * static_cast<double>(sc.population) / eq.gamma_eff;
    } else {
        summary["r0_per_pair"] = nullptr;
        summary["r0"] = nullptr;
    }
}

ProbabilityState initial_probabilities(const Scenario &sc)
{
    const std::size_t n = sc.population;
    if (sc.initial_infected_agents.empty())
        return uniform_probability_state({static_cast<double>(n) - sc.initial_infected - sc.initial_recovered,
                                          sc.initial_infected, sc.initial_recovered, 0.0},
                                         n);
    ProbabilityState p = ProbabilityState::all_susceptible(n);
    const double others = static_cast<double>(n - sc.initial_infected_agents.size());
    const double recovered = others > 0.0 ? sc.initial_recovered / others : 0.0;
    p.r.setConstant(recovered);
    p.s.setConstant(1.0 - recovered);
    for (AgentId a : sc.initial_infected_agents) {
        p.s[a] = 0.0;
        p.r[a] = 0.0;
        p.i[a] = 1.0;
    }
    return p;
}

std::vector<InterventionEvent> run_meta(json &meta, const Trajectory &traj)
{
    meta["interventions_log"] = log_json(traj.meta.interventions);
    meta["vaccinated"] = traj.meta.vaccinated;
    return traj.meta.interventions;
}

RunArtifacts run_compartmental(const Scenario &sc)
{
    const double n = static_cast<double>(sc.population);
    const CompartmentState init{n - sc.initial_infected - sc.initial_recovered, sc.initial_infected,
                                sc.initial_recovered, 0.0};
    const Trajectory traj = simulate_compartmental(sc.kind, sc.params, init, sc.run.t_end, sc.run.dt);
    RunArtifacts out;
    out.trajectory = trajectory_table(sc, traj);
    out.summary = summary_json(traj, 0.0);
    out.summary["r0"] = sc.params.removal_rate() > 0.0 ? json(population_reproduction_number(sc.params, n))
                                                       : json(nullptr);
    out.summary["r0_per_pair"] =
        sc.params.removal_rate() > 0.0 ? json(basic_reproduction_number(sc.params)) : json(nullptr);
    run_meta(out.meta, traj);
    return out;
}

RunArtifacts run_abm(const Scenario &sc)
{
    const ContactNetwork net = build_network(sc);
    const auto t_matrix = network_matrix(sc, net);
    const InterventionSchedule schedule(sc.interventions, sc.population);

    std::vector<std::vector<InterventionEvent>> logs(sc.run.replicas);
    std::vector<double> vaccinated(sc.run.replicas, 0.0);
    const auto ensemble = run_ensemble(
        sc.run.replicas, sc.run.seed,
        [&](std::size_t r, std::uint64_t seed) {
            RunHooks hooks;
            hooks.capacity = sc.healthcare;
            Trajectory traj = run_scheduled_abm(initial_population(sc, seed), *t_matrix, schedule, sc.run.dt,
                                                sc.run.t_end, seed, hooks);
            logs[r] = traj.meta.interventions;
            vaccinated[r] = traj.meta.vaccinated;
            return traj;
        },
        sc.run.threads);

    RunArtifacts out;
    const Trajectory mean = ensemble.mean_trajectory();
    out.trajectory = trajectory_table(sc, mean);
    double mean_vaccinated = 0.0;
    for (double v : vaccinated)
        mean_vaccinated += v;
    mean_vaccinated /= static_cast<double>(sc.run.replicas);
    out.summary = summary_json(mean, mean_vaccinated);
    add_equivalent_r0(out.summary, *t_matrix, sc);
    out.meta["network"] = network_json(sc, net);
    out.meta["replica_seeds"] = ensemble.seeds;

    if (sc.run.replicas == 1) {
        out.meta["interventions_log"] = log_json(logs.front());
        out.meta["vaccinated"] = vaccinated.front();
    } else {
        json per_replica = json::array();
        for (const auto &log : logs)
            per_replica.push_back(log_json(log));
        out.meta["interventions_log"] = per_replica;
        out.meta["vaccinated"] = vaccinated;

        const auto dist = outbreak_size_distribution(ensemble);
        out.summary["final_size_distribution"] = {{"mean", dist.mean},
                                                  {"median", dist.median},
                                                  {"max", dist.max},
                                                  {"skewness", optional_number(dist.skewness)},
                                                  {"major_threshold", dist.major_threshold},
                                                  {"major_fraction", dist.major_fraction}};
        // Seeds are written as integers: they do not fit a double exactly.
        std::string replicas = "replica,seed,final_size\n";
        for (std::size_t r = 0; r < sc.run.replicas; ++r)
            replicas += std::to_string(r) + "," + std::to_string(ensemble.seeds[r]) + "," +
                        format_number(ensemble.replica_final_sizes[r]) + "\n";
        out.replicas_csv = std::move(replicas);
    }
    return out;
}

RunArtifacts run_meanfield(const Scenario &sc)
{
    const ContactNetwork net = build_network(sc);
    const auto t_matrix = network_matrix(sc, net);
    const InterventionSchedule schedule(sc.interventions, sc.population);
    const Eigen::VectorXd gamma = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(sc.population), sc.params.gamma);
    const Trajectory traj = run_scheduled_meanfield(initial_probabilities(sc), *t_matrix, gamma, schedule, sc.run.dt,
                                                    sc.run.t_end, sc.run.seed);
    RunArtifacts out;
    out.trajectory = trajectory_table(sc, traj);
    out.summary = summary_json(traj, traj.meta.vaccinated);
    add_equivalent_r0(out.summary, *t_matrix, sc);
    out.meta["network"] = network_json(sc, net);
    run_meta(out.meta, traj);
    return out;
}

RunArtifacts run_coupled(const Scenario &sc)
{
    const auto &econ = *sc.econ;
    const ContactNetwork net = build_network(sc);
    const auto t_matrix = network_matrix(sc, net);
    const InterventionSchedule schedule(sc.interventions, sc.population);
    const auto mapping =
        ShockMapping::from_named(*econ.table, econ.sickness_absence, econ.closure, econ.demand_sensitivity);

    std::unique_ptr<EpidemicProcess> process;
    const std::uint64_t seed = derive_seed(sc.run.seed, 0);
    if (econ.engine == EngineKind::Abm) {
        process = std::make_unique<AbmProcess>(initial_population(sc, seed), t_matrix, seed);
    } else {
        const Eigen::VectorXd gamma =
            Eigen::VectorXd::Constant(static_cast<Eigen::Index>(sc.population), sc.params.gamma);
        process = std::make_unique<MeanFieldProcess>(initial_probabilities(sc), t_matrix, gamma);
    }
    const CoupledTrajectory coupled = simulate_coupled(*process, *t_matrix, schedule, *econ.table, mapping,
                                                       econ.lockdown, sc.run.dt, sc.run.t_end, seed, sc.healthcare);

    RunArtifacts out;
    out.trajectory = trajectory_table(sc, coupled.epidemic);
    for (const auto &name : coupled.sectors)
        out.trajectory.header.push_back(name);
    out.trajectory.header.emplace_back("index");
    for (std::size_t k = 0; k < out.trajectory.rows.size(); ++k) {
        auto &row = out.trajectory.rows[k];
        const auto &x = coupled.sector_output[k];
        row.insert(row.end(), x.data(), x.data() + x.size());
        row.push_back(coupled.index[k]);
    }

    out.summary = summary_json(coupled.epidemic, coupled.epidemic.meta.vaccinated);
    add_equivalent_r0(out.summary, *t_matrix, sc);
    const auto minimum = std::min_element(coupled.index.begin(), coupled.index.end());
    std::size_t switches = 0;
    for (std::size_t k = 1; k < coupled.lockdown.size(); ++k)
        switches += coupled.lockdown[k] && !coupled.lockdown[k - 1];
    out.summary["economy"] = {{"min_index", *minimum},
                              {"min_index_time", coupled.epidemic.times()[minimum - coupled.index.begin()]},
                              {"final_index", coupled.index.back()},
                              {"lockdown_periods", switches + (coupled.lockdown.front() ? 1 : 0)},
                              {"index_local_maxima", local_maxima(coupled.index).size()}};
    out.meta["network"] = network_json(sc, net);
    out.meta["process_seed"] = seed;
    run_meta(out.meta, coupled.epidemic);
    return out;
}

/// Writes `content` to a temporary next to `target`.
std::filesystem::path write_temporary(const std::filesystem::path &target, const std::string &content)
{
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
        throw ConfigError("cannot write '" + tmp.string() + "'");
    out << content;
    out.close();
    if (!out)
        throw ConfigError("failed writing '" + tmp.string() + "'");
    return tmp;
}

} // namespace

nlohmann::json effective_config(const Scenario &sc)
{
    json cfg;
    cfg["model"] = to_string(sc.model);
    cfg["population"] = {{"size", sc.population},
                         {"initial_infected", sc.initial_infected},
                         {"initial_recovered", sc.initial_recovered},
                         {"initial_infected_agents", sc.initial_infected_agents}};
    if (sc.model != ModelKind::Compartmental) {
        cfg["network"] = {{"generator", sc.network.generator}, {"size", sc.population}};
        auto &net = cfg["network"];
        if (sc.network.generator == "erdos_renyi")
            net.update({{"p", sc.network.p}, {"seed", sc.network.seed}});
        else if (sc.network.generator == "watts_strogatz")
            net.update({{"k", sc.network.k}, {"p", sc.network.p}, {"seed", sc.network.seed}});
        else if (sc.network.generator == "barabasi_albert")
            net.update({{"m", sc.network.m}, {"seed", sc.network.seed}});
        else if (sc.network.generator == "edge_list")
            net["path"] = sc.network.path.string();
    }
    cfg["epidemic"] = {{"model", std::string(to_string(sc.kind))},
                       {"beta", sc.params.beta},
                       {"gamma", sc.params.gamma},
                       {"mu", optional_number(sc.params.mu)},
                       {"xi", optional_number(sc.params.xi)}};
    cfg["interventions"] = json::array();
    for (const auto &iv : sc.interventions)
        cfg["interventions"].push_back(intervention_json(iv));
    cfg["healthcare"] = sc.healthcare ? json{{"capacity", sc.healthcare->capacity},
                                             {"death_multiplier", sc.healthcare->death_multiplier}}
                                      : json(nullptr);
    if (sc.econ) {
        const auto &e = *sc.econ;
        cfg["econ"] = {{"io_table", e.io_table.string()},
                       {"engine", to_string(e.engine)},
                       {"sickness_absence", e.sickness_absence},
                       {"closure", e.closure},
                       {"demand_sensitivity", e.demand_sensitivity},
                       {"lockdown", e.lockdown ? json{{"on_threshold", e.lockdown->on_threshold},
                                                      {"off_threshold", e.lockdown->off_threshold},
                                                      {"transmission_factor", e.lockdown->transmission_factor}}
                                               : json(nullptr)}};
    } else {
        cfg["econ"] = nullptr;
    }
    cfg["run"] = {{"dt", sc.run.dt},
                  {"t_end", sc.run.t_end},
                  {"replicas", sc.run.replicas},
                  {"seed", sc.run.seed},
                  {"threads", sc.run.threads}};
    cfg["output"] = {{"directory", sc.output.directory.string()}, {"prefix", sc.output.prefix}};
    return cfg;
}

ContactNetwork build_network(const Scenario &sc)
{
    const auto &spec = sc.network;
    const std::size_t n = sc.population;
    if (spec.generator == "complete")
        return complete_network(n);
    if (spec.generator == "erdos_renyi")
        return erdos_renyi(n, spec.p, spec.seed);
    if (spec.generator == "watts_strogatz")
        return watts_strogatz(n, spec.k, spec.p, spec.seed);
    if (spec.generator == "barabasi_albert")
        return barabasi_albert(n, spec.m, spec.seed);
    if (spec.generator == "edge_list") {
        std::ifstream in(spec.path);
        if (!in)
            throw ConfigError("cannot open edge list '" + spec.path.string() + "'");
        auto net = read_edge_list(in);
        if (net.n_agents() != n)
            throw DimensionError("edge list size does not match population size");
        return net;
    }
    throw ConfigError("unknown network generator '" + spec.generator + "'");
}

AgentPopulation initial_population(const Scenario &sc, std::uint64_t replica_seed)
{
    AgentPopulation pop = AgentPopulation::homogeneous(sc.population, sc.params.gamma, sc.params.mu);
    const auto infected = static_cast<std::size_t>(std::llround(sc.initial_infected));
    const auto recovered = static_cast<std::size_t>(std::llround(sc.initial_recovered));
    Rng rng(derive_seed(replica_seed, kInitialStateStream));
    if (!sc.initial_infected_agents.empty()) {
        for (AgentId a : sc.initial_infected_agents)
            pop.states[a] = AgentState::Infected;
        std::vector<std::size_t> rest;
        for (std::size_t a = 0; a < pop.size(); ++a)
            if (pop.states[a] == AgentState::Susceptible)
                rest.push_back(a);
        for (std::size_t idx : sample_without_replacement(rest.size(), recovered, rng))
            pop.states[rest[idx]] = AgentState::Recovered;
        return pop;
    }
    const auto chosen = sample_without_replacement(sc.population, infected + recovered, rng);
    for (std::size_t k = 0; k < chosen.size(); ++k)
        pop.states[chosen[k]] = k < infected ? AgentState::Infected : AgentState::Recovered;
    return pop;
}

RunArtifacts execute_scenario(const Scenario &sc)
{
    RunArtifacts out;
    switch (sc.model) {
    case ModelKind::Compartmental: out = run_compartmental(sc); break;
    case ModelKind::Abm: out = run_abm(sc); break;
    case ModelKind::MeanField: out = run_meanfield(sc); break;
    case ModelKind::Coupled: out = run_coupled(sc); break;
    }
    out.meta["version"] = kVersion;
    out.meta["model"] = to_string(sc.model);
    out.meta["scenario"] = effective_config(sc);
    out.meta["columns"] = out.trajectory.header;
    out.meta["samples"] = out.trajectory.rows.size();
    out.meta["libraries"] = {{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                           "." + std::to_string(EIGEN_MINOR_VERSION)},
                             {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                                   std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                                   std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
    return out;
}

RunOutputs write_artifacts(const Scenario &sc, const RunArtifacts &artifacts)
{
    const auto &dir = sc.output.directory;
    std::filesystem::create_directories(dir);
    const std::string &prefix = sc.output.prefix;

    std::vector<std::pair<std::filesystem::path, std::string>> files{
        {dir / (prefix + ".csv"), format_csv(artifacts.trajectory)},
        {dir / (prefix + ".meta.json"), artifacts.meta.dump(2) + "\n"},
        {dir / (prefix + ".summary.json"), artifacts.summary.dump(2) + "\n"}};
    if (artifacts.replicas_csv)
        files.emplace_back(dir / (prefix + ".replicas.csv"), *artifacts.replicas_csv);

    std::vector<std::filesystem::path> temporaries;
    std::vector<std::filesystem::path> renamed;
    try {
        for (const auto &[path, content] : files)
            temporaries.push_back(write_temporary(path, content));
        for (std::size_t k = 0; k < files.size(); ++k) {
            std::filesystem::rename(temporaries[k], files[k].first);
            renamed.push_back(files[k].first);
        }
    } catch (...) {
        std::error_code ec;
        for (const auto &p : temporaries)
            std::filesystem::remove(p, ec);
        for (const auto &p : renamed)
            std::filesystem::remove(p, ec);
        throw;
    }
    RunOutputs out;
    for (const auto &f : files)
        out.files.push_back(f.first);
    return out;
}

} // namespace epinet
