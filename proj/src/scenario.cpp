#include "epinet/scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "epinet/error.hpp"
#include "epinet/random.hpp"

namespace epinet {

std::string to_string(ModelKind kind)
{
    switch (kind) {
    case ModelKind::Compartmental: return "compartmental";
    case ModelKind::Abm: return "abm";
    case ModelKind::MeanField: return "meanfield";
    case ModelKind::Coupled: return "coupled";
    }
    return "?";
}

std::string to_string(EngineKind kind)
{
    return kind == EngineKind::Abm ? "abm" : "meanfield";
}

namespace {

// Network seeds are derived from the run seed on a stream of their own.
constexpr std::uint64_t kNetworkSeedStream = 0x6e6574776f726bULL;

/// Collects every problem instead of stopping at the first.
class Reader {
public:
    std::vector<std::string> problems;

    void fail(const YAML::Node &at, const std::string &msg)
    {
        const auto mark = at.IsDefined() ? at.Mark() : YAML::Mark::null_mark();
        if (mark.line >= 0)
            problems.push_back("line " + std::to_string(mark.line + 1) + ": " + msg);
        else
            problems.push_back(msg);
    }

    /// Checks that `node` is a mapping whose keys are all in `allowed`.
    bool check_map(const YAML::Node &node, const std::string &where, const std::set<std::string> &allowed)
    {
        if (!node.IsMap()) {
            fail(node, where + " must be a mapping");
            return false;
        }
        for (const auto &kv : node) {
            const auto key = kv.first.Scalar();
            if (!allowed.count(key))
                fail(kv.first, "unknown key '" + key + "' in " + where);
        }
        return true;
    }

    std::optional<double> number(const YAML::Node &map, const std::string &key, const std::string &where)
    {
        const YAML::Node node = map[key];
        if (!node)
            return std::nullopt;
        if (node.IsScalar()) {
            const std::string &text = node.Scalar();
            double v = 0.0;
            const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
            if (ec == std::errc() && end == text.data() + text.size() && std::isfinite(v))
                return v;
        }
        fail(node, where + "." + key + " must be a finite number");
        return std::nullopt;
    }

    std::optional<std::uint64_t> integer(const YAML::Node &map, const std::string &key, const std::string &where)
    {
        const YAML::Node node = map[key];
        if (!node)
            return std::nullopt;
        return integer_value(node, where + "." + key);
    }

    std::optional<std::uint64_t> integer_value(const YAML::Node &node, const std::string &what)
    {
        if (node.IsScalar()) {
            const std::string &text = node.Scalar();
            std::uint64_t v = 0;
            const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
            if (ec == std::errc() && end == text.data() + text.size())
                return v;
        }
        fail(node, what + " must be a non-negative integer");
        return std::nullopt;
    }

    std::optional<std::string> text(const YAML::Node &map, const std::string &key, const std::string &where)
    {
        const YAML::Node node = map[key];
        if (!node)
            return std::nullopt;
        if (!node.IsScalar()) {
            fail(node, where + "." + key + " must be a string");
            return std::nullopt;
        }
        return node.Scalar();
    }
};

bool is_integral(double v)
{
    return std::floor(v) == v;
}

std::vector<AgentId> agent_list(Reader &rd, const YAML::Node &node, const std::string &what)
{
    std::vector<AgentId> out;
    if (!node.IsSequence()) {
        rd.fail(node, what + " must be a list of agent indices");
        return out;
    }
    for (const auto &item : node)
        if (auto v = rd.integer_value(item, what + " entry"))
            out.push_back(static_cast<AgentId>(*v));
    return out;
}

void parse_population(Reader &rd, const YAML::Node &root, Scenario &sc, bool &has_count, bool &has_list)
{
    const YAML::Node pop = root["population"];
    if (!pop) {
        rd.fail(root, "missing section 'population'");
        return;
    }
    if (!rd.check_map(pop, "population", {"size", "initial_infected", "initial_recovered", "initial_infected_agents"}))
        return;
    if (auto n = rd.integer(pop, "size", "population"))
        sc.population = static_cast<std::size_t>(*n);
    else if (!pop["size"])
        rd.fail(pop, "population.size is required");
    if (auto v = rd.number(pop, "initial_infected", "population")) {
        sc.initial_infected = *v;
        has_count = true;
    }
    if (auto v = rd.number(pop, "initial_recovered", "population"))
        sc.initial_recovered = *v;
    if (const YAML::Node agents = pop["initial_infected_agents"]) {
        sc.initial_infected_agents = agent_list(rd, agents, "population.initial_infected_agents");
        has_list = true;
    }
}

void parse_network(Reader &rd, const YAML::Node &root, Scenario &sc, const std::filesystem::path &base_dir,
                   std::optional<std::size_t> &declared_size)
{
    const YAML::Node net = root["network"];
    if (!net)
        return;
    if (!rd.check_map(net, "network", {"generator", "size", "p", "k", "m", "seed", "path"}))
        return;
    if (auto g = rd.text(net, "generator", "network"))
        sc.network.generator = *g;
    if (auto n = rd.integer(net, "size", "network"))
        declared_size = static_cast<std::size_t>(*n);
    if (auto p = rd.number(net, "p", "network"))
        sc.network.p = *p;
    if (auto k = rd.integer(net, "k", "network"))
        sc.network.k = static_cast<std::size_t>(*k);
    if (auto m = rd.integer(net, "m", "network"))
        sc.network.m = static_cast<std::size_t>(*m);
    if (auto s = rd.integer(net, "seed", "network"))
        sc.network.seed = *s;
    if (auto p = rd.text(net, "path", "network"))
        sc.network.path = base_dir / *p;
}

void validate_network(Reader &rd, const YAML::Node &at, Scenario &sc, std::optional<std::size_t> declared_size,
                      const YAML::Node &net)
{
    auto &spec = sc.network;
    const std::size_t n = sc.population;
    const std::set<std::string> params_used = [&]() -> std::set<std::string> {
        if (spec.generator == "complete")
            return {};
        if (spec.generator == "erdos_renyi")
            return {"p", "seed"};
        if (spec.generator == "watts_strogatz")
            return {"k", "p", "seed"};
        if (spec.generator == "barabasi_albert")
            return {"m", "seed"};
        if (spec.generator == "edge_list")
            return {"path"};
        return {"p", "k", "m", "seed", "path"};
    }();
    if (net)
        for (const char *key : {"p", "k", "m", "seed", "path"})
            if (net[key] && !params_used.count(key))
                rd.fail(net[key], "network." + std::string(key) + " is not used by generator '" + spec.generator + "'");

    if (spec.generator == "complete") {
    } else if (spec.generator == "erdos_renyi") {
        if (!net["p"])
            rd.fail(net, "network.p is required for erdos_renyi");
        if (spec.p < 0.0 || spec.p > 1.0)
            rd.fail(net, "network.p must lie in [0, 1]");
    } else if (spec.generator == "watts_strogatz") {
        if (!net["k"] || !net["p"])
            rd.fail(net, "network.k and network.p are required for watts_strogatz");
        if (spec.k % 2 != 0 || spec.k == 0 || spec.k >= n)
            rd.fail(net, "network.k must be even, positive and smaller than the population");
        if (spec.p < 0.0 || spec.p > 1.0)
            rd.fail(net, "network.p must lie in [0, 1]");
    } else if (spec.generator == "barabasi_albert") {
        if (spec.m == 0 || spec.m >= n)
            rd.fail(net, "network.m must be positive and smaller than the population");
    } else if (spec.generator == "edge_list") {
        if (spec.path.empty()) {
            rd.fail(net, "network.path is required for edge_list");
        } else {
            std::ifstream in(spec.path);
            if (!in) {
                rd.fail(net, "cannot open edge list '" + spec.path.string() + "'");
            } else {
                try {
                    const auto size = read_edge_list(in).n_agents();
                    if (size != n)
                        rd.fail(net, "network size " + std::to_string(size) + " does not match population size " +
                                         std::to_string(n));
                } catch (const Error &err) {
                    rd.fail(net, "edge list '" + spec.path.string() + "': " + err.what());
                }
            }
        }
    } else {
        rd.fail(net ? net : at, "unknown network generator '" + spec.generator + "'");
    }
    if (declared_size && *declared_size != n)
        rd.fail(net, "network size " + std::to_string(*declared_size) + " does not match population size " +
                         std::to_string(n));
}

void parse_epidemic(Reader &rd, const YAML::Node &root, Scenario &sc)
{
    const YAML::Node epi = root["epidemic"];
    if (!epi) {
        rd.fail(root, "missing section 'epidemic'");
        return;
    }
    if (!rd.check_map(epi, "epidemic", {"model", "beta", "gamma", "mu", "xi"}))
        return;
    if (auto m = rd.text(epi, "model", "epidemic")) {
        if (auto kind = parse_compartmental_kind(*m))
            sc.kind = *kind;
        else
            rd.fail(epi["model"], "epidemic.model must be SIR, SIRD or SIRS");
    }
    auto required = [&](const char *key) {
        if (auto v = rd.number(epi, key, "epidemic"))
            return *v;
        if (!epi[key])
            rd.fail(epi, std::string("epidemic.") + key + " is required");
        return 0.0;
    };
    sc.params.beta = required("beta");
    sc.params.gamma = required("gamma");
    sc.params.mu = rd.number(epi, "mu", "epidemic");
    sc.params.xi = rd.number(epi, "xi", "epidemic");

    if (sc.params.mu && sc.kind != CompartmentalKind::SIRD)
        rd.fail(epi["mu"], "epidemic.mu is only used by the SIRD model");
    if (sc.params.xi && sc.kind != CompartmentalKind::SIRS)
        rd.fail(epi["xi"], "epidemic.xi is only used by the SIRS model");
    try {
        validate_params(sc.kind, sc.params);
    } catch (const Error &err) {
        rd.fail(epi, std::string("epidemic: ") + err.what());
    }
}

Communities contiguous_blocks(std::size_t n, std::size_t count)
{
    Communities out(count);
    for (std::size_t a = 0; a < n; ++a)
        out[a * count / n].push_back(static_cast<AgentId>(a));
    return out;
}

void parse_interventions(Reader &rd, const YAML::Node &root, Scenario &sc)
{
    const YAML::Node list = root["interventions"];
    if (!list)
        return;
    if (!list.IsSequence()) {
        rd.fail(list, "interventions must be a list");
        return;
    }
    std::size_t index = 0;
    for (const auto &item : list) {
        const std::string where = "interventions[" + std::to_string(index++) + "]";
        if (!rd.check_map(item, where,
                          {"kind", "fraction", "factor", "communities", "community_count", "cut_fraction", "activation",
                           "deactivation", "duration", "trigger_infected_fraction"}))
            continue;
        Intervention iv;
        const auto kind = rd.text(item, "kind", where);
        std::set<std::string> used{"kind", "activation", "deactivation", "duration", "trigger_infected_fraction"};
        if (!kind) {
            if (!item["kind"])
                rd.fail(item, where + ".kind is required");
            continue;
        }
        auto fraction = [&] {
            used.insert("fraction");
            auto v = rd.number(item, "fraction", where);
            if (!v && !item["fraction"])
                rd.fail(item, where + ".fraction is required");
            return v.value_or(0.0);
        };
        if (*kind == "density_reduction") {
            iv.kind = DensityReduction{fraction()};
        } else if (*kind == "vaccinate") {
            iv.kind = Vaccinate{fraction()};
        } else if (*kind == "transmission_scale") {
            used.insert("factor");
            auto v = rd.number(item, "factor", where);
            if (!v && !item["factor"])
                rd.fail(item, where + ".factor is required");
            iv.kind = TransmissionScale{v.value_or(1.0)};
        } else if (*kind == "compartmentalize") {
            used.insert({"communities", "community_count", "cut_fraction"});
            Compartmentalize c;
            c.cut_fraction = rd.number(item, "cut_fraction", where).value_or(1.0);
            const YAML::Node explicit_list = item["communities"];
            const auto count = rd.integer(item, "community_count", where);
            if (explicit_list && item["community_count"]) {
                rd.fail(item, where + ": give either communities or community_count, not both");
            } else if (explicit_list) {
                if (!explicit_list.IsSequence())
                    rd.fail(explicit_list, where + ".communities must be a list of agent lists");
                else
                    for (const auto &block : explicit_list)
                        c.communities.push_back(agent_list(rd, block, where + ".communities"));
            } else if (count) {
                if (*count == 0 || *count > sc.population)
                    rd.fail(item["community_count"], where + ".community_count must lie in [1, population size]");
                else
                    c.communities = contiguous_blocks(sc.population, static_cast<std::size_t>(*count));
            } else if (!item["community_count"]) {
                rd.fail(item, where + " needs communities or community_count");
            }
            iv.kind = std::move(c);
        } else {
            rd.fail(item["kind"], where + ": unknown intervention kind '" + *kind + "'");
            continue;
        }
        for (const auto &kv : item)
            if (!used.count(kv.first.Scalar()))
                rd.fail(kv.first, where + "." + kv.first.Scalar() + " is not used by kind '" + *kind + "'");
        iv.activation = rd.number(item, "activation", where).value_or(0.0);
        iv.deactivation = rd.number(item, "deactivation", where);
        iv.duration = rd.number(item, "duration", where);
        iv.trigger_infected_fraction = rd.number(item, "trigger_infected_fraction", where);
        sc.interventions.push_back(std::move(iv));
    }
}

void parse_healthcare(Reader &rd, const YAML::Node &root, Scenario &sc)
{
    const YAML::Node hc = root["healthcare"];
    if (!hc || !rd.check_map(hc, "healthcare", {"capacity", "death_multiplier"}))
        return;
    HealthcareCapacity cap;
    auto capacity = rd.number(hc, "capacity", "healthcare");
    auto multiplier = rd.number(hc, "death_multiplier", "healthcare");
    if (!hc["capacity"] || !hc["death_multiplier"])
        rd.fail(hc, "healthcare needs capacity and death_multiplier");
    cap.capacity = capacity.value_or(0.0);
    cap.death_multiplier = multiplier.value_or(1.0);
    if (cap.capacity < 0.0 || cap.death_multiplier < 0.0)
        rd.fail(hc, "healthcare capacity and death_multiplier must be non-negative");
    sc.healthcare = cap;
}

std::map<std::string, double> named_values(Reader &rd, const YAML::Node &node, const std::string &what)
{
    std::map<std::string, double> out;
    if (!node)
        return out;
    if (!node.IsMap()) {
        rd.fail(node, what + " must map sector names to numbers");
        return out;
    }
    for (const auto &kv : node) {
        const auto name = kv.first.Scalar();
        if (auto v = rd.number(node, name, what))
            out[name] = *v;
    }
    return out;
}

void parse_econ(Reader &rd, const YAML::Node &root, Scenario &sc, const std::filesystem::path &base_dir)
{
    const YAML::Node ec = root["econ"];
    if (!ec)
        return;
    if (!rd.check_map(ec, "econ",
                      {"io_table", "engine", "sickness_absence", "closure", "demand_sensitivity", "lockdown"}))
        return;
    EconSpec spec;
    if (auto path = rd.text(ec, "io_table", "econ")) {
        spec.io_table = base_dir / *path;
        try {
            spec.table = std::make_shared<const IOTable>(read_io_table(spec.io_table));
        } catch (const Error &err) {
            rd.fail(ec["io_table"], "io table '" + spec.io_table.string() + "': " + err.what());
        }
    } else if (!ec["io_table"]) {
        rd.fail(ec, "econ.io_table is required");
    }
    if (auto engine = rd.text(ec, "engine", "econ")) {
        if (*engine == "abm")
            spec.engine = EngineKind::Abm;
        else if (*engine != "meanfield")
            rd.fail(ec["engine"], "econ.engine must be abm or meanfield");
    }
    spec.sickness_absence = rd.number(ec, "sickness_absence", "econ").value_or(0.0);
    if (spec.sickness_absence < 0.0)
        rd.fail(ec, "econ.sickness_absence must be non-negative");
    spec.closure = named_values(rd, ec["closure"], "econ.closure");
    spec.demand_sensitivity = named_values(rd, ec["demand_sensitivity"], "econ.demand_sensitivity");
    for (const auto *m : {&spec.closure, &spec.demand_sensitivity})
        for (const auto &[name, v] : *m)
            if (v < 0.0)
                rd.fail(ec, "econ sensitivity for '" + name + "' must be non-negative");
    if (spec.table) {
        // Sectors left out of either map get sensitivity zero only when the
        // map is absent altogether; a partial map is an error.
        auto complete = [&](std::map<std::string, double> &m, const char *key) {
            if (!ec[key])
                for (const auto &name : spec.table->sectors())
                    m.emplace(name, 0.0);
        };
        complete(spec.closure, "closure");
        complete(spec.demand_sensitivity, "demand_sensitivity");
        try {
            ShockMapping::from_named(*spec.table, spec.sickness_absence, spec.closure, spec.demand_sensitivity);
        } catch (const ValidationError &err) {
            for (const auto &p : err.problems())
                rd.fail(ec, "econ " + p);
        }
    }
    if (const YAML::Node ld = ec["lockdown"]) {
        if (rd.check_map(ld, "econ.lockdown", {"on_threshold", "off_threshold", "transmission_factor"})) {
            LockdownPolicy policy;
            auto on = rd.number(ld, "on_threshold", "econ.lockdown");
            auto off = rd.number(ld, "off_threshold", "econ.lockdown");
            auto factor = rd.number(ld, "transmission_factor", "econ.lockdown");
            if (!ld["on_threshold"] || !ld["off_threshold"] || !ld["transmission_factor"])
                rd.fail(ld, "econ.lockdown needs on_threshold, off_threshold and transmission_factor");
            policy.on_threshold = on.value_or(1.0);
            policy.off_threshold = off.value_or(0.0);
            policy.transmission_factor = factor.value_or(1.0);
            try {
                policy.validate();
            } catch (const ValidationError &err) {
                for (const auto &p : err.problems())
                    rd.fail(ld, p);
            }
            spec.lockdown = policy;
        }
    }
    sc.econ = std::move(spec);
}

void parse_run(Reader &rd, const YAML::Node &root, Scenario &sc)
{
    const YAML::Node run = root["run"];
    if (!run) {
        rd.fail(root, "missing section 'run'");
        return;
    }
    if (!rd.check_map(run, "run", {"dt", "t_end", "replicas", "seed", "threads"}))
        return;
    sc.run.dt = rd.number(run, "dt", "run").value_or(kDefaultTimeStep);
    if (auto t = rd.number(run, "t_end", "run"))
        sc.run.t_end = *t;
    else if (!run["t_end"])
        rd.fail(run, "run.t_end is required");
    if (auto r = rd.integer(run, "replicas", "run"))
        sc.run.replicas = static_cast<std::size_t>(*r);
    if (auto s = rd.integer(run, "seed", "run"))
        sc.run.seed = *s;
    if (auto t = rd.integer(run, "threads", "run"))
        sc.run.threads = static_cast<unsigned>(*t);
    if (!(sc.run.dt > 0.0))
        rd.fail(run, "run.dt must be positive");
    if (sc.run.t_end < 0.0)
        rd.fail(run, "run.t_end must be non-negative");
    if (sc.run.replicas == 0)
        rd.fail(run, "run.replicas must be at least 1");
}

void parse_output(Reader &rd, const YAML::Node &root, Scenario &sc, const std::string &default_prefix)
{
    const char *env = std::getenv(kOutputDirEnv);
    sc.output.directory = env && *env ? std::filesystem::path(env) : std::filesystem::path(".");
    sc.output.prefix = default_prefix;
    const YAML::Node out = root["output"];
    if (!out || !rd.check_map(out, "output", {"directory", "prefix"}))
        return;
    if (auto d = rd.text(out, "directory", "output"))
        sc.output.directory = *d;
    if (auto p = rd.text(out, "prefix", "output")) {
        if (p->empty() || p->find('/') != std::string::npos)
            rd.fail(out["prefix"], "output.prefix must be a plain file name");
        else
            sc.output.prefix = *p;
    }
}

void cross_check(Reader &rd, const YAML::Node &root, Scenario &sc, bool has_count, bool has_list)
{
    const bool network_model = sc.model != ModelKind::Compartmental;
    const bool stochastic = sc.model == ModelKind::Abm || (sc.econ && sc.econ->engine == EngineKind::Abm &&
                                                            sc.model == ModelKind::Coupled);
    const bool meanfield = sc.model == ModelKind::MeanField ||
                           (sc.model == ModelKind::Coupled && (!sc.econ || sc.econ->engine == EngineKind::MeanField));
    const double n = static_cast<double>(sc.population);

    if (sc.population == 0)
        rd.fail(root["population"] ? root["population"] : root, "population.size must be at least 1");
    if (has_count && has_list)
        rd.fail(root["population"], "give either initial_infected or initial_infected_agents, not both");
    if (sc.initial_infected < 0.0 || sc.initial_recovered < 0.0 || sc.initial_infected + sc.initial_recovered > n)
        rd.fail(root["population"], "initial counts must be non-negative and fit in the population");
    if ((stochastic || meanfield) && (!is_integral(sc.initial_infected) || !is_integral(sc.initial_recovered)))
        rd.fail(root["population"], "initial counts must be whole agents for network models");
    if (!sc.initial_infected_agents.empty()) {
        if (!network_model)
            rd.fail(root["population"], "initial_infected_agents needs a network model");
        std::set<AgentId> seen;
        for (AgentId a : sc.initial_infected_agents) {
            if (a >= sc.population)
                rd.fail(root["population"], "initial infected agent " + std::to_string(a) + " is not an agent");
            if (!seen.insert(a).second)
                rd.fail(root["population"], "initial infected agent " + std::to_string(a) + " is listed twice");
        }
        sc.initial_infected = static_cast<double>(sc.initial_infected_agents.size());
        if (sc.initial_infected + sc.initial_recovered > n)
            rd.fail(root["population"], "initial counts must fit in the population");
    }

    if (!network_model && root["network"])
        rd.fail(root["network"], "the compartmental model takes no network");
    if (!network_model && root["interventions"])
        rd.fail(root["interventions"], "interventions need a network model (abm, meanfield or coupled)");
    if (sc.kind == CompartmentalKind::SIRS && network_model)
        rd.fail(root["epidemic"], "SIRS is only available for the compartmental model");
    if (sc.kind == CompartmentalKind::SIRD && meanfield)
        rd.fail(root["epidemic"], "SIRD is not available for mean-field models");
    if (sc.healthcare && !(stochastic && sc.kind == CompartmentalKind::SIRD))
        rd.fail(root["healthcare"], "healthcare capacity needs an agent-based SIRD model");

    if (sc.econ && sc.model != ModelKind::Coupled)
        rd.fail(root["econ"], "econ requires coupled model");
    if (sc.model == ModelKind::Coupled && !sc.econ && !root["econ"])
        rd.fail(root, "the coupled model needs an econ section");
    if (sc.run.replicas > 1 && sc.model != ModelKind::Abm)
        rd.fail(root["run"], "run.replicas > 1 is only supported for the abm model");

    if (network_model && sc.population > 0) {
        for (const auto &p : InterventionSchedule::problems(sc.interventions, sc.population))
            rd.fail(root["interventions"], p);
    }
}

} // namespace

Scenario parse_scenario(const std::string &text, const std::filesystem::path &base_dir,
                        const std::string &default_prefix)
{
    YAML::Node loaded;
    try {
        loaded = YAML::Load(text);
    } catch (const YAML::ParserException &err) {
        throw ParseError(err.msg, static_cast<std::size_t>(err.mark.line + 1),
                         static_cast<std::size_t>(err.mark.column + 1));
    }

    const YAML::Node &root = loaded;
    Reader rd;
    Scenario sc;
    if (!root.IsMap())
        throw ValidationError({"a scenario must be a mapping of sections"});
    rd.check_map(root, "scenario",
                 {"model", "population", "network", "epidemic", "interventions", "healthcare", "econ", "run",
                  "output"});

    if (auto m = rd.text(root, "model", "scenario")) {
        if (*m == "compartmental")
            sc.model = ModelKind::Compartmental;
        else if (*m == "abm")
            sc.model = ModelKind::Abm;
        else if (*m == "meanfield")
            sc.model = ModelKind::MeanField;
        else if (*m == "coupled")
            sc.model = ModelKind::Coupled;
        else
            rd.fail(root["model"], "model must be compartmental, abm, meanfield or coupled");
    } else if (!root["model"]) {
        rd.fail(root, "missing key 'model'");
    }

    bool has_count = false;
    bool has_list = false;
    parse_population(rd, root, sc, has_count, has_list);
    parse_run(rd, root, sc);
    sc.network.seed = derive_seed(sc.run.seed, kNetworkSeedStream);
    std::optional<std::size_t> declared_size;
    parse_network(rd, root, sc, base_dir, declared_size);
    parse_epidemic(rd, root, sc);
    parse_interventions(rd, root, sc);
    parse_healthcare(rd, root, sc);
    parse_econ(rd, root, sc, base_dir);
    parse_output(rd, root, sc, default_prefix);
    cross_check(rd, root, sc, has_count, has_list);
    if (sc.model != ModelKind::Compartmental && sc.population > 0)
        validate_network(rd, root, sc, declared_size, root["network"]);

    if (!rd.problems.empty())
        throw ValidationError(std::move(rd.problems));
    return sc;
}

Scenario load_scenario(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open scenario '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str(), path.parent_path().empty() ? "." : path.parent_path(),
                          path.stem().string());
}

} // namespace epinet
