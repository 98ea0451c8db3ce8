#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "epinet/compartmental.hpp"
#include "epinet/econ.hpp"
#include "epinet/interventions.hpp"
#include "epinet/network.hpp"
#include "epinet/types.hpp"

namespace epinet {

enum class ModelKind { Compartmental, Abm, MeanField, Coupled };
enum class EngineKind { Abm, MeanField };

std::string to_string(ModelKind kind);
std::string to_string(EngineKind kind);

struct NetworkSpec {
    std::string generator = "complete"; // complete, erdos_renyi, watts_strogatz, barabasi_albert, edge_list
    double p = 0.0;                     // erdos_renyi edge probability, watts_strogatz rewiring probability
    std::size_t k = 0;                  // watts_strogatz ring degree
    std::size_t m = 0;                  // barabasi_albert links per new agent
    std::uint64_t seed = 0;
    std::filesystem::path path;         // edge_list only, resolved against the scenario directory
};

struct EconSpec {
    std::filesystem::path io_table;
    std::shared_ptr<const IOTable> table;
    EngineKind engine = EngineKind::MeanField;
    double sickness_absence = 0.0;
    std::map<std::string, double> closure;
    std::map<std::string, double> demand_sensitivity;
    std::optional<LockdownPolicy> lockdown;
};

struct RunSpec {
    double dt = kDefaultTimeStep;
    double t_end = 0.0;
    std::size_t replicas = 1;
    std::uint64_t seed = 0;
    unsigned threads = 0; // 0 = hardware concurrency; never affects results
};

struct OutputSpec {
    std::filesystem::path directory;
    std::string prefix;
};

/// A fully validated scenario with every default filled in.
struct Scenario {
    ModelKind model = ModelKind::Compartmental;
    std::size_t population = 0;
    double initial_infected = 0.0;
    double initial_recovered = 0.0;
    std::vector<AgentId> initial_infected_agents; // overrides initial_infected when non-empty
    NetworkSpec network;
    CompartmentalKind kind = CompartmentalKind::SIR;
    EpidemicParams params;
    std::vector<Intervention> interventions;
    std::optional<HealthcareCapacity> healthcare;
    std::optional<EconSpec> econ;
    RunSpec run;
    OutputSpec output;
};

/// Environment variable naming the default output directory.
inline constexpr const char *kOutputDirEnv = "EPINET_OUTPUT_DIR";

/// Parses and validates scenario text. Relative paths inside the scenario
/// resolve against `base_dir`; `default_prefix` names the outputs when the
/// scenario does not. Throws ParseError on malformed YAML and
/// ValidationError listing every semantic problem.
Scenario parse_scenario(const std::string &text, const std::filesystem::path &base_dir = ".",
                        const std::string &default_prefix = "scenario");

/// Reads and parses a scenario file; the prefix defaults to the file stem.
Scenario load_scenario(const std::filesystem::path &path);

} // namespace epinet
