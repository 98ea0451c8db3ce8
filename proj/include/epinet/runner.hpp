#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "epinet/abm.hpp"
#include "epinet/csv.hpp"
#include "epinet/network.hpp"
#include "epinet/scenario.hpp"

namespace epinet {

inline constexpr const char *kVersion = "1.0.0";

/// Everything a run produces, before anything touches the disk.
struct RunArtifacts {
    CsvTable trajectory;
    std::optional<std::string> replicas_csv; // replica, seed, final size; ensembles only
    nlohmann::json meta;
    nlohmann::json summary;
};

struct RunOutputs {
    std::vector<std::filesystem::path> files;
};

/// Complete effective configuration, defaults included.
nlohmann::json effective_config(const Scenario &sc);

/// The contact network the scenario describes.
ContactNetwork build_network(const Scenario &sc);

/// Initial agent states for one replica. Random initial infections are
/// drawn from a stream derived from `replica_seed`.
AgentPopulation initial_population(const Scenario &sc, std::uint64_t replica_seed);

/// Runs the model. Throws on any module error.
RunArtifacts execute_scenario(const Scenario &sc);

/// Writes <prefix>.csv, <prefix>.meta.json, <prefix>.summary.json and, for
/// ensembles, <prefix>.replicas.csv into the output directory. Files are
/// written to temporaries and renamed; on failure nothing is left behind.
RunOutputs write_artifacts(const Scenario &sc, const RunArtifacts &artifacts);

inline RunOutputs run_scenario(const Scenario &sc)
{
    return write_artifacts(sc, execute_scenario(sc));
}

} // namespace epinet
