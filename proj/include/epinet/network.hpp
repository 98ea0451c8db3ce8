#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace epinet {

using AgentId = std::uint32_t;

/// Undirected contact structure over N agents, stored as sorted neighbour
/// lists (compressed rows). The adjacency matrix it represents is symmetric
/// with entries in {0, 1}; a self-loop sets the diagonal entry.
class ContactNetwork {
public:
    ContactNetwork() = default;

    /// Builds a network from undirected pairs. (a, a) adds a self-loop and
    /// repeated pairs collapse. Throws DomainError on out-of-range ids.
    static ContactNetwork from_edges(std::size_t n_agents, std::span<const std::pair<AgentId, AgentId>> edges);

    std::size_t n_agents() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }

    std::span<const AgentId> neighbors(AgentId agent) const;

    /// Row sum of the adjacency matrix; a self-loop counts once.
    std::size_t degree(AgentId agent) const { return neighbors(agent).size(); }

    bool has_edge(AgentId a, AgentId b) const;

    /// Number of ones in the adjacency matrix (twice the off-diagonal edges
    /// plus the self-loops).
    std::size_t entry_count() const noexcept { return targets_.size(); }

    bool has_self_loops() const;

    /// Undirected edges as (a, b) with a <= b, lexicographically sorted.
    std::vector<std::pair<AgentId, AgentId>> edges() const;

    Eigen::MatrixXd dense_adjacency() const;

    friend bool operator==(const ContactNetwork &, const ContactNetwork &) = default;

private:
    friend ContactNetwork complete_network(std::size_t n);

    std::vector<std::size_t> offsets_;
    std::vector<AgentId> targets_;
};

/// Everyone is in contact with everyone, including themselves, so that the
/// average degree equals N exactly.
ContactNetwork complete_network(std::size_t n);

/// G(n, p): every unordered pair of distinct agents is linked independently
/// with probability p.
ContactNetwork erdos_renyi(std::size_t n, double p, std::uint64_t seed);

/// Ring lattice where each agent links to its k nearest neighbours, with each
/// lattice edge rewired to a uniform new endpoint with probability p_rewire.
/// Rewiring never creates self-loops or duplicate edges.
ContactNetwork watts_strogatz(std::size_t n, std::size_t k, double p_rewire, std::uint64_t seed);

/// Preferential attachment grown from an m-clique; each new agent links to m
/// distinct existing agents chosen proportionally to their degree.
ContactNetwork barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed);

/// Mean row sum of the adjacency matrix: entry_count() / N.
double average_degree(const ContactNetwork &net);

struct DegreeStats {
    double mean = 0.0;
    double variance = 0.0; // population variance of the degree sequence
    std::size_t max = 0;
    double median = 0.0;
    std::vector<std::size_t> histogram; // histogram[d] = number of agents with degree d
    double tail_ratio = 0.0;            // max / median; +inf when median is 0 and max is not
};

DegreeStats degree_statistics(const ContactNetwork &net);

/// Mean local clustering coefficient, self-loops ignored; agents with fewer
/// than two neighbours contribute zero.
double average_clustering(const ContactNetwork &net);

/// Mean breadth-first distance over ordered pairs of distinct agents that
/// are connected. Returns 0 when no such pair exists.
double mean_shortest_path(const ContactNetwork &net);

/// Edge-list text format: a header line "# agents: N" followed by one
/// "source target" pair per line with zero-based ids. Each undirected edge is
/// written once with source <= target.
void write_edge_list(std::ostream &out, const ContactNetwork &net);

/// Reads the edge-list format. Blank lines are ignored; pairs are taken as
/// undirected. Throws ParseError with the offending line.
ContactNetwork read_edge_list(std::istream &in);

} // namespace epinet
