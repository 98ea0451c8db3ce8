#include "epinet/network.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>

#include "epinet/error.hpp"
#include "epinet/random.hpp"

namespace epinet {

ContactNetwork ContactNetwork::from_edges(std::size_t n, std::span<const std::pair<AgentId, AgentId>> edges)
{
    if (n > std::numeric_limits<AgentId>::max())
        throw DomainError("too many agents");

    std::vector<std::vector<AgentId>> rows(n);
    for (const auto &[a, b] : edges) {
        if (a >= n || b >= n)
            throw DomainError("edge endpoint out of range");
        rows[a].push_back(b);
        if (a != b)
            rows[b].push_back(a);
    }

    ContactNetwork net;
    net.offsets_.reserve(n + 1);
    net.offsets_.push_back(0);
    for (auto &row : rows) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        net.targets_.insert(net.targets_.end(), row.begin(), row.end());
        net.offsets_.push_back(net.targets_.size());
    }
    return net;
}

std::span<const AgentId> ContactNetwork::neighbors(AgentId agent) const
{
    if (agent >= n_agents())
        throw DomainError("agent id out of range");
    return {targets_.data() + offsets_[agent], offsets_[agent + 1] - offsets_[agent]};
}

bool ContactNetwork::has_edge(AgentId a, AgentId b) const
{
    const auto row = neighbors(a);
    return std::binary_search(row.begin(), row.end(), b);
}

bool ContactNetwork::has_self_loops() const
{
    for (AgentId a = 0; a < n_agents(); ++a)
        if (has_edge(a, a))
            return true;
    return false;
}

std::vector<std::pair<AgentId, AgentId>> ContactNetwork::edges() const
{
    std::vector<std::pair<AgentId, AgentId>> out;
    for (AgentId a = 0; a < n_agents(); ++a)
        for (AgentId b : neighbors(a))
            if (a <= b)
                out.emplace_back(a, b);
    return out;
}

Eigen::MatrixXd ContactNetwork::dense_adjacency() const
{
    const auto n = static_cast<Eigen::Index>(n_agents());
    Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
    for (AgentId a = 0; a < n_agents(); ++a)
        for (AgentId b : neighbors(a))
            adj(a, b) = 1.0;
    return adj;
}

ContactNetwork complete_network(std::size_t n)
{
    if (n == 0)
        throw DomainError("complete network needs at least one agent");
    if (n > std::numeric_limits<AgentId>::max())
        throw DomainError("too many agents");

    ContactNetwork net;
    net.offsets_.resize(n + 1);
    net.targets_.resize(n * n);
    for (std::size_t a = 0; a <= n; ++a)
        net.offsets_[a] = a * n;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            net.targets_[a * n + b] = static_cast<AgentId>(b);
    return net;
}

namespace {

void check_probability(double p, const char *what)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError(std::string(what) + " must lie in [0, 1]");
}

} // namespace

ContactNetwork erdos_renyi(std::size_t n, double p, std::uint64_t seed)
{
    check_probability(p, "edge probability");
    std::vector<std::pair<AgentId, AgentId>> edges;

    if (p >= 1.0) {
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                edges.emplace_back(static_cast<AgentId>(a), static_cast<AgentId>(b));
    } else if (p > 0.0) {
        // Geometric skipping over the lower triangle (Batagelj & Brandes).
        Rng rng(seed);
        const double log_q = std::log1p(-p);
        std::int64_t v = 1;
        std::int64_t w = -1;
        const auto nn = static_cast<std::int64_t>(n);
        while (v < nn) {
            const double skip = std::floor(std::log1p(-uniform01(rng)) / log_q);
            w += 1 + static_cast<std::int64_t>(std::min(skip, 1e18));
            while (w >= v && v < nn) {
                w -= v;
                ++v;
            }
            if (v < nn)
                edges.emplace_back(static_cast<AgentId>(w), static_cast<AgentId>(v));
        }
    }
    return ContactNetwork::from_edges(n, edges);
}

ContactNetwork watts_strogatz(std::size_t n, std::size_t k, double p_rewire, std::uint64_t seed)
{
    if (k % 2 != 0 || k >= n)
        throw DomainError("Watts-Strogatz requires an even k smaller than n");
    check_probability(p_rewire, "rewiring probability");

    std::vector<std::vector<AgentId>> adj(n);
    auto linked = [&](std::size_t a, std::size_t b) {
        return std::find(adj[a].begin(), adj[a].end(), static_cast<AgentId>(b)) != adj[a].end();
    };
    auto link = [&](std::size_t a, std::size_t b) {
        adj[a].push_back(static_cast<AgentId>(b));
        adj[b].push_back(static_cast<AgentId>(a));
    };
    auto unlink = [&](std::size_t a, std::size_t b) {
        std::erase(adj[a], static_cast<AgentId>(b));
        std::erase(adj[b], static_cast<AgentId>(a));
    };

    for (std::size_t j = 1; j <= k / 2; ++j)
        for (std::size_t u = 0; u < n; ++u)
            link(u, (u + j) % n);

    if (p_rewire > 0.0) {
        Rng rng(seed);
        for (std::size_t j = 1; j <= k / 2; ++j) {
            for (std::size_t u = 0; u < n; ++u) {
                if (uniform01(rng) >= p_rewire)
                    continue;
                const std::size_t v = (u + j) % n;
                if (!linked(u, v) || adj[u].size() >= n - 1)
                    continue;
                std::size_t w;
                do {
                    w = static_cast<std::size_t>(uniform_index(rng, n));
                } while (w == u || linked(u, w));
                unlink(u, v);
                link(u, w);
            }
        }
    }

    std::vector<std::pair<AgentId, AgentId>> edges;
    for (std::size_t a = 0; a < n; ++a)
        for (AgentId b : adj[a])
            if (a < b)
                edges.emplace_back(static_cast<AgentId>(a), b);
    return ContactNetwork::from_edges(n, edges);
}

ContactNetwork barabasi_albert(std::size_t n, std::size_t m, std::uint64_t seed)
{
    if (m < 1 || m >= n)
        throw DomainError("Barabasi-Albert requires 1 <= m < n");

    std::vector<std::pair<AgentId, AgentId>> edges;
    // Every edge endpoint appears once here, so a uniform pick is
    // degree-proportional.
    std::vector<AgentId> endpoints;
    for (AgentId a = 0; a < m; ++a)
        for (AgentId b = a + 1; b < m; ++b) {
            edges.emplace_back(a, b);
            endpoints.push_back(a);
            endpoints.push_back(b);
        }

    Rng rng(seed);
    std::vector<AgentId> chosen;
    for (std::size_t node = m; node < n; ++node) {
        chosen.clear();
        while (chosen.size() < m) {
            const AgentId target = endpoints.empty()
                                       ? static_cast<AgentId>(uniform_index(rng, node))
                                       : endpoints[uniform_index(rng, endpoints.size())];
            if (std::find(chosen.begin(), chosen.end(), target) == chosen.end())
                chosen.push_back(target);
        }
        for (AgentId target : chosen) {
            edges.emplace_back(target, static_cast<AgentId>(node));
            endpoints.push_back(target);
            endpoints.push_back(static_cast<AgentId>(node));
        }
    }
    return ContactNetwork::from_edges(n, edges);
}

double average_degree(const ContactNetwork &net)
{
    if (net.n_agents() == 0)
        throw DomainError("average degree of an empty network");
    return static_cast<double>(net.entry_count()) / static_cast<double>(net.n_agents());
}

DegreeStats degree_statistics(const ContactNetwork &net)
{
    DegreeStats out;
    const std::size_t n = net.n_agents();
    if (n == 0)
        return out;

    std::vector<std::size_t> degrees(n);
    for (AgentId a = 0; a < n; ++a)
        degrees[a] = net.degree(a);

    out.max = *std::max_element(degrees.begin(), degrees.end());
    out.histogram.assign(out.max + 1, 0);
    double sum = 0.0;
    for (auto d : degrees) {
        ++out.histogram[d];
        sum += static_cast<double>(d);
    }
    out.mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (auto d : degrees)
        ss += (static_cast<double>(d) - out.mean) * (static_cast<double>(d) - out.mean);
    out.variance = ss / static_cast<double>(n);

    std::sort(degrees.begin(), degrees.end());
    out.median = n % 2 == 1 ? static_cast<double>(degrees[n / 2])
                            : 0.5 * static_cast<double>(degrees[n / 2 - 1] + degrees[n / 2]);
    if (out.median > 0.0)
        out.tail_ratio = static_cast<double>(out.max) / out.median;
    else
        out.tail_ratio = out.max > 0 ? std::numeric_limits<double>::infinity() : 0.0;
    return out;
}

double average_clustering(const ContactNetwork &net)
{
    const std::size_t n = net.n_agents();
    if (n == 0)
        return 0.0;
    double total = 0.0;
    std::vector<AgentId> nb;
    for (AgentId a = 0; a < n; ++a) {
        nb.clear();
        for (AgentId b : net.neighbors(a))
            if (b != a)
                nb.push_back(b);
        if (nb.size() < 2)
            continue;
        std::size_t links = 0;
        for (std::size_t x = 0; x < nb.size(); ++x)
            for (std::size_t y = x + 1; y < nb.size(); ++y)
                if (net.has_edge(nb[x], nb[y]))
                    ++links;
        const double possible = 0.5 * static_cast<double>(nb.size()) * static_cast<double>(nb.size() - 1);
        total += static_cast<double>(links) / possible;
    }
    return total / static_cast<double>(n);
}

double mean_shortest_path(const ContactNetwork &net)
{
    const std::size_t n = net.n_agents();
    constexpr std::size_t unseen = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> dist(n);
    std::vector<AgentId> queue;
    queue.reserve(n);
    double total = 0.0;
    double pairs = 0.0;
    for (AgentId src = 0; src < n; ++src) {
        std::fill(dist.begin(), dist.end(), unseen);
        dist[src] = 0;
        queue.clear();
        queue.push_back(src);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const AgentId u = queue[head];
            for (AgentId v : net.neighbors(u)) {
                if (dist[v] != unseen)
                    continue;
                dist[v] = dist[u] + 1;
                total += static_cast<double>(dist[v]);
                pairs += 1.0;
                queue.push_back(v);
            }
        }
    }
    return pairs > 0.0 ? total / pairs : 0.0;
}

void write_edge_list(std::ostream &out, const ContactNetwork &net)
{
    out << "# agents: " << net.n_agents() << '\n';
    for (const auto &[a, b] : net.edges())
        out << a << ' ' << b << '\n';
}

ContactNetwork read_edge_list(std::istream &in)
{
    std::string line;
    int line_no = 0;
    std::optional<std::size_t> n_agents;
    std::vector<std::pair<AgentId, AgentId>> edges;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos)
            continue;

        if (!n_agents) {
            const std::string prefix = "# agents:";
            if (line.rfind(prefix, 0) != 0)
                throw ParseError("expected header \"# agents: N\"", line_no, 1);
            std::istringstream header(line.substr(prefix.size()));
            long long count = -1;
            std::string rest;
            if (!(header >> count) || count < 0 || (header >> rest))
                throw ParseError("malformed agent count in header", line_no, static_cast<int>(prefix.size()) + 1);
            n_agents = static_cast<std::size_t>(count);
            continue;
        }

        std::istringstream fields(line);
        long long a = -1, b = -1;
        std::string rest;
        if (!(fields >> a >> b) || (fields >> rest))
            throw ParseError("expected \"source target\"", line_no, 1);
        if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= *n_agents || static_cast<std::size_t>(b) >= *n_agents)
            throw ParseError("agent id out of range", line_no, 1);
        edges.emplace_back(static_cast<AgentId>(a), static_cast<AgentId>(b));
    }
    if (!n_agents)
        throw ParseError("missing header \"# agents: N\"", line_no, 0);
    return ContactNetwork::from_edges(*n_agents, edges);
}

} // namespace epinet
