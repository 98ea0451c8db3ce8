#include "epinet/transmission.hpp"

#include <algorithm>
#include <cmath>

#include "epinet/error.hpp"

namespace epinet {

namespace {

void check_rate(double v)
{
    if (!std::isfinite(v) || v < 0.0)
        throw DomainError("transmission rates must be finite and non-negative");
}

} // namespace

TransmissionMatrix::TransmissionMatrix(Dense rates)
{
    if (rates.rows() != rates.cols())
        throw DimensionError("transmission matrix must be square");
    for (Eigen::Index k = 0; k < rates.size(); ++k)
        check_rate(rates.data()[k]);
    rates_ = std::move(rates);
}

TransmissionMatrix::TransmissionMatrix(Sparse rates)
{
    if (rates.rows() != rates.cols())
        throw DimensionError("transmission matrix must be square");
    rates.makeCompressed();
    for (Eigen::Index k = 0; k < rates.nonZeros(); ++k)
        check_rate(rates.valuePtr()[k]);
    rates_ = std::move(rates);
}

TransmissionMatrix TransmissionMatrix::zero(std::size_t n)
{
    return from_entries(n, {});
}

TransmissionMatrix TransmissionMatrix::from_entries(std::size_t n, const std::vector<Entry> &entries)
{
    const auto size = static_cast<Eigen::Index>(n);
    for (const auto &e : entries) {
        if (e.source >= n || e.target >= n)
            throw DomainError("transmission entry out of range");
        check_rate(e.rate);
    }
    if (n <= kDenseLimit) {
        Dense dense = Dense::Zero(size, size);
        for (const auto &e : entries)
            dense(e.source, e.target) = e.rate;
        return TransmissionMatrix(std::move(dense));
    }
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(entries.size());
    for (const auto &e : entries)
        triplets.emplace_back(e.source, e.target, e.rate);
    Sparse sparse(size, size);
    sparse.setFromTriplets(triplets.begin(), triplets.end(), [](double, double b) { return b; });
    return TransmissionMatrix(std::move(sparse));
}

std::size_t TransmissionMatrix::size() const noexcept
{
    return std::visit([](const auto &m) { return static_cast<std::size_t>(m.rows()); }, rates_);
}

double TransmissionMatrix::rate(AgentId source, AgentId target) const
{
    if (source >= size() || target >= size())
        throw DomainError("agent id out of range");
    if (const auto *dense = std::get_if<Dense>(&rates_))
        return (*dense)(source, target);
    return std::get<Sparse>(rates_).coeff(source, target);
}

Eigen::VectorXd TransmissionMatrix::incoming(const Eigen::VectorXd &weights) const
{
    if (static_cast<std::size_t>(weights.size()) != size())
        throw DimensionError("weight vector does not match transmission matrix");
    if (const auto *dense = std::get_if<Dense>(&rates_))
        return dense->transpose() * weights;
    return std::get<Sparse>(rates_).transpose() * weights;
}

double TransmissionMatrix::total_rate() const
{
    return std::visit([](const auto &m) { return m.sum(); }, rates_);
}

std::vector<TransmissionMatrix::Entry> TransmissionMatrix::entries() const
{
    std::vector<Entry> out;
    for (AgentId j = 0; j < size(); ++j)
        for_each_outgoing(j, [&](AgentId i, double r) { out.push_back({j, i, r}); });
    return out;
}

std::vector<std::pair<AgentId, AgentId>> TransmissionMatrix::symmetric_pairs() const
{
    std::vector<std::pair<AgentId, AgentId>> out;
    for (AgentId j = 0; j < size(); ++j)
        for_each_outgoing(j, [&](AgentId i, double) {
            if (i != j)
                out.emplace_back(std::min(i, j), std::max(i, j));
        });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void TransmissionMatrix::zero_pair(AgentId a, AgentId b)
{
    if (a >= size() || b >= size())
        throw DomainError("agent id out of range");
    if (auto *dense = std::get_if<Dense>(&rates_)) {
        (*dense)(a, b) = 0.0;
        (*dense)(b, a) = 0.0;
        return;
    }
    // Only touch stored entries so the sparsity pattern never grows.
    auto &sparse = std::get<Sparse>(rates_);
    auto clear = [&](AgentId row, AgentId col) {
        for (Sparse::InnerIterator it(sparse, row); it; ++it)
            if (static_cast<AgentId>(it.col()) == col) {
                it.valueRef() = 0.0;
                return;
            }
    };
    clear(a, b);
    clear(b, a);
}

void TransmissionMatrix::scale(double factor)
{
    check_rate(factor);
    std::visit([factor](auto &m) { m *= factor; }, rates_);
}

Eigen::MatrixXd TransmissionMatrix::to_dense() const
{
    if (const auto *dense = std::get_if<Dense>(&rates_))
        return *dense;
    return Eigen::MatrixXd(std::get<Sparse>(rates_));
}

bool operator==(const TransmissionMatrix &a, const TransmissionMatrix &b)
{
    if (a.size() != b.size())
        return false;
    if (a.is_dense() && b.is_dense()) {
        const auto &x = std::get<TransmissionMatrix::Dense>(a.rates_);
        const auto &y = std::get<TransmissionMatrix::Dense>(b.rates_);
        return std::equal(x.data(), x.data() + x.size(), y.data());
    }
    const auto ea = a.entries();
    const auto eb = b.entries();
    return std::equal(ea.begin(), ea.end(), eb.begin(), eb.end(), [](const auto &x, const auto &y) {
        return x.source == y.source && x.target == y.target && x.rate == y.rate;
    });
}

TransmissionMatrix transmission_from_network(const ContactNetwork &net, double beta)
{
    if (!std::isfinite(beta) || beta < 0.0)
        throw DomainError("beta must be finite and non-negative");
    const std::size_t n = net.n_agents();
    const auto size = static_cast<Eigen::Index>(n);
    if (n <= TransmissionMatrix::kDenseLimit) {
        TransmissionMatrix::Dense dense = TransmissionMatrix::Dense::Zero(size, size);
        for (AgentId a = 0; a < n; ++a)
            for (AgentId b : net.neighbors(a))
                dense(a, b) = beta;
        return TransmissionMatrix(std::move(dense));
    }
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(net.entry_count());
    for (AgentId a = 0; a < n; ++a)
        for (AgentId b : net.neighbors(a))
            triplets.emplace_back(a, b, beta);
    TransmissionMatrix::Sparse sparse(size, size);
    sparse.setFromTriplets(triplets.begin(), triplets.end());
    return TransmissionMatrix(std::move(sparse));
}

} // namespace epinet
