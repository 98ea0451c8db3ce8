#pragma once

#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "epinet/network.hpp"

namespace epinet {

/// Matrix of per-pair transmission rates. Entry (j, i) is the rate at which
/// an infectious agent j infects a susceptible agent i, so row j lists what
/// j emits and column i what i receives.
///
/// Populations up to kDenseLimit agents are stored densely; larger ones use
/// a row-major sparse matrix. Both layouts behave identically.
class TransmissionMatrix {
public:
    using Dense = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    using Sparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

    static constexpr std::size_t kDenseLimit = 2048;

    struct Entry {
        AgentId source;
        AgentId target;
        double rate;
    };

    TransmissionMatrix() = default;

    /// Throws DomainError on negative or non-finite rates and DimensionError
    /// on a non-square matrix.
    explicit TransmissionMatrix(Dense rates);
    explicit TransmissionMatrix(Sparse rates);

    /// All-zero matrix of the given size.
    static TransmissionMatrix zero(std::size_t n);

    /// Builds from explicit entries, picking the layout from the size.
    static TransmissionMatrix from_entries(std::size_t n, const std::vector<Entry> &entries);

    std::size_t size() const noexcept;
    bool is_dense() const noexcept { return std::holds_alternative<Dense>(rates_); }

    double rate(AgentId source, AgentId target) const;

    /// Calls f(target, rate) for every positive rate in row `source`, in
    /// increasing target order.
    template <typename F>
    void for_each_outgoing(AgentId source, F &&f) const
    {
        if (const auto *dense = std::get_if<Dense>(&rates_)) {
            const double *row = dense->data() + static_cast<Eigen::Index>(source) * dense->cols();
            for (Eigen::Index i = 0; i < dense->cols(); ++i)
                if (row[i] > 0.0)
                    f(static_cast<AgentId>(i), row[i]);
        } else {
            const auto &sparse = std::get<Sparse>(rates_);
            for (Sparse::InnerIterator it(sparse, source); it; ++it)
                if (it.value() > 0.0)
                    f(static_cast<AgentId>(it.col()), it.value());
        }
    }

    /// out[i] = sum_j T(j, i) * weights[j], summed in a fixed order.
    Eigen::VectorXd incoming(const Eigen::VectorXd &weights) const;

    /// Sum of all entries (plain floating-point sum).
    double total_rate() const;

    /// Positive entries in row-major order.
    std::vector<Entry> entries() const;

    /// Unordered pairs {a, b}, a < b, with a positive rate in either
    /// direction, sorted.
    std::vector<std::pair<AgentId, AgentId>> symmetric_pairs() const;

    /// Sets both T(a, b) and T(b, a) to zero.
    void zero_pair(AgentId a, AgentId b);

    /// Multiplies every entry by factor (factor >= 0).
    void scale(double factor);

    Eigen::MatrixXd to_dense() const;

    /// Bit-exact comparison of the rates, independent of layout.
    friend bool operator==(const TransmissionMatrix &a, const TransmissionMatrix &b);

private:
    std::variant<Dense, Sparse> rates_;
};

/// T = beta * A entrywise. Throws DomainError if beta is negative.
TransmissionMatrix transmission_from_network(const ContactNetwork &net, double beta);

} // namespace epinet
