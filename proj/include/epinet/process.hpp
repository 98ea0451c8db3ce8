#pragma once

#include <cstdint>
#include <memory>

#include "epinet/transmission.hpp"
#include "epinet/types.hpp"

namespace epinet {

/// A stepwise epidemic simulation whose transmission matrix and state can be
/// modified between steps. Interventions and the economic coupling drive the
/// agent-based and mean-field models through this interface.
class EpidemicProcess {
public:
    virtual ~EpidemicProcess() = default;

    virtual std::size_t population() const = 0;

    /// Current compartment sizes (expected sizes for probabilistic models).
    virtual CompartmentState counts() const = 0;

    /// Matrix used from the next step on.
    virtual void set_transmission(std::shared_ptr<const TransmissionMatrix> matrix) = 0;

    /// Advances the state from time t to t + dt.
    virtual void advance(double t, double dt) = 0;

    /// Moves `fraction` of the susceptible mass to R. Returns the number of
    /// agents (or expected agents) moved.
    virtual double vaccinate(double fraction, std::uint64_t seed) = 0;

    /// Multiplier applied to death rates from the next step on. Models
    /// without deaths ignore it.
    virtual void set_death_rate_multiplier(double) {}
};

} // namespace epinet
