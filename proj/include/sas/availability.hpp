#pragma once

#include "sas/rng.hpp"
#include "sas/types.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <variant>
#include <vector>

namespace sas {

/// Product distribution: action k is available at s independently with probability rho(s, k).
struct PdaAvailability {
    std::size_t n_states = 0;
    std::size_t n_actions = 0;
    std::vector<double> rho;

    static PdaAvailability always(std::size_t n_states, std::size_t n_actions);

    double operator()(StateIndex s, ActionIndex k) const { return rho[s * n_actions + k]; }
    double& operator()(StateIndex s, ActionIndex k) { return rho[s * n_actions + k]; }
    std::span<const double> row(StateIndex s) const {
        return {rho.data() + s * n_actions, n_actions};
    }

    bool operator==(const PdaAvailability&) const = default;
};

struct SubsetMass {
    ActionMask mask = 0;
    double probability = 0.0;

    bool operator==(const SubsetMass&) const = default;
};

/// Categorical distribution over listed subsets at each state.
struct ExplicitAvailability {
    std::size_t n_actions = 0;
    std::vector<std::vector<SubsetMass>> states;

    std::size_t n_states() const { return states.size(); }

    bool operator==(const ExplicitAvailability&) const = default;
};

/// Black-box generator of available sets. Implementations must be stateless.
class SubsetSource {
public:
    virtual ~SubsetSource() = default;

    virtual std::size_t n_states() const = 0;
    virtual std::size_t n_actions() const = 0;
    virtual ActionMask draw(StateIndex s, Rng& rng) const = 0;

    /// Set when the source draws from a known model; used for validation and serialization.
    virtual const PdaAvailability* as_pda() const { return nullptr; }
    virtual const ExplicitAvailability* as_explicit() const { return nullptr; }
};

/// Sampling-only availability: the distribution is reachable only through seeded draws.
struct SamplerAvailability {
    std::uint64_t seed = 0;
    std::shared_ptr<const SubsetSource> source;

    std::size_t n_states() const { return source ? source->n_states() : 0; }
    std::size_t n_actions() const { return source ? source->n_actions() : 0; }

    /// Independent generator for (state, stream); identical arguments give identical draws.
    Rng stream(StateIndex s, std::uint64_t stream_id) const {
        return Rng(derive_seed(seed, s, stream_id));
    }

    /// One draw; throws Error(EmptySubsetPossible) if the source yields the empty set.
    ActionMask draw(StateIndex s, Rng& rng) const;

    bool operator==(const SamplerAvailability& other) const;
};

using AvailabilityModel = std::variant<PdaAvailability, ExplicitAvailability, SamplerAvailability>;

std::size_t model_states(const AvailabilityModel& model);
std::size_t model_actions(const AvailabilityModel& model);

std::shared_ptr<const SubsetSource> make_pda_source(PdaAvailability pda);
std::shared_ptr<const SubsetSource> make_explicit_source(ExplicitAvailability table);

/// Sampler whose hidden distribution is the given exact model.
SamplerAvailability make_sampler(const AvailabilityModel& exact, std::uint64_t seed);

/**
 * Probability of realizing exactly `subset` at state s.
 *
 * PDA: prod_{k in A} rho_k * prod_{k not in A} (1 - rho_k); Explicit: table lookup, 0 if
 * absent. Throws Error(UnsupportedModel) for a Sampler.
 */
double subset_probability(const AvailabilityModel& model, StateIndex s, ActionMask subset);
double subset_probability(const PdaAvailability& pda, StateIndex s, ActionMask subset);
double subset_probability(const ExplicitAvailability& table, StateIndex s, ActionMask subset);

/// Subsets with positive probability at s, in ascending mask order. m <= 62.
std::vector<SubsetMass> positive_support(const AvailabilityModel& model, StateIndex s);

/// Full enumeration of a PDA into an explicit table (zero-mass subsets dropped). m <= 30.
ExplicitAvailability expand_to_explicit(const PdaAvailability& pda);

/// Draw an available set from any model.
ActionMask draw_subset(const AvailabilityModel& model, StateIndex s, Rng& rng);

} // namespace sas
