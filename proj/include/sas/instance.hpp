#pragma once

#include "sas/availability.hpp"
#include "sas/error.hpp"
#include "sas/types.hpp"

#include <vector>

namespace sas {

inline constexpr double kRowSumTolerance = 1e-12;

class Instance;

/// Every violated invariant of (mdp, availability); empty when the pair is valid.
std::vector<ValidationIssue> check_instance(const BaseMdp& mdp, const AvailabilityModel& availability);

/// Returns the validated instance; throws ValidationError listing every violation otherwise.
Instance validate(BaseMdp mdp, AvailabilityModel availability);

/**
 * A base MDP paired with an availability model that passed validation.
 *
 * Only validate() constructs one, so every function taking an Instance may
 * assume stochastic rows, finite rewards, 0 <= discount < 1 and that the empty
 * set has zero probability at every state.
 */
class Instance {
public:
    const BaseMdp& mdp() const { return mdp_; }
    const AvailabilityModel& availability() const { return availability_; }

    std::size_t n_states() const { return mdp_.n_states; }
    std::size_t n_actions() const { return mdp_.n_actions; }
    double discount() const { return mdp_.discount; }

    const PdaAvailability* pda() const { return std::get_if<PdaAvailability>(&availability_); }
    const ExplicitAvailability* explicit_table() const {
        return std::get_if<ExplicitAvailability>(&availability_);
    }
    const SamplerAvailability* sampler() const {
        return std::get_if<SamplerAvailability>(&availability_);
    }
    bool is_exact() const { return sampler() == nullptr; }

    /// Same base MDP, different availability; re-validated.
    Instance with_availability(AvailabilityModel availability) const;

    /// max |r| / (1 - discount), a bound on every value function norm.
    double value_bound() const;

    bool operator==(const Instance&) const = default;

private:
    Instance(BaseMdp mdp, AvailabilityModel availability)
        : mdp_(std::move(mdp)), availability_(std::move(availability)) {}

    friend Instance validate(BaseMdp mdp, AvailabilityModel availability);

    BaseMdp mdp_;
    AvailabilityModel availability_;
};

} // namespace sas
