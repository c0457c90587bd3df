#pragma once

#include "sas/instance.hpp"
#include "sas/io.hpp"

#include <cstdint>

namespace sas {

enum class AvailabilityKind { Pda, Explicit, Sampler };

/**
 * The two-state example. State 0 (s1) offers Stay (self-loop) and Go (to s2),
 * both always available with reward 1/2. State 1 (s2) offers Up (reward 1,
 * available with probability p) and Down (reward 0, always available); both
 * return to s1. Action 0 is Stay/Up, action 1 is Go/Down.
 */
InstanceDocument two_state_document(double p, double discount, AvailabilityKind kind = AvailabilityKind::Pda,
                                    std::uint64_t sampler_seed = 0);
Instance two_state_instance(double p, double discount, AvailabilityKind kind = AvailabilityKind::Pda,
                            std::uint64_t sampler_seed = 0);

struct RandomInstanceSpec {
    std::size_t n_states = 3;
    std::size_t n_actions = 3;
    AvailabilityKind kind = AvailabilityKind::Pda;
    double discount = 0.9;
    std::uint64_t seed = 0;
    /// When positive, every number is a multiple of 1/delta.
    std::uint64_t delta = 0;
    /// Largest number of listed subsets per state for explicit tables.
    std::size_t max_support = 4;
};

/// Random dense instance with rewards in [-1, 1] and one always-available action per state.
Instance random_instance(const RandomInstanceSpec& spec);

/// Same base MDP where every action that can ever be available is always available.
Instance full_availability(const Instance& instance);

/// Unvalidated document view of an instance, for writing to disk.
InstanceDocument to_document(const Instance& instance);

} // namespace sas
