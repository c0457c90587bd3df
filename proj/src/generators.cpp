#include "sas/generators.hpp"

#include "sas/rng.hpp"

#include <algorithm>
#include <numeric>

namespace sas {

InstanceDocument two_state_document(double p, double discount, AvailabilityKind kind,
                                    std::uint64_t sampler_seed) {
    InstanceDocument doc;
    doc.mdp = BaseMdp::zeros(2, 2, discount);
    constexpr StateIndex s1 = 0;
    constexpr StateIndex s2 = 1;
    // s1: Stay, Go
    doc.mdp.transition_row(s1, 0)[s1] = 1.0;
    doc.mdp.reward(s1, 0) = 0.5;
    doc.mdp.transition_row(s1, 1)[s2] = 1.0;
    doc.mdp.reward(s1, 1) = 0.5;
    // s2: Up, Down
    doc.mdp.transition_row(s2, 0)[s1] = 1.0;
    doc.mdp.reward(s2, 0) = 1.0;
    doc.mdp.transition_row(s2, 1)[s1] = 1.0;
    doc.mdp.reward(s2, 1) = 0.0;

    PdaAvailability pda{2, 2, {1.0, 1.0, p, 1.0}};
    switch (kind) {
    case AvailabilityKind::Pda: doc.availability = pda; break;
    case AvailabilityKind::Explicit: {
        ExplicitAvailability table{2, {{{0b11, 1.0}}, {}}};
        if (p > 0.0) {
            table.states[s2].push_back({0b11, p});
        }
        if (p < 1.0) {
            table.states[s2].push_back({0b10, 1.0 - p});
        }
        doc.availability = table;
        break;
    }
    case AvailabilityKind::Sampler: doc.availability = SamplerAvailability{sampler_seed, make_pda_source(pda)}; break;
    }
    doc.state_names = {"s1", "s2"};
    doc.action_names = {{"Stay", "Go"}, {"Up", "Down"}};
    return doc;
}

Instance two_state_instance(double p, double discount, AvailabilityKind kind, std::uint64_t sampler_seed) {
    InstanceDocument doc = two_state_document(p, discount, kind, sampler_seed);
    return validate(std::move(doc.mdp), std::move(doc.availability));
}

namespace {

/// Random probability vector of length `size`; multiples of 1/delta when delta > 0.
std::vector<double> random_distribution(std::size_t size, std::uint64_t delta, Rng& rng) {
    std::vector<double> out(size);
    if (delta > 0) {
        std::vector<std::uint64_t> cuts(size - 1);
        for (auto& c : cuts) {
            c = rng.below(delta + 1);
        }
        std::sort(cuts.begin(), cuts.end());
        std::uint64_t prev = 0;
        for (std::size_t i = 0; i + 1 < size; ++i) {
            out[i] = static_cast<double>(cuts[i] - prev) / static_cast<double>(delta);
            prev = cuts[i];
        }
        out[size - 1] = static_cast<double>(delta - prev) / static_cast<double>(delta);
        return out;
    }
    double total = 0.0;
    for (auto& x : out) {
        x = rng.uniform() + 1e-3;
        total += x;
    }
    for (auto& x : out) {
        x /= total;
    }
    return out;
}

double random_unit(std::uint64_t delta, Rng& rng) {
    if (delta > 0) {
        return static_cast<double>(rng.below(delta + 1)) / static_cast<double>(delta);
    }
    return rng.uniform();
}

} // namespace

Instance random_instance(const RandomInstanceSpec& spec) {
    const std::size_t n = spec.n_states;
    const std::size_t m = spec.n_actions;
    Rng rng(derive_seed(spec.seed, 0x72616e64));
    BaseMdp mdp = BaseMdp::zeros(n, m, spec.discount);
    for (StateIndex s = 0; s < n; ++s) {
        for (ActionIndex k = 0; k < m; ++k) {
            mdp.reward(s, k) = 2.0 * random_unit(spec.delta, rng) - 1.0;
            const auto dist = random_distribution(n, spec.delta, rng);
            std::copy(dist.begin(), dist.end(), mdp.transition_row(s, k).begin());
        }
    }

    AvailabilityModel availability;
    if (spec.kind == AvailabilityKind::Explicit) {
        ExplicitAvailability table{m, std::vector<std::vector<SubsetMass>>(n)};
        const ActionMask all = full_mask(m);
        for (StateIndex s = 0; s < n; ++s) {
            const std::size_t support =
                1 + rng.below(std::min<std::uint64_t>(spec.max_support, all));
            std::vector<ActionMask> masks;
            while (masks.size() < support) {
                const ActionMask mask = 1 + rng.below(all);
                if (std::find(masks.begin(), masks.end(), mask) == masks.end()) {
                    masks.push_back(mask);
                }
            }
            const auto probs = random_distribution(support, 0, rng);
            for (std::size_t i = 0; i < support; ++i) {
                table.states[s].push_back({masks[i], probs[i]});
            }
        }
        availability = std::move(table);
    } else {
        PdaAvailability pda{n, m, std::vector<double>(n * m)};
        for (StateIndex s = 0; s < n; ++s) {
            const ActionIndex sure = rng.below(m);
            for (ActionIndex k = 0; k < m; ++k) {
                pda(s, k) = k == sure ? 1.0 : random_unit(spec.delta, rng);
            }
        }
        if (spec.kind == AvailabilityKind::Sampler) {
            availability = SamplerAvailability{derive_seed(spec.seed, 0x73616d70), make_pda_source(pda)};
        } else {
            availability = std::move(pda);
        }
    }
    return validate(std::move(mdp), std::move(availability));
}

Instance full_availability(const Instance& instance) {
    const std::size_t n = instance.n_states();
    const std::size_t m = instance.n_actions();
    PdaAvailability full{n, m, std::vector<double>(n * m, 0.0)};
    for (StateIndex s = 0; s < n; ++s) {
        if (const auto* pda = instance.pda()) {
            for (ActionIndex k = 0; k < m; ++k) {
                full(s, k) = (*pda)(s, k) > 0.0 ? 1.0 : 0.0;
            }
        } else if (const auto* table = instance.explicit_table()) {
            ActionMask seen = 0;
            for (const auto& entry : table->states[s]) {
                seen |= entry.probability > 0.0 ? entry.mask : 0;
            }
            for (ActionIndex k = 0; k < m; ++k) {
                full(s, k) = contains(seen, k) ? 1.0 : 0.0;
            }
        } else {
            throw Error(ErrorCode::UnsupportedModel, "full availability needs a PDA or explicit model");
        }
    }
    return instance.with_availability(std::move(full));
}

InstanceDocument to_document(const Instance& instance) {
    InstanceDocument doc;
    doc.mdp = instance.mdp();
    doc.availability = instance.availability();
    return doc;
}

} // namespace sas
