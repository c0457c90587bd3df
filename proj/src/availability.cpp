#include "sas/availability.hpp"

#include "sas/error.hpp"

#include <algorithm>
#include <string>

namespace sas {

PdaAvailability PdaAvailability::always(std::size_t n_states, std::size_t n_actions) {
    return PdaAvailability{n_states, n_actions, std::vector<double>(n_states * n_actions, 1.0)};
}

namespace {

ActionMask draw_pda(const PdaAvailability& pda, StateIndex s, Rng& rng) {
    ActionMask mask = 0;
    for (ActionIndex k = 0; k < pda.n_actions; ++k) {
        if (rng.bernoulli(pda(s, k))) {
            mask |= action_bit(k);
        }
    }
    return mask;
}

ActionMask draw_explicit(const ExplicitAvailability& table, StateIndex s, Rng& rng) {
    const auto& entries = table.states[s];
    const double u = rng.uniform();
    double cumulative = 0.0;
    for (const auto& entry : entries) {
        cumulative += entry.probability;
        if (u < cumulative) {
            return entry.mask;
        }
    }
    // Rounding can leave u above the final cumulative sum.
    for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
        if (it->probability > 0.0) {
            return it->mask;
        }
    }
    return 0;
}

class PdaSource final : public SubsetSource {
public:
    explicit PdaSource(PdaAvailability pda) : pda_(std::move(pda)) {
        if (pda_.n_actions > kMaxMaskActions) {
            throw Error(ErrorCode::TooLarge, "sampling a PDA needs at most 62 actions");
        }
    }

    std::size_t n_states() const override { return pda_.n_states; }
    std::size_t n_actions() const override { return pda_.n_actions; }

    ActionMask draw(StateIndex s, Rng& rng) const override { return draw_pda(pda_, s, rng); }

    const PdaAvailability* as_pda() const override { return &pda_; }

private:
    PdaAvailability pda_;
};

class ExplicitSource final : public SubsetSource {
public:
    explicit ExplicitSource(ExplicitAvailability table) : table_(std::move(table)) {}

    std::size_t n_states() const override { return table_.n_states(); }
    std::size_t n_actions() const override { return table_.n_actions; }

    ActionMask draw(StateIndex s, Rng& rng) const override {
        return draw_explicit(table_, s, rng);
    }

    const ExplicitAvailability* as_explicit() const override { return &table_; }

private:
    ExplicitAvailability table_;
};

} // namespace

ActionMask SamplerAvailability::draw(StateIndex s, Rng& rng) const {
    const ActionMask mask = source->draw(s, rng);
    if (mask == 0) {
        throw Error(ErrorCode::EmptySubsetPossible,
                    "sampler produced an empty available set at state " + std::to_string(s));
    }
    return mask;
}

bool SamplerAvailability::operator==(const SamplerAvailability& other) const {
    if (seed != other.seed) {
        return false;
    }
    if (source == other.source) {
        return true;
    }
    if (!source || !other.source) {
        return false;
    }
    if (source->as_pda() && other.source->as_pda()) {
        return *source->as_pda() == *other.source->as_pda();
    }
    if (source->as_explicit() && other.source->as_explicit()) {
        return *source->as_explicit() == *other.source->as_explicit();
    }
    return false;
}

std::size_t model_states(const AvailabilityModel& model) {
    return std::visit(
        [](const auto& m) -> std::size_t {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, PdaAvailability>) {
                return m.n_states;
            } else {
                return m.n_states();
            }
        },
        model);
}

std::size_t model_actions(const AvailabilityModel& model) {
    return std::visit(
        [](const auto& m) -> std::size_t {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, SamplerAvailability>) {
                return m.n_actions();
            } else {
                return m.n_actions;
            }
        },
        model);
}

std::shared_ptr<const SubsetSource> make_pda_source(PdaAvailability pda) {
    return std::make_shared<PdaSource>(std::move(pda));
}

std::shared_ptr<const SubsetSource> make_explicit_source(ExplicitAvailability table) {
    return std::make_shared<ExplicitSource>(std::move(table));
}

SamplerAvailability make_sampler(const AvailabilityModel& exact, std::uint64_t seed) {
    if (const auto* pda = std::get_if<PdaAvailability>(&exact)) {
        return SamplerAvailability{seed, make_pda_source(*pda)};
    }
    if (const auto* table = std::get_if<ExplicitAvailability>(&exact)) {
        return SamplerAvailability{seed, make_explicit_source(*table)};
    }
    auto sampler = std::get<SamplerAvailability>(exact);
    sampler.seed = seed;
    return sampler;
}

double subset_probability(const PdaAvailability& pda, StateIndex s, ActionMask subset) {
    double p = 1.0;
    for (ActionIndex k = 0; k < pda.n_actions; ++k) {
        const double rho = pda(s, k);
        p *= (k < 64 && contains(subset, k)) ? rho : 1.0 - rho;
    }
    return p;
}

double subset_probability(const ExplicitAvailability& table, StateIndex s, ActionMask subset) {
    double p = 0.0;
    for (const auto& entry : table.states[s]) {
        if (entry.mask == subset) {
            p += entry.probability;
        }
    }
    return p;
}

double subset_probability(const AvailabilityModel& model, StateIndex s, ActionMask subset) {
    if (const auto* pda = std::get_if<PdaAvailability>(&model)) {
        return subset_probability(*pda, s, subset);
    }
    if (const auto* table = std::get_if<ExplicitAvailability>(&model)) {
        return subset_probability(*table, s, subset);
    }
    throw Error(ErrorCode::UnsupportedModel, "subset probabilities are not available for a sampler");
}

namespace {

std::vector<SubsetMass> pda_support(const PdaAvailability& pda, StateIndex s) {
    if (pda.n_actions > kMaxMaskActions) {
        throw Error(ErrorCode::TooLarge, "subset enumeration needs at most 62 actions");
    }
    // Enumerate only the uncertain actions; sure actions are always in, impossible ones never.
    ActionMask sure = 0;
    std::vector<ActionIndex> uncertain;
    for (ActionIndex k = 0; k < pda.n_actions; ++k) {
        const double rho = pda(s, k);
        if (rho >= 1.0) {
            sure |= action_bit(k);
        } else if (rho > 0.0) {
            uncertain.push_back(k);
        }
    }
    if (uncertain.size() > 30) {
        throw Error(ErrorCode::TooLarge, "too many uncertain actions to enumerate subsets");
    }
    std::vector<SubsetMass> out;
    out.reserve(std::size_t{1} << uncertain.size());
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << uncertain.size()); ++bits) {
        ActionMask mask = sure;
        for (std::size_t i = 0; i < uncertain.size(); ++i) {
            if ((bits >> i) & 1U) {
                mask |= action_bit(uncertain[i]);
            }
        }
        const double p = subset_probability(pda, s, mask);
        if (p > 0.0 && mask != 0) {
            out.push_back({mask, p});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const SubsetMass& a, const SubsetMass& b) { return a.mask < b.mask; });
    return out;
}

} // namespace

std::vector<SubsetMass> positive_support(const AvailabilityModel& model, StateIndex s) {
    if (const auto* pda = std::get_if<PdaAvailability>(&model)) {
        return pda_support(*pda, s);
    }
    if (const auto* table = std::get_if<ExplicitAvailability>(&model)) {
        std::vector<SubsetMass> out;
        for (const auto& entry : table->states[s]) {
            if (entry.probability <= 0.0) {
                continue;
            }
            auto it = std::find_if(out.begin(), out.end(),
                                   [&](const SubsetMass& e) { return e.mask == entry.mask; });
            if (it == out.end()) {
                out.push_back(entry);
            } else {
                it->probability += entry.probability;
            }
        }
        std::sort(out.begin(), out.end(),
                  [](const SubsetMass& a, const SubsetMass& b) { return a.mask < b.mask; });
        return out;
    }
    throw Error(ErrorCode::UnsupportedModel, "a sampler has no enumerable support");
}

ExplicitAvailability expand_to_explicit(const PdaAvailability& pda) {
    ExplicitAvailability table;
    table.n_actions = pda.n_actions;
    table.states.reserve(pda.n_states);
    for (StateIndex s = 0; s < pda.n_states; ++s) {
        table.states.push_back(pda_support(pda, s));
    }
    return table;
}

ActionMask draw_subset(const AvailabilityModel& model, StateIndex s, Rng& rng) {
    if (const auto* sampler = std::get_if<SamplerAvailability>(&model)) {
        return sampler->draw(s, rng);
    }
    if (model_actions(model) > kMaxMaskActions) {
        throw Error(ErrorCode::TooLarge, "sampling needs at most 62 actions");
    }
    if (const auto* pda = std::get_if<PdaAvailability>(&model)) {
        return draw_pda(*pda, s, rng);
    }
    return draw_explicit(std::get<ExplicitAvailability>(model), s, rng);
}

} // namespace sas
