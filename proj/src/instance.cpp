#include "sas/instance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sas {

namespace {

std::string at(StateIndex s) { return "state " + std::to_string(s); }
std::string at(StateIndex s, ActionIndex k) {
    return "state " + std::to_string(s) + ", action " + std::to_string(k);
}

void check_mdp(const BaseMdp& mdp, std::vector<ValidationIssue>& issues) {
    const std::size_t n = mdp.n_states;
    const std::size_t m = mdp.n_actions;
    if (n == 0 || m == 0) {
        issues.push_back({ErrorCode::DimensionMismatch, "need at least one state and one action"});
        return;
    }
    if (mdp.transitions.size() != n * m * n) {
        issues.push_back({ErrorCode::DimensionMismatch,
                          "transitions hold " + std::to_string(mdp.transitions.size()) +
                              " entries, expected " + std::to_string(n * m * n)});
        return;
    }
    if (mdp.rewards.size() != n * m) {
        issues.push_back({ErrorCode::DimensionMismatch,
                          "rewards hold " + std::to_string(mdp.rewards.size()) + " entries, expected " +
                              std::to_string(n * m)});
        return;
    }
    if (!(mdp.discount >= 0.0 && mdp.discount < 1.0)) {
        issues.push_back({ErrorCode::BadDiscount,
                          "discount " + std::to_string(mdp.discount) + " is outside [0, 1)"});
    }
    for (StateIndex s = 0; s < n; ++s) {
        for (ActionIndex k = 0; k < m; ++k) {
            if (!std::isfinite(mdp.reward(s, k))) {
                issues.push_back({ErrorCode::NonFiniteValue, "reward at " + at(s, k) + " is not finite"});
            }
            const auto row = mdp.transition_row(s, k);
            double sum = 0.0;
            bool negative = false;
            for (double p : row) {
                negative = negative || !(p >= 0.0);
                sum += p;
            }
            if (negative || !(std::abs(sum - 1.0) <= kRowSumTolerance)) {
                issues.push_back({ErrorCode::NonStochasticRow,
                                  "transition row at " + at(s, k) + " sums to " + std::to_string(sum) +
                                      (negative ? " and has negative or NaN entries" : "")});
            }
        }
    }
}

void check_pda(const PdaAvailability& pda, std::vector<ValidationIssue>& issues) {
    for (StateIndex s = 0; s < pda.n_states; ++s) {
        bool has_sure = false;
        for (ActionIndex k = 0; k < pda.n_actions; ++k) {
            const double rho = pda(s, k);
            if (!(rho >= 0.0 && rho <= 1.0)) {
                issues.push_back({ErrorCode::BadProbability,
                                  "availability at " + at(s, k) + " is outside [0, 1]"});
            }
            has_sure = has_sure || rho == 1.0;
        }
        if (!has_sure) {
            issues.push_back({ErrorCode::EmptySubsetPossible,
                              "no action is always available at " + at(s)});
        }
    }
}

void check_explicit(const ExplicitAvailability& table, std::vector<ValidationIssue>& issues) {
    if (table.n_actions > kMaxMaskActions) {
        issues.push_back({ErrorCode::TooLarge, "explicit availability supports at most 62 actions"});
        return;
    }
    const ActionMask valid = full_mask(table.n_actions);
    for (StateIndex s = 0; s < table.n_states(); ++s) {
        double total = 0.0;
        for (const auto& entry : table.states[s]) {
            if (!(entry.probability >= 0.0 && entry.probability <= 1.0)) {
                issues.push_back({ErrorCode::BadProbability,
                                  "subset probability at " + at(s) + " is outside [0, 1]"});
            }
            if (entry.mask == 0) {
                issues.push_back({ErrorCode::EmptySubsetPossible,
                                  "the empty subset is listed at " + at(s)});
            }
            if ((entry.mask & ~valid) != 0) {
                issues.push_back({ErrorCode::DimensionMismatch,
                                  "subset at " + at(s) + " names an action outside the base set"});
            }
            total += entry.probability;
        }
        if (!(std::abs(total - 1.0) <= kRowSumTolerance)) {
            issues.push_back({ErrorCode::NonStochasticRow,
                              "subset probabilities at " + at(s) + " sum to " + std::to_string(total)});
        }
    }
}

void check_dimensions(const BaseMdp& mdp, std::size_t n, std::size_t m, const char* what,
                      std::vector<ValidationIssue>& issues) {
    if (n != mdp.n_states || m != mdp.n_actions) {
        issues.push_back({ErrorCode::DimensionMismatch,
                          std::string(what) + " availability is " + std::to_string(n) + "x" +
                              std::to_string(m) + ", base MDP is " + std::to_string(mdp.n_states) +
                              "x" + std::to_string(mdp.n_actions)});
    }
}

} // namespace

std::vector<ValidationIssue> check_instance(const BaseMdp& mdp, const AvailabilityModel& availability) {
    std::vector<ValidationIssue> issues;
    check_mdp(mdp, issues);

    if (const auto* pda = std::get_if<PdaAvailability>(&availability)) {
        if (pda->rho.size() != pda->n_states * pda->n_actions) {
            issues.push_back({ErrorCode::DimensionMismatch, "rho table has the wrong size"});
            return issues;
        }
        check_dimensions(mdp, pda->n_states, pda->n_actions, "PDA", issues);
        check_pda(*pda, issues);
    } else if (const auto* table = std::get_if<ExplicitAvailability>(&availability)) {
        check_dimensions(mdp, table->n_states(), table->n_actions, "explicit", issues);
        check_explicit(*table, issues);
    } else {
        const auto& sampler = std::get<SamplerAvailability>(availability);
        if (!sampler.source) {
            issues.push_back({ErrorCode::UnsupportedModel, "sampler has no subset source"});
            return issues;
        }
        check_dimensions(mdp, sampler.n_states(), sampler.n_actions(), "sampler", issues);
        if (sampler.n_actions() > kMaxMaskActions) {
            issues.push_back({ErrorCode::TooLarge, "a sampler supports at most 62 actions"});
        }
        // Known sources are checked through their model; opaque ones are checked at draw time.
        if (const auto* pda = sampler.source->as_pda()) {
            check_pda(*pda, issues);
        } else if (const auto* inner = sampler.source->as_explicit()) {
            check_explicit(*inner, issues);
        }
    }
    return issues;
}

Instance validate(BaseMdp mdp, AvailabilityModel availability) {
    auto issues = check_instance(mdp, availability);
    if (!issues.empty()) {
        throw ValidationError(std::move(issues));
    }
    return Instance(std::move(mdp), std::move(availability));
}

Instance Instance::with_availability(AvailabilityModel availability) const {
    return validate(mdp_, std::move(availability));
}

double Instance::value_bound() const {
    double r_max = 0.0;
    for (double r : mdp_.rewards) {
        r_max = std::max(r_max, std::abs(r));
    }
    return r_max / (1.0 - mdp_.discount);
}

} // namespace sas
