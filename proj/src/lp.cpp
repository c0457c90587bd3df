#include "sas/lp.hpp"

#include "sas/backup.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace sas {

double DlConstraint::q_value(std::span<const double> values) const {
    double q = constant;
    for (std::size_t t = 0; t < coefficients.size(); ++t) {
        q += coefficients[t] * values[t];
    }
    return q;
}

LpRow DlConstraint::row() const {
    LpRow row{std::vector<double>(coefficients.size()), RowSense::GreaterEqual, constant};
    for (std::size_t t = 0; t < coefficients.size(); ++t) {
        row.coefficients[t] = -coefficients[t];
    }
    row.coefficients[state] += 1.0;
    return row;
}

DlConstraint make_dl_constraint(const Instance& instance, StateIndex s, std::vector<ActionIndex> sigma) {
    if (sigma.size() != instance.n_actions() || !is_permutation_of_range(sigma)) {
        throw Error(ErrorCode::BadParameter, "sigma is not a permutation of the actions");
    }
    const BaseMdp& mdp = instance.mdp();
    DlConstraint c{s, std::move(sigma), std::vector<double>(mdp.n_states, 0.0), 0.0};
    const auto weights = selection_probabilities(instance, s, c.sigma);
    for (ActionIndex k = 0; k < mdp.n_actions; ++k) {
        if (weights[k] == 0.0) {
            continue;
        }
        c.constant += weights[k] * mdp.reward(s, k);
        const auto row = mdp.transition_row(s, k);
        for (StateIndex t = 0; t < mdp.n_states; ++t) {
            c.coefficients[t] += weights[k] * mdp.discount * row[t];
        }
    }
    return c;
}

Separation separation_oracle(const Instance& instance, std::span<const double> values, StateIndex s) {
    if (!instance.is_exact()) {
        throw Error(ErrorCode::UnsupportedModel, "the separation oracle needs a PDA or explicit model");
    }
    const BaseMdp& mdp = instance.mdp();
    std::vector<double> q(mdp.n_actions);
    for (ActionIndex k = 0; k < mdp.n_actions; ++k) {
        double expected = 0.0;
        const auto row = mdp.transition_row(s, k);
        for (StateIndex t = 0; t < mdp.n_states; ++t) {
            expected += row[t] * values[t];
        }
        q[k] = mdp.reward(s, k) + mdp.discount * expected;
    }
    Separation out;
    out.sigma = greedy_order(q);
    out.violation = list_value(instance, s, out.sigma, q) - values[s];
    return out;
}

LpResult solve_lp(const Instance& instance, const LpOptions& options) {
    if (!instance.is_exact()) {
        throw Error(ErrorCode::UnsupportedModel, "the LP solver needs a PDA or explicit model");
    }
    if (!(options.tol > 0.0)) {
        throw Error(ErrorCode::BadParameter, "tol must be positive");
    }
    const std::size_t n = instance.n_states();
    const std::size_t m = instance.n_actions();

    LinearProgram lp;
    lp.n_vars = n;
    lp.free_vars.assign(n, true);
    lp.objective = options.alpha.empty() ? std::vector<double>(n, 1.0 / static_cast<double>(n)) : options.alpha;
    if (lp.objective.size() != n) {
        throw Error(ErrorCode::DimensionMismatch, "alpha has the wrong length");
    }
    if (std::any_of(lp.objective.begin(), lp.objective.end(), [](double a) { return !(a > 0.0); })) {
        throw Error(ErrorCode::BadParameter, "alpha must be positive at every state");
    }

    std::vector<DlConstraint> active;
    std::vector<ActionIndex> identity(m);
    std::iota(identity.begin(), identity.end(), ActionIndex{0});
    for (StateIndex s = 0; s < n; ++s) {
        active.push_back(make_dl_constraint(instance, s, identity));
        lp.rows.push_back(active.back().row());
    }

    const std::size_t max_rounds = options.max_rounds > 0 ? options.max_rounds : 10 * n * m;
    LpResult result;
    std::vector<std::vector<ActionIndex>> sigmas(n);
    while (true) {
        const SimplexSolution relaxed = simplex_solve(lp, options.simplex);
        ++result.rounds;
        result.values = relaxed.x;
        result.objective_trace.push_back(relaxed.objective);

        bool added = false;
        result.final_max_violation = 0.0;
        for (StateIndex s = 0; s < n; ++s) {
            Separation sep = separation_oracle(instance, result.values, s);
            result.final_max_violation = std::max(result.final_max_violation, sep.violation);
            sigmas[s] = sep.sigma;
            if (sep.violation <= options.tol) {
                continue;
            }
            const bool present = std::any_of(active.begin(), active.end(), [&](const DlConstraint& c) {
                return c.state == s && c.sigma == sep.sigma;
            });
            if (!present) {
                active.push_back(make_dl_constraint(instance, s, std::move(sep.sigma)));
                lp.rows.push_back(active.back().row());
                added = true;
            }
        }
        if (!added) {
            break;
        }
        if (result.rounds >= max_rounds) {
            throw Error(ErrorCode::MaxRoundsExceeded,
                        "constraint generation still violated after " + std::to_string(result.rounds) +
                            " rounds");
        }
    }
    result.constraint_count = active.size();
    result.policy = DecisionListPolicy(std::move(sigmas));
    return result;
}

} // namespace sas
