#include "sas/solve.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sas {

BackupResult bellman_backup(const Instance& instance, std::span<const double> values,
                            std::size_t n_samples, std::uint64_t stream) {
    BackupResult out{ValueFunction(instance.n_states()), q_values(instance.mdp(), values), {}};
    out.policy = greedy_dl(out.q);

    if (instance.sampler() != nullptr) {
        out.values = dl_backup_ads(instance, out.policy, values, n_samples, stream);
        return out;
    }
    for (StateIndex s = 0; s < instance.n_states(); ++s) {
        out.values[s] = list_value(instance, s, out.policy.order(s), out.q.row(s));
    }
    return out;
}

NotConvergedError::NotConvergedError(ViResult partial)
    : Error(ErrorCode::NotConverged,
            "value iteration stopped after " + std::to_string(partial.iterations) +
                " iterations with residual " +
                std::to_string(partial.residuals.empty() ? 0.0 : partial.residuals.back())),
      partial_(std::move(partial)) {}

double vi_stopping_threshold(double eps, double discount) {
    if (discount <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return eps * (1.0 - discount) / (2.0 * discount);
}

ViResult value_iteration(const Instance& instance, const ViOptions& options) {
    if (!(options.eps > 0.0)) {
        throw Error(ErrorCode::BadParameter, "eps must be positive");
    }
    if (!instance.is_exact() && options.n_samples == 0) {
        throw Error(ErrorCode::BadSampleCount, "a sampler instance needs n_samples >= 1");
    }
    const double threshold = vi_stopping_threshold(options.eps, instance.discount());

    ViResult result;
    result.values = options.initial.empty() ? ValueFunction(instance.n_states(), 0.0) : options.initial;
    if (result.values.size() != instance.n_states()) {
        throw Error(ErrorCode::DimensionMismatch, "initial value function has the wrong length");
    }

    DecisionListPolicy last_policy;
    bool converged = false;
    while (result.iterations < options.max_iters) {
        BackupResult step = bellman_backup(instance, result.values, options.n_samples, result.iterations);
        double residual = 0.0;
        for (StateIndex s = 0; s < instance.n_states(); ++s) {
            residual = std::max(residual, std::abs(step.values[s] - result.values[s]));
        }
        ++result.iterations;
        if (result.iterations == 1 || !(step.policy == last_policy)) {
            result.policy_stable_iteration = result.iterations;
            last_policy = std::move(step.policy);
        }
        result.values = std::move(step.values);
        result.residuals.push_back(residual);
        if (residual <= threshold) {
            converged = true;
            break;
        }
    }

    result.q = q_values(instance.mdp(), result.values);
    result.policy = greedy_dl(result.q);
    if (!converged) {
        throw NotConvergedError(std::move(result));
    }
    return result;
}

namespace {

bool on_grid(double x, double delta) {
    const double scaled = x * delta;
    return std::abs(scaled - std::round(scaled)) <= 1e-9 * std::max(1.0, std::abs(scaled));
}

} // namespace

IterationBound vi_iteration_bound(const Instance& instance, std::uint64_t delta) {
    const auto* pda = instance.pda();
    if (pda == nullptr) {
        throw Error(ErrorCode::UnsupportedModel, "the iteration bound is defined for PDA instances");
    }
    if (delta == 0) {
        throw Error(ErrorCode::BadParameter, "delta must be a positive integer");
    }
    const double d = static_cast<double>(delta);
    const BaseMdp& mdp = instance.mdp();
    const auto all_on_grid = [&](const std::vector<double>& xs) {
        return std::all_of(xs.begin(), xs.end(), [&](double x) { return on_grid(x, d); });
    };
    if (!on_grid(mdp.discount, d) || !all_on_grid(mdp.rewards) || !all_on_grid(mdp.transitions) ||
        !all_on_grid(pda->rho)) {
        throw Error(ErrorCode::BadPrecision,
                    "instance numbers are not multiples of 1/" + std::to_string(delta));
    }

    const double n = static_cast<double>(mdp.n_states);
    const double m = static_cast<double>(mdp.n_actions);
    IterationBound bound;
    bound.log_numerator =
        std::log(2.0) + 2.0 * n * (m + 1.0) * std::log(d) + n * std::log(n) + std::log(n * m);
    if (mdp.discount == 0.0) {
        bound.real_bound = 0.0;
        bound.iterations = 0;
        return bound;
    }
    bound.real_bound = bound.log_numerator / std::log(1.0 / mdp.discount);
    const double rounded = std::ceil(bound.real_bound);
    if (rounded < 0x1.0p63) {
        bound.iterations = static_cast<std::uint64_t>(std::max(0.0, rounded));
    }
    return bound;
}

ValueFunction policy_evaluation(const Instance& instance, const DecisionListPolicy& policy) {
    const PolicyChain chain = dl_transition_matrix(instance, policy);
    const auto n = static_cast<Eigen::Index>(chain.n_states);
    const double gamma = instance.discount();

    Eigen::MatrixXd system(n, n);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index s = 0; s < n; ++s) {
        rhs(s) = chain.rewards[static_cast<std::size_t>(s)];
        for (Eigen::Index t = 0; t < n; ++t) {
            system(s, t) = (s == t ? 1.0 : 0.0) -
                           gamma * chain(static_cast<std::size_t>(s), static_cast<std::size_t>(t));
        }
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    Eigen::VectorXd v = lu.solve(rhs);
    double residual = (system * v - rhs).lpNorm<Eigen::Infinity>();
    if (!(residual <= 1e-9)) {
        v += lu.solve(rhs - system * v);  // one refinement step
        residual = (system * v - rhs).lpNorm<Eigen::Infinity>();
    }
    if (!(residual <= 1e-9) || !v.allFinite()) {
        throw Error(ErrorCode::SingularSystem,
                    "policy evaluation residual " + std::to_string(residual) + " exceeds 1e-9");
    }
    return ValueFunction(v.data(), v.data() + n);
}

PiResult policy_iteration(const Instance& instance, const PiOptions& options) {
    if (!instance.is_exact()) {
        throw Error(ErrorCode::UnsupportedModel, "policy iteration needs a PDA or explicit model");
    }
    PiResult result;
    result.policy = options.initial ? *options.initial
                                    : DecisionListPolicy::identity(instance.n_states(), instance.n_actions());
    while (true) {
        result.values = policy_evaluation(instance, result.policy);
        result.value_trace.push_back(result.values);
        ++result.iterations;

        BackupResult improved = bellman_backup(instance, result.values);
        if (improved.policy == result.policy) {
            break;
        }
        // Q-values that tie exactly can differ in the last bit after a linear solve; when the
        // greedy list gains nothing anywhere the current list is already optimal.
        double scale = 1.0;
        double gain = 0.0;
        for (StateIndex s = 0; s < instance.n_states(); ++s) {
            scale = std::max(scale, std::abs(result.values[s]));
            gain = std::max(gain, improved.values[s] - result.values[s]);
        }
        if (gain <= 1e-12 * scale) {
            break;
        }
        if (result.iterations >= options.max_iters) {
            throw Error(ErrorCode::NotConverged, "policy iteration hit the iteration limit");
        }
        result.policy = std::move(improved.policy);
    }
    return result;
}

} // namespace sas
