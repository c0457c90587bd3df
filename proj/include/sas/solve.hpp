#pragma once

#include "sas/backup.hpp"
#include "sas/instance.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sas {

struct BackupResult {
    ValueFunction values;
    QFunction q;
    DecisionListPolicy policy;  ///< greedy_dl(q)
};

/**
 * Compressed Bellman backup T*_c V.
 *
 * Computes Q from V, sorts each state's Q-values into a decision list and takes
 * the expectation of the first available action along it. PDA and Explicit
 * models give the exact operator. A sampler instance estimates the expectation
 * from `n_samples` draws per state on generator stream `stream`, and needs
 * n_samples >= 1.
 */
BackupResult bellman_backup(const Instance& instance, std::span<const double> values,
                            std::size_t n_samples = 0, std::uint64_t stream = 0);

struct ViOptions {
    double eps = 1e-8;
    std::size_t max_iters = 1'000'000;
    /// Draws per state and backup; only used (and required) for sampler instances.
    std::size_t n_samples = 0;
    /// Starting point; zero when empty.
    ValueFunction initial;
};

struct ViResult {
    ValueFunction values;
    QFunction q;                   ///< Q-values of the final V
    DecisionListPolicy policy;     ///< greedy with respect to the final V
    std::size_t iterations = 0;
    std::vector<double> residuals; ///< ||V^{t+1} - V^t|| per iteration
    /// First iteration after which the backup's greedy decision list never changed again.
    std::size_t policy_stable_iteration = 0;
};

/// Thrown by value_iteration when max_iters is reached; carries the last iterate.
class NotConvergedError : public Error {
public:
    explicit NotConvergedError(ViResult partial);
    const ViResult& partial() const { return partial_; }

private:
    ViResult partial_;
};

/// Stopping threshold on ||V^{t+1} - V^t|| that makes V^{t+1} eps/2-close to optimal.
double vi_stopping_threshold(double eps, double discount);

/// Value iteration in the compressed space until the residual drops below vi_stopping_threshold.
ViResult value_iteration(const Instance& instance, const ViOptions& options = {});

struct IterationBound {
    /// Natural log of 2 delta^{2n(m+1)} n^n M with M = nm.
    double log_numerator = 0.0;
    /// log_numerator / log(1/discount), before rounding up.
    double real_bound = 0.0;
    /// ceil(real_bound) when it fits in 64 bits.
    std::optional<std::uint64_t> iterations;
};

/**
 * Diagnostic bound on the value-iteration iterations needed to induce an optimal policy.
 *
 * Requires a PDA instance whose rewards, transitions, availabilities and discount
 * are all multiples of 1/delta (checked to 1e-9; BadPrecision otherwise).
 */
IterationBound vi_iteration_bound(const Instance& instance, std::uint64_t delta);

/// Solves (I - discount P^mu) V = r^mu for a decision list on a PDA or explicit instance.
ValueFunction policy_evaluation(const Instance& instance, const DecisionListPolicy& policy);

struct PiOptions {
    /// Starting decision list; identity ranking when empty.
    std::optional<DecisionListPolicy> initial;
    std::size_t max_iters = 10'000;
};

struct PiResult {
    ValueFunction values;
    DecisionListPolicy policy;
    std::size_t iterations = 0;              ///< policy evaluations performed
    std::vector<ValueFunction> value_trace;  ///< value of each evaluated policy
};

/// Policy iteration over decision lists; stops when the greedy list repeats exactly.
PiResult policy_iteration(const Instance& instance, const PiOptions& options = {});

} // namespace sas
