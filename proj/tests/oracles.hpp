#pragma once

// Brute-force references. Nothing here calls the library's backups or solvers;
// everything is recomputed by enumerating subsets, permutations or embedded policies.

#include "sas/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

using sas::ActionIndex;
using sas::ActionMask;
using sas::Instance;
using sas::StateIndex;

inline bool has(ActionMask mask, ActionIndex k) { return (mask >> k) & 1U; }

/// Every subset with positive probability at s, as (mask, probability).
inline std::vector<std::pair<ActionMask, double>> subsets(const Instance& inst, StateIndex s) {
    std::vector<std::pair<ActionMask, double>> out;
    const std::size_t m = inst.n_actions();
    if (const auto* pda = inst.pda()) {
        for (ActionMask mask = 1; mask < (ActionMask{1} << m); ++mask) {
            double p = 1.0;
            for (ActionIndex k = 0; k < m; ++k) {
                const double rho = pda->rho[s * m + k];
                p *= has(mask, k) ? rho : 1.0 - rho;
            }
            if (p > 0.0) {
                out.emplace_back(mask, p);
            }
        }
    } else {
        for (const auto& e : inst.explicit_table()->states[s]) {
            if (e.probability > 0.0) {
                out.emplace_back(e.mask, e.probability);
            }
        }
    }
    return out;
}

inline std::vector<double> q(const Instance& inst, const std::vector<double>& v) {
    const auto& mdp = inst.mdp();
    const std::size_t n = mdp.n_states, m = mdp.n_actions;
    std::vector<double> out(n * m);
    for (StateIndex s = 0; s < n; ++s) {
        for (ActionIndex k = 0; k < m; ++k) {
            double acc = 0.0;
            for (StateIndex t = 0; t < n; ++t) {
                acc += mdp.transitions[(s * m + k) * n + t] * v[t];
            }
            out[s * m + k] = mdp.rewards[s * m + k] + mdp.discount * acc;
        }
    }
    return out;
}

/// T*_c V = sum_A P_s(A) max_{k in A} Q(s, k).
inline std::vector<double> optimal_backup(const Instance& inst, const std::vector<double>& v) {
    const auto qv = q(inst, v);
    const std::size_t m = inst.n_actions();
    std::vector<double> out(inst.n_states(), 0.0);
    for (StateIndex s = 0; s < inst.n_states(); ++s) {
        for (const auto& [mask, p] : subsets(inst, s)) {
            double best = -INFINITY;
            for (ActionIndex k = 0; k < m; ++k) {
                if (has(mask, k)) {
                    best = std::max(best, qv[s * m + k]);
                }
            }
            out[s] += p * best;
        }
    }
    return out;
}

inline ActionIndex first_available(const std::vector<ActionIndex>& order, ActionMask mask) {
    for (ActionIndex k : order) {
        if (has(mask, k)) {
            return k;
        }
    }
    return order.size();
}

/// sum_A P_s(A) q(first action of `order` in A)
inline double list_value(const Instance& inst, StateIndex s, const std::vector<ActionIndex>& order,
                         const std::vector<double>& q_row) {
    double total = 0.0;
    for (const auto& [mask, p] : subsets(inst, s)) {
        total += p * q_row[first_available(order, mask)];
    }
    return total;
}

inline std::vector<std::vector<ActionIndex>> permutations(std::size_t m) {
    std::vector<ActionIndex> perm(m);
    std::iota(perm.begin(), perm.end(), ActionIndex{0});
    std::vector<std::vector<ActionIndex>> out;
    do {
        out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

/// Gaussian elimination with partial pivoting on a dense n x n system.
inline std::vector<double> gauss_solve(std::vector<double> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) {
                piv = r;
            }
        }
        for (std::size_t j = 0; j < n; ++j) {
            std::swap(a[c * n + j], a[piv * n + j]);
        }
        std::swap(b[c], b[piv]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r * n + c] / a[c * n + c];
            for (std::size_t j = c; j < n; ++j) {
                a[r * n + j] -= f * a[c * n + j];
            }
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t r = n; r-- > 0;) {
        double acc = b[r];
        for (std::size_t j = r + 1; j < n; ++j) {
            acc -= a[r * n + j] * x[j];
        }
        x[r] = acc / a[r * n + r];
    }
    return x;
}

/// Value of the stationary policy that plays choice(s, mask) in embedded state (s, mask).
template <typename Choice>
std::vector<double> evaluate(const Instance& inst, Choice&& choice) {
    const auto& mdp = inst.mdp();
    const std::size_t n = mdp.n_states, m = mdp.n_actions;
    std::vector<double> a(n * n, 0.0), r(n, 0.0);
    for (StateIndex s = 0; s < n; ++s) {
        a[s * n + s] = 1.0;
        for (const auto& [mask, p] : subsets(inst, s)) {
            const ActionIndex k = choice(s, mask);
            r[s] += p * mdp.rewards[s * m + k];
            for (StateIndex t = 0; t < n; ++t) {
                a[s * n + t] -= mdp.discount * p * mdp.transitions[(s * m + k) * n + t];
            }
        }
    }
    return gauss_solve(std::move(a), std::move(r));
}

inline std::vector<double> evaluate_dl(const Instance& inst, const std::vector<std::vector<ActionIndex>>& orders) {
    return evaluate(inst, [&](StateIndex s, ActionMask mask) { return first_available(orders[s], mask); });
}

/// Componentwise best value over all m!^n decision lists.
inline std::vector<double> best_dl_value(const Instance& inst) {
    const std::size_t n = inst.n_states();
    const auto perms = permutations(inst.n_actions());
    std::vector<std::size_t> idx(n, 0);
    std::vector<double> best(n, -INFINITY);
    while (true) {
        std::vector<std::vector<ActionIndex>> orders(n);
        for (StateIndex s = 0; s < n; ++s) {
            orders[s] = perms[idx[s]];
        }
        const auto v = evaluate_dl(inst, orders);
        for (StateIndex s = 0; s < n; ++s) {
            best[s] = std::max(best[s], v[s]);
        }
        std::size_t pos = 0;
        while (pos < n && ++idx[pos] == perms.size()) {
            idx[pos++] = 0;
        }
        if (pos == n) {
            return best;
        }
    }
}

/// Componentwise best value over every deterministic stationary policy of the embedded MDP.
inline std::vector<double> best_embedded_value(const Instance& inst) {
    const std::size_t n = inst.n_states();
    struct Slot {
        StateIndex s;
        ActionMask mask;
        std::vector<ActionIndex> actions;
    };
    std::vector<Slot> slots;
    for (StateIndex s = 0; s < n; ++s) {
        for (const auto& [mask, p] : subsets(inst, s)) {
            Slot slot{s, mask, {}};
            for (ActionIndex k = 0; k < inst.n_actions(); ++k) {
                if (has(mask, k)) {
                    slot.actions.push_back(k);
                }
            }
            slots.push_back(std::move(slot));
        }
    }
    std::vector<std::size_t> idx(slots.size(), 0);
    std::vector<double> best(n, -INFINITY);
    while (true) {
        const auto v = evaluate(inst, [&](StateIndex s, ActionMask mask) {
            for (std::size_t i = 0; i < slots.size(); ++i) {
                if (slots[i].s == s && slots[i].mask == mask) {
                    return slots[i].actions[idx[i]];
                }
            }
            return ActionIndex{0};
        });
        for (StateIndex s = 0; s < n; ++s) {
            best[s] = std::max(best[s], v[s]);
        }
        std::size_t pos = 0;
        while (pos < slots.size() && ++idx[pos] == slots[pos].actions.size()) {
            idx[pos++] = 0;
        }
        if (pos == slots.size()) {
            return best;
        }
    }
}

/// Fixed point of optimal_backup, iterated until successive iterates agree to 1e-13.
inline std::vector<double> optimal_value(const Instance& inst) {
    std::vector<double> v(inst.n_states(), 0.0);
    for (int it = 0; it < 100000; ++it) {
        const auto next = optimal_backup(inst, v);
        double diff = 0.0;
        for (std::size_t s = 0; s < v.size(); ++s) {
            diff = std::max(diff, std::abs(next[s] - v[s]));
        }
        v = next;
        if (diff < 1e-13) {
            break;
        }
    }
    return v;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a[i] - b[i]));
    }
    return d;
}

} // namespace oracle
