#pragma once

#include "sas/instance.hpp"
#include "sas/types.hpp"

#include <vector>

namespace sas {

/**
 * Exact values of the SAS-optimal decision list and of the oblivious one, the
 * latter being greedy on the base MDP solved as if every action were always
 * available. Both lists are evaluated under the instance's availability.
 */
struct ObliviousComparison {
    ValueFunction sas_values;
    DecisionListPolicy sas_policy;
    ValueFunction oblivious_values;
    DecisionListPolicy oblivious_policy;
};

ObliviousComparison compare_oblivious(const Instance& instance, double eps = 1e-10);

struct CurvePoint {
    double p = 0.0;
    double v_sas = 0.0;
    double v_naive = 0.0;
    /// 1 - v_naive / v_sas at s1.
    double fraction_lost = 0.0;
};

CurvePoint two_state_point(double p, double discount);
std::vector<CurvePoint> two_state_curve(const std::vector<double>& p_grid, double discount);

/// 0.05, 0.10, ..., 1.00
std::vector<double> default_p_grid();

} // namespace sas
