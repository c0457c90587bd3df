#include "sas/experiments.hpp"

#include "sas/generators.hpp"
#include "sas/solve.hpp"

namespace sas {

ObliviousComparison compare_oblivious(const Instance& instance, double eps) {
    ViOptions vi;
    vi.eps = eps;
    const ViResult sas = value_iteration(instance, vi);
    PiOptions pi;
    pi.initial = sas.policy;
    const PiResult polished = policy_iteration(instance, pi);

    const Instance full = full_availability(instance);
    const ViResult base = value_iteration(full, vi);
    PiOptions base_pi;
    base_pi.initial = base.policy;
    const DecisionListPolicy oblivious = policy_iteration(full, base_pi).policy;

    return {polished.values, polished.policy, policy_evaluation(instance, oblivious), oblivious};
}

CurvePoint two_state_point(double p, double discount) {
    const ObliviousComparison cmp = compare_oblivious(two_state_instance(p, discount));
    CurvePoint point;
    point.p = p;
    point.v_sas = cmp.sas_values[0];
    point.v_naive = cmp.oblivious_values[0];
    point.fraction_lost = 1.0 - point.v_naive / point.v_sas;
    return point;
}

std::vector<CurvePoint> two_state_curve(const std::vector<double>& p_grid, double discount) {
    std::vector<CurvePoint> out;
    out.reserve(p_grid.size());
    for (double p : p_grid) {
        out.push_back(two_state_point(p, discount));
    }
    return out;
}

std::vector<double> default_p_grid() {
    std::vector<double> grid;
    for (int i = 1; i <= 20; ++i) {
        grid.push_back(i / 20.0);
    }
    return grid;
}

} // namespace sas
