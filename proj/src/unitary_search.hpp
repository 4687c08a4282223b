#pragma once

// Line-search ascent/descent over the unitary group. Steps move along
// V exp(i t G) where G is the Hermitian gradient of the objective with respect
// to the generator of a right perturbation V exp(i H) at H = 0.

#include <cmath>
#include <functional>
#include <utility>

#include "qbc/linalg.hpp"

namespace qbc::detail {

struct UnitarySearchOptions {
    int max_iterations = 200;
    double grad_tol = 1e-8;
    double initial_step = 0.5;
    double armijo = 1e-4;
    double min_step = 1e-14;
};

struct UnitarySearchResult {
    ComplexMatrix v;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
    bool stalled = false;  // line search could not resolve an improving step
};

using ValueFn = std::function<double(const ComplexMatrix&)>;
using ValueGradFn = std::function<std::pair<double, ComplexMatrix>(const ComplexMatrix&)>;

inline UnitarySearchResult unitary_line_search(ComplexMatrix v, const ValueFn& value, const ValueGradFn& value_grad,
                                               bool maximize, const UnitarySearchOptions& opt) {
    const double sign = maximize ? 1.0 : -1.0;
    auto [f, g] = value_grad(v);
    double step = opt.initial_step;
    UnitarySearchResult res;
    for (; res.iterations < opt.max_iterations; ++res.iterations) {
        const double gn2 = g.frobenius_norm() * g.frobenius_norm();
        if (std::sqrt(gn2) <= opt.grad_tol) {
            res.converged = true;
            break;
        }
        bool accepted = false;
        ComplexMatrix trial;
        double ft = f;
        for (double t = step; t >= opt.min_step; t *= 0.5) {
            trial = v * unitary_from_generator(cplx{sign * t} * g);
            ft = value(trial);
            if (sign * (ft - f) >= opt.armijo * t * gn2) {
                accepted = true;
                step = std::min(2.0 * t, 4.0);
                break;
            }
        }
        if (!accepted) {
            res.stalled = true;
            break;
        }
        v = std::move(trial);
        std::tie(f, g) = value_grad(v);
    }
    res.v = std::move(v);
    res.value = f;
    return res;
}

}  // namespace qbc::detail
