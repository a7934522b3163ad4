#pragma once

#include <functional>

#include "freeprob/core.hpp"

namespace freeprob {

using AnalyticFn = std::function<cplx(cplx)>;
using Admissible = std::function<bool(cplx)>;

// Central difference along the real direction (valid for analytic f).
cplx fd_derivative(const AnalyticFn& f, cplx z, double h);

struct RootResult {
    cplx z;
    double residual = 0.0;  // |f(z)|
    int iterations = 0;
    bool converged = false;
};

// Damped Newton on f(z) = 0 with backtracking that keeps iterates admissible.
RootResult newton_solve(const AnalyticFn& f, cplx z0, double tol, int max_iter,
                        const Admissible& admissible = {});

// Fixed point of T: damped iteration w <- w + theta (T(w) - w), theta halved
// whenever the step grows twice in a row; Newton on w - T(w) after
// cfg.newton_after sweeps. `residual` is |T(w) - w| at the returned point.
RootResult solve_fixed_point(const AnalyticFn& T, cplx w0, const Config& cfg,
                             const Admissible& admissible = {});

}  // namespace freeprob
