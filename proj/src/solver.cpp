#include "freeprob/solver.hpp"

#include <cmath>
#include <limits>

namespace freeprob {

cplx fd_derivative(const AnalyticFn& f, cplx z, double h) {
    return (f(z + h) - f(z - h)) / (2.0 * h);
}

namespace {

bool ok(const Admissible& adm, cplx z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag()) && (!adm || adm(z));
}

double fd_step(cplx z) { return 1e-7 * (1.0 + std::abs(z)); }

// Newton with backtracking on |f|; returns after max_iter steps or when the
// correction or the residual is negligible.
RootResult newton_core(const AnalyticFn& f, cplx z, double tol, int max_iter, int used,
                       const Admissible& adm) {
    RootResult r;
    r.z = z;
    cplx fz = f(z);
    r.residual = std::abs(fz);
    r.iterations = used;
    for (int it = used; it < max_iter; ++it) {
        r.iterations = it + 1;
        if (r.residual <= tol) {
            r.converged = true;
            return r;
        }
        const cplx d = fd_derivative(f, z, fd_step(z));
        if (std::abs(d) == 0.0 || !std::isfinite(std::abs(d))) return r;
        cplx step = -fz / d;
        bool accepted = false;
        for (int half = 0; half < 40; ++half) {
            const cplx cand = z + step;
            if (ok(adm, cand)) {
                const cplx fc = f(cand);
                const double rc = std::abs(fc);
                if (std::isfinite(rc) && rc < r.residual * (1.0 - 1e-4 * std::pow(0.5, half)) + 1e-300) {
                    z = cand;
                    fz = fc;
                    r.z = z;
                    r.residual = rc;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!accepted) {
            r.converged = r.residual <= tol;
            return r;
        }
        if (std::abs(step) <= 1e-15 * (1.0 + std::abs(z))) {
            r.converged = r.residual <= tol;
            return r;
        }
    }
    r.converged = r.residual <= tol;
    return r;
}

}  // namespace

RootResult newton_solve(const AnalyticFn& f, cplx z0, double tol, int max_iter, const Admissible& adm) {
    return newton_core(f, z0, tol, max_iter, 0, adm);
}

RootResult solve_fixed_point(const AnalyticFn& T, cplx w0, const Config& cfg, const Admissible& adm) {
    RootResult r;
    cplx w = w0;
    double theta = 1.0;
    double prev_step = std::numeric_limits<double>::infinity();
    int growth = 0;
    int it = 0;
    for (; it < std::min(cfg.newton_after, cfg.max_iter); ++it) {
        const cplx tw = T(w);
        const double res = std::abs(tw - w);
        if (!std::isfinite(res)) break;
        if (res < cfg.step_tol * (1.0 + std::abs(w))) {
            r.z = w;
            r.residual = res;
            r.iterations = it + 1;
            r.converged = true;
            return r;
        }
        cplx next = w + theta * (tw - w);
        int shrink = 0;
        while (!ok(adm, next) && shrink < 60) {
            theta *= 0.5;
            next = w + theta * (tw - w);
            ++shrink;
        }
        if (!ok(adm, next)) break;
        const double step = std::abs(next - w);
        if (step > prev_step) {
            if (++growth >= 2) {
                theta *= 0.5;
                growth = 0;
            }
        } else {
            growth = 0;
        }
        prev_step = step;
        w = next;
    }
    // Newton cleanup on H(w) = w - T(w)
    auto H = [&T](cplx v) { return v - T(v); };
    const double tol = cfg.step_tol * (1.0 + std::abs(w));
    RootResult nr = newton_core(H, w, tol, cfg.max_iter, it, adm);
    if (!nr.converged) {
        // a couple of plain sweeps can still polish a Newton stall
        cplx v = nr.z;
        for (int k = 0; k < 5 && nr.iterations < cfg.max_iter + 5; ++k, ++nr.iterations) {
            const cplx tv = T(v);
            if (!ok(adm, tv)) break;
            const double res = std::abs(tv - v);
            if (res < nr.residual) {
                nr.residual = res;
                nr.z = v;
            }
            v = tv;
        }
        nr.converged = nr.residual < cfg.step_tol * (1.0 + std::abs(nr.z));
    }
    return nr;
}

}  // namespace freeprob
