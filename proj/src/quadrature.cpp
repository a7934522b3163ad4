#include "freeprob/quadrature.hpp"

#include <array>
#include <cmath>
#include <mutex>

namespace freeprob {

namespace {

GaussRule make_rule(int n) {
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        r.nodes[i] = x;
        r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    static std::array<GaussRule, 129> rules;
    static std::array<std::once_flag, 129> flags;
    if (n < 1 || n > 128) fail(ErrorKind::InvalidArgument, "Gauss rule order out of range");
    std::call_once(flags[n], [n] { rules[n] = make_rule(n); });
    return rules[n];
}

cplx integrate_graded(const std::function<cplx(double)>& f, double a, double b, double s,
                      double d0, double ratio, int n) {
    if (b <= a) return 0.0;
    if (s > a && s < b)
        return integrate_graded(f, a, s, s, d0, ratio, n) + integrate_graded(f, s, b, s, d0, ratio, n);
    double dist = std::max(d0, std::min(std::abs(a - s), std::abs(b - s)));
    if (b - a <= ratio * dist || b - a < 1e-13) return integrate_gl<cplx>(f, a, b, n);
    double m = 0.5 * (a + b);
    return integrate_graded(f, a, m, s, d0, ratio, n) + integrate_graded(f, m, b, s, d0, ratio, n);
}

cplx piecewise_linear_cauchy(const Eigen::VectorXd& grid, const Eigen::VectorXd& dens, cplx z) {
    const GaussRule& r = gauss_legendre(10);
    cplx acc = 0.0;
    for (Eigen::Index i = 0; i + 1 < grid.size(); ++i) {
        const double t0 = grid[i], t1 = grid[i + 1], r0 = dens[i], r1 = dens[i + 1];
        if (r0 == 0.0 && r1 == 0.0) continue;
        const double h = t1 - t0;
        double d;
        if (z.real() < t0) d = std::abs(z - t0);
        else if (z.real() > t1) d = std::abs(z - t1);
        else d = std::abs(z.imag());
        if (d > 1.5 * h) {
            const double c = 0.5 * (t0 + t1), hh = 0.5 * h;
            cplx seg = 0.0;
            for (std::size_t k = 0; k < r.nodes.size(); ++k) {
                const double u = r.nodes[k];
                const double rho = 0.5 * (r0 + r1) + 0.5 * (r1 - r0) * u;
                seg += r.weights[k] * rho / (z - (c + hh * u));
            }
            acc += seg * hh;
            continue;
        }
        if (d == 0.0) fail(ErrorKind::PointOnCut, "Cauchy integral evaluated on the support");
        const double s = (r1 - r0) / h;
        const cplx rho_z = r0 + s * (z - t0);
        const cplx L = std::log(z - t0) - std::log(z - t1);
        acc += rho_z * L - s * h;
    }
    return acc;
}

cplx piecewise_linear_circle_psi(const Eigen::VectorXd& grid, const Eigen::VectorXd& dens,
                                 cplx z) {
    if (std::abs(z) == 0.0) return 0.0;
    const cplx I(0.0, 1.0);
    auto L = [z](double th) { return std::log(1.0 - z * std::polar(1.0, th)); };
    const double sing0 = -std::arg(z);
    const double d0 = std::max(1.0 - std::abs(z), 1e-14);
    cplx acc = 0.0;
    for (Eigen::Index i = 0; i + 1 < grid.size(); ++i) {
        const double t0 = grid[i], t1 = grid[i + 1], r0 = dens[i], r1 = dens[i + 1];
        if (r0 == 0.0 && r1 == 0.0) continue;
        const double s = (r1 - r0) / (t1 - t0);
        // nearest copy of the singular angle to this segment
        double sing = sing0;
        const double mid = 0.5 * (t0 + t1);
        while (sing - mid > pi) sing -= 2.0 * pi;
        while (mid - sing > pi) sing += 2.0 * pi;
        cplx intL = 0.0;
        if (s != 0.0) intL = integrate_graded(L, t0, t1, sing, d0);
        acc += I * (r1 * L(t1) - r0 * L(t0)) - I * s * intL;
    }
    return acc;
}

double trapezoid(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i + 1 < x.size(); ++i) acc += 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
    return acc;
}

}  // namespace freeprob
