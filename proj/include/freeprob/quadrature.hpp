#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "freeprob/core.hpp"

namespace freeprob {

struct GaussRule {
    std::vector<double> nodes;  // on [-1, 1]
    std::vector<double> weights;
};

// Cached Gauss-Legendre rule; any n in [1, 128].
const GaussRule& gauss_legendre(int n);

template <class T, class F>
T integrate_gl(F&& f, double a, double b, int n = 20) {
    const GaussRule& r = gauss_legendre(n);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    T acc{};
    for (std::size_t i = 0; i < r.nodes.size(); ++i) acc += r.weights[i] * f(c + h * r.nodes[i]);
    return acc * h;
}

// Integrates f over [a, b], splitting panels until each is no wider than
// `ratio` times its distance to the nearly singular abscissa `s` (dist >= d0).
cplx integrate_graded(const std::function<cplx(double)>& f, double a, double b, double s,
                      double d0, double ratio = 0.5, int n = 10);

// ∫ rho(t) / (z - t) dt for rho piecewise linear on `grid`; z off the support.
// Near segments use the closed form, far ones a 10-point Gauss rule.
cplx piecewise_linear_cauchy(const Eigen::VectorXd& grid, const Eigen::VectorXd& dens, cplx z);

// ∫ rho(theta) u/(1-u) dtheta with u = z e^{i theta}, |z| < 1, rho piecewise
// linear on an angle grid (no wrap segment).
cplx piecewise_linear_circle_psi(const Eigen::VectorXd& grid, const Eigen::VectorXd& dens,
                                 cplx z);

double trapezoid(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

}  // namespace freeprob
