#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "freeprob/measure.hpp"
#include "freeprob/solver.hpp"

namespace freeprob {

struct DensityTable {
    Domain domain = Domain::RealLine;
    Eigen::VectorXd grid;     // angles in [-pi, pi] on the circle
    Eigen::VectorXd density;  // per unit length (per radian on the circle)
    std::vector<Atom> atoms;
    double mass_deficit = 0.0;
    int unstable_points = 0;

    double continuous_mass() const;
    double density_at(double x) const;
    // mass of (-inf, x], measured from -pi on the circle
    double cdf(double x) const;
};

// Values of the boundary function (G on the line, H on the disk) at abscissa x
// for each approach parameter s (eta above the axis, 1 - r inside the disk).
// Implementations may carry solver state from one s to the next.
using BoundaryRay = std::function<std::vector<cplx>(double x, const std::vector<double>& s)>;

struct Extrapolation {
    double value = 0.0;
    double error = 0.0;
    bool diverging = false;
};

// Polynomial extrapolation to s = 0 (Neville table, orders up to 3); the
// reported value is the row entry with the smallest successive difference.
Extrapolation extrapolate_to_zero(const std::vector<double>& s, const std::vector<double>& v);

std::vector<double> default_eta_schedule(const Config& cfg = default_config());
std::vector<double> default_r_schedule(const Config& cfg = default_config());
Eigen::VectorXd linear_grid(double lo, double hi, int n);

struct LadderStep {
    double s;
    bool scheduled;
};
// Halves s from `top` until the first scheduled level, then walks the
// schedule. Solvers reuse each solution as the seed of the next step.
std::vector<LadderStep> continuation_ladder(double top, const std::vector<double>& s);
// n + 1 equispaced angles from -pi to pi inclusive
Eigen::VectorXd theta_grid(int n);

DensityTable stieltjes_invert(const BoundaryRay& g, const Eigen::VectorXd& grid,
                              const std::vector<double>& eta, const Config& cfg = default_config(),
                              const std::vector<Atom>& known_atoms = {});
DensityTable herglotz_invert(const BoundaryRay& h, const Eigen::VectorXd& theta,
                             const std::vector<double>& r, const Config& cfg = default_config(),
                             const std::vector<Atom>& known_atoms = {});

// psi values at 1/(x - i eta_k), points of the upper half-plane.
using PsiRay = std::function<std::vector<cplx>(double x, const std::vector<double>& eta)>;

// Inverts G(w) = (psi(1/w) + 1)/w; the atom at 0 is read off 1 + psi(-x) at
// x = 1e6 and 4e6, extrapolated in x^{-1/2}.
DensityTable recover_from_psi_rplus(const AnalyticFn& psi_at, const Eigen::VectorXd& grid,
                                    const std::vector<double>& eta, const Config& cfg = default_config(),
                                    const PsiRay& ray = {});

// Density table of a measure from its own transform (G, or H on the circle).
DensityTable density_of(const Measure& m, const Eigen::VectorXd& grid,
                        const Config& cfg = default_config());

// Turns a table back into a measure; with `renormalize` the continuous part
// absorbs the mass deficit proportionally.
Measure measure_from_table(const DensityTable& t, bool renormalize = true);

}  // namespace freeprob
