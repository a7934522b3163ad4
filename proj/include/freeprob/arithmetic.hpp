#pragma once

#include <string>
#include <vector>

#include "freeprob/density.hpp"
#include "freeprob/measure.hpp"
#include "freeprob/solver.hpp"

namespace freeprob {

enum class IndecompVerdict {
    IndecomposableByFiniteSupport,
    IndecomposableByLineEdge,
    IndecomposableByHalfLineEdge,
    IndecomposableByCircleGap,
    Inconclusive,
};

const char* to_string(IndecompVerdict v);

struct CheckedCondition {
    std::string name;
    bool holds = false;
    double evidence = 0.0;
};

struct IndecompCertificate {
    IndecompVerdict verdict = IndecompVerdict::Inconclusive;
    std::vector<CheckedCondition> checked_conditions;
    // boundary values used for the one-sided limit, finest last
    std::vector<double> limit_sequence;
    std::string note;
};

// One-sided limit of f(h) as h -> 0 along h_k = 0.25 * 4^{-k}, k = 0..levels-1.
struct BoundaryLimit {
    double value = 0.0;
    bool diverging = false;
    int direction = 0;  // sign of the divergence
    std::vector<double> sequence;
};

BoundaryLimit boundary_limit(const std::function<double(double)>& f, int levels = 12);

// Sufficient conditions only: atoms-only measures, then the hypotheses of the
// edge condition that matches the measure's domain.
IndecompCertificate certify_indecomposable(const Measure& m, const Config& cfg = default_config());

// Point where the degree is evaluated: i(beta + 1) on the line,
// (beta + delta) e^{i(pi + alpha)/2}/2 on the half-line, alpha/2 on the circle.
struct DelphicGamma {
    double alpha = 1.0;
    double beta = 1.0;
    double delta = 2.0;
};

DelphicGamma default_gamma(Domain d);

double delphic_degree(const Measure& m, const Config& cfg = default_config());
double delphic_degree(const Measure& m, const DelphicGamma& g, const Config& cfg = default_config());
// Same functionals from transforms alone, for convolution products.
double delphic_degree_line(const AnalyticFn& F, const DelphicGamma& g, const Config& cfg = default_config());
double delphic_degree_rplus(const AnalyticFn& K, double mean, const DelphicGamma& g,
                            const Config& cfg = default_config());
double delphic_degree_circle(const AnalyticFn& Q, cplx mean, const DelphicGamma& g,
                             const Config& cfg = default_config());

struct KhintchineStep {
    int n = 0;
    double linf = 0.0;        // sup |rho_n - rho_sc| over the grid
    double kolmogorov = 0.0;  // sup |F_n - F_sc| over the grid, for reference
    int unstable_points = 0;
};

struct KhintchineReport {
    std::vector<KhintchineStep> steps;
    bool decreasing = false;  // nonincreasing up to 1e-3
    bool final_below = false;  // last L-infinity distance < 0.05
};

// (base scaled by 1/sqrt(n))^{⊞n} against Semicircle(0, 2); base must have
// mean 0 and variance 1.
KhintchineReport khintchine_demo(const Measure& base, const std::vector<int>& n_list, const Eigen::VectorXd& grid,
                                 const std::vector<double>& eta, const Config& cfg = default_config());

}  // namespace freeprob
