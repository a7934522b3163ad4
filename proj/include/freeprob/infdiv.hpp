#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "freeprob/density.hpp"
#include "freeprob/measure.hpp"
#include "freeprob/solver.hpp"

namespace freeprob {

// Closed or half-open interval restricting a Levy measure piece.
struct Window {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    bool lo_closed = true;
    bool hi_closed = true;

    bool full() const { return std::isinf(lo) && std::isinf(hi); }
    bool contains(double x) const;
};

// Finite measure written as sum_k weight_k * shape_k restricted to window_k,
// with shape_k a probability measure. A piece may carry negative weight when
// it cancels part of another piece; the sum must stay nonnegative.
struct LevyMeasure {
    struct Piece {
        double weight = 1.0;
        Measure shape;
        Window window;
    };
    Domain domain = Domain::RealLine;
    std::vector<Piece> pieces;

    double total_mass() const;
    double mass_in(const Window& w) const;
    bool empty() const { return pieces.empty(); }
};

LevyMeasure levy_zero(Domain d = Domain::RealLine);
// weight * shape; weight >= 0.
LevyMeasure levy_from(const Measure& shape, double weight = 1.0);
LevyMeasure levy_sum(const LevyMeasure& a, const LevyMeasure& b);
// ∫ (1 + uz)/(z - u) nu(du), z off the real support.
cplx levy_kernel_integral(const LevyMeasure& nu, cplx z);
// ∫ (1 + u^2)/(z - u) nu(du) over the window.
cplx levy_window_integral(const LevyMeasure& nu, const Window& w, cplx z);
double levy_window_first_moment(const LevyMeasure& nu, const Window& w);

struct TripletAdd {
    double alpha = 0.0;
    LevyMeasure nu;
};

struct TripletRplus {
    double a = 0.0;
    double b = 0.0;
    LevyMeasure nu;  // on (0, inf)
};

struct TripletCircle {
    double a = 0.0;
    LevyMeasure nu;  // on the circle, whole-circle pieces only
};

TripletAdd triplet_sum(const TripletAdd& t1, const TripletAdd& t2);

cplx phi_from_triplet(const TripletAdd& t, HalfPlanePoint z);
// F of the i.d. measure: the zeta in C+ with zeta + phi(zeta) = w.
cplx id_recip_f(const TripletAdd& t, cplx w, cplx seed, const Config& cfg = default_config());
DensityTable idmeasure_from_triplet_add(const TripletAdd& t, const Eigen::VectorXd& grid,
                                        const std::vector<double>& eta, const Config& cfg = default_config());

struct IdCheckReport {
    bool passed = false;
    double worst_im_phi = 0.0;
    cplx worst_point;
    double tail_ratio = 0.0;  // |phi(iY)|/Y at Y = 1e4
    // F' vanishing in C+ rules out a univalent inverse, hence infinite divisibility
    bool critical_point_found = false;
    cplx critical_point;
    int probes = 0;
    int failed_probes = 0;  // cone points where F could not be inverted
};

// Necessary conditions only. `probe_grid` gives real parts; heights are
// taken inside the auto cone.
IdCheckReport id_check_add(const Measure& m, const Eigen::VectorXd& probe_grid,
                           const Config& cfg = default_config());

struct SplitWitness {
    bool found = false;
    cplx z;
    double im_f = 0.0;
    double h = 0.0;
};

struct I0SplitResult {
    double eps0 = 0.0;
    double eps = 0.0;
    double a = 0.0;
    double b = 0.0;
    double A1 = 0.0;  // sup |phi| on the boundary-proxy curves
    AnalyticFn phi;   // eps0 ∫_[a,b] (1 + u^2)/(z - u) nu(du)
    AnalyticFn f1;    // 2 phi - eps phi^2
    AnalyticFn f2;    // 2 phi + eps phi^2
    TripletAdd triplet3;
    SplitWitness witness1;  // Im f1 > 0, found right of b
    SplitWitness witness2;  // Im f2 > 0, found left of a
    double residual = 0.0;  // max |phi_t - f1 - f2 - phi_3| over probes
};

I0SplitResult i0_split_add(const TripletAdd& t, double a, double b, double eps0 = 0.2, double eps = 0.1,
                           const Config& cfg = default_config());

enum class I0Variant { MinusCz, COverZ };

struct I0FactorsResult {
    double c = 0.0;
    I0Variant variant = I0Variant::MinusCz;
    AnalyticFn sigma1;
    AnalyticFn sigma2;
    AnalyticFn exponent1;
    AnalyticFn exponent2;
    double product_residual = 0.0;  // max |sigma1 sigma2 - target| on probes
    SplitWitness witness;           // Im of the exponent of sigma2 > 0
    int witness_factor = 2;
};

I0FactorsResult i0_factors_rplus(double c, I0Variant variant);

cplx sigma_from_triplet_rplus(const TripletRplus& t, cplx z);
cplx sigma_from_triplet_circle(const TripletCircle& t, cplx z);

}  // namespace freeprob
