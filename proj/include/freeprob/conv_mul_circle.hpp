#pragma once

#include <vector>

#include "freeprob/density.hpp"
#include "freeprob/measure.hpp"
#include "freeprob/solver.hpp"

namespace freeprob {

struct CircleSubordinationResult {
    cplx z;
    cplx Z1;
    cplx Z2;
    cplx common_value;  // Q1(Z1)
    double residual_system = 0.0;  // |Z1 Z2 - z Q1(Z1)|
    double residual_match = 0.0;   // |Q1(Z1) - Q2(Z2)|
    int iterations = 0;
};

// Fixed point of w -> z qt1(z qt2(w)) with qt = Q(w)/w (value at 0 = mean).
CircleSubordinationResult subord_mul_circle_fn(const AnalyticFn& qt1, const AnalyticFn& qt2, cplx z, cplx seed,
                                               const Config& cfg = default_config());
CircleSubordinationResult subord_mul_circle(const Measure& m1, const Measure& m2, DiskPoint z,
                                            const Config& cfg = default_config());

// Q transform of the product on the disk.
AnalyticFn free_mul_circle_q(const Measure& m1, const Measure& m2, const Config& cfg = default_config());

struct ZeroFreeCertificate {
    bool zero_free = false;
    int winding = 0;        // winding number of Q(z)/z around 0 on |z| = radius
    double min_modulus = 0.0;
    double radius = 0.995;
};

// Best-effort numerical check that Q(z) != 0 on the punctured disk.
ZeroFreeCertificate zero_free_certificate(const Measure& m, int samples = 4096);

// Q transform of the t-th power. Without a certificate t >= 2 is required
// and the power is taken of m [x] m with exponent t/2.
AnalyticFn free_mul_circle_power_q(const Measure& m, double t, bool use_certificate = false,
                                   const Config& cfg = default_config());

DensityTable free_mul_circle(const Measure& m1, const Measure& m2, const Eigen::VectorXd& theta,
                             const std::vector<double>& r, const Config& cfg = default_config());
DensityTable free_mul_circle_power(const Measure& m, double t, const Eigen::VectorXd& theta,
                                   const std::vector<double>& r, bool use_certificate = false,
                                   const Config& cfg = default_config());

}  // namespace freeprob
