#pragma once

#include <vector>

#include "freeprob/density.hpp"
#include "freeprob/measure.hpp"
#include "freeprob/solver.hpp"

namespace freeprob {

struct MulSubordinationResult {
    cplx z;
    cplx Z1;
    cplx Z2;
    cplx common_value;  // K1(Z1)
    double residual_system = 0.0;  // |Z1 Z2 - z K1(Z1)|
    double residual_match = 0.0;   // |K1(Z1) - K2(Z2)|
    int iterations = 0;
    // arg z <= arg Z2 < pi; checked after the solve, never enforced
    bool wedge_ok = true;
};

// Fixed point of w -> z kt1(z kt2(w)) with kt = K(w)/w. Points of the lower
// half-plane are solved by conjugation; negative reals stay real.
MulSubordinationResult subord_mul_rplus_fn(const AnalyticFn& kt1, const AnalyticFn& kt2, cplx z, cplx seed,
                                           const Config& cfg = default_config());
MulSubordinationResult subord_mul_rplus(const Measure& m1, const Measure& m2, HalfPlanePoint z,
                                        const Config& cfg = default_config());

// K transform of the product / power, evaluable off [0, inf).
AnalyticFn free_mul_rplus_k(const Measure& m1, const Measure& m2, const Config& cfg = default_config());
AnalyticFn free_mul_rplus_power_k(const Measure& m, double t, const Config& cfg = default_config());

DensityTable free_mul_rplus(const Measure& m1, const Measure& m2, const Eigen::VectorXd& grid,
                            const std::vector<double>& eta, const Config& cfg = default_config());
DensityTable free_mul_rplus_power(const Measure& m, double t, const Eigen::VectorXd& grid,
                                  const std::vector<double>& eta, const Config& cfg = default_config());

}  // namespace freeprob
