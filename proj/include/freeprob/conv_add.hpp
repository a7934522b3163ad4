#pragma once

#include <vector>

#include "freeprob/density.hpp"
#include "freeprob/measure.hpp"
#include "freeprob/solver.hpp"

namespace freeprob {

struct SubordinationResult {
    cplx z;
    cplx Z1;
    cplx Z2;
    cplx common_value;  // F1(Z1)
    double residual_system = 0.0;
    double residual_match = 0.0;
    int iterations = 0;
};

// Solves Z2 = z + g1(z + g2(Z2)), g = F - id, starting from `seed`.
SubordinationResult subord_add_fn(const AnalyticFn& F1, const AnalyticFn& F2, cplx z, cplx seed,
                                  const Config& cfg = default_config());
SubordinationResult subord_add(const Measure& m1, const Measure& m2, HalfPlanePoint z,
                               const Config& cfg = default_config());

struct MultiSubordinationResult {
    cplx z;
    std::vector<cplx> Z;
    cplx common_value;
    double residual_system = 0.0;  // |sum Z - (n-1) F - z|
    double residual_match = 0.0;   // max |F_j(Z_j) - F|
};

MultiSubordinationResult subord_add_multi(const std::vector<Measure>& ms, HalfPlanePoint z,
                                          const Config& cfg = default_config());

// Reciprocal Cauchy transforms of the convolution products, usable anywhere
// in the upper half-plane (each call solves from seed z).
AnalyticFn free_add_f(const Measure& m1, const Measure& m2, const Config& cfg = default_config());
AnalyticFn free_add_power_f(const Measure& m, double t, const Config& cfg = default_config());
AnalyticFn boolean_add_f(const Measure& m1, const Measure& m2);

// Z with z = t Z - (t - 1) F(Z).
RootResult subord_add_power(const Measure& m, double t, cplx z, cplx seed,
                            const Config& cfg = default_config());

DensityTable free_add(const Measure& m1, const Measure& m2, const Eigen::VectorXd& grid,
                      const std::vector<double>& eta, const Config& cfg = default_config());
DensityTable free_add_power(const Measure& m, double t, const Eigen::VectorXd& grid,
                            const std::vector<double>& eta, const Config& cfg = default_config());
DensityTable boolean_add(const Measure& m1, const Measure& m2, const Eigen::VectorXd& grid,
                         const std::vector<double>& eta, const Config& cfg = default_config());

}  // namespace freeprob
