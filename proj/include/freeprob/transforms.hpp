#pragma once

#include "freeprob/measure.hpp"
#include "freeprob/solver.hpp"

namespace freeprob {

// G(z) = ∫ mu(dt)/(z - t) for RealLine / PositiveHalfLine measures.
cplx cauchy_g(const Measure& m, HalfPlanePoint z);
// Same integral at any point off the support (lower half-plane, real gaps).
cplx cauchy_g_at(const Measure& m, cplx z);
cplx recip_f(const Measure& m, HalfPlanePoint z);
cplx recip_f_at(const Measure& m, cplx z);

// psi(z) = ∫ z xi/(1 - z xi) mu(dxi) on PositiveHalfLine (z off [0, inf))
// or UnitCircle (|z| < 1).
cplx psi(const Measure& m, cplx z);
// ∫ xi/(1 - z xi) mu(dxi) = psi(z)/z, regular at z = 0.
cplx psi_over_z(const Measure& m, cplx z);
cplx k_transform(const Measure& m, cplx z);
cplx q_transform(const Measure& m, DiskPoint z);
// Caratheodory function 1 + 2 psi on the disk.
cplx h_transform(const Measure& m, DiskPoint z);
// K(z)/z on the half-line or Q(z)/z on the circle, with value mean at 0.
cplx reduced_transform(const Measure& m, cplx z);

// Solves F(z) = w by continuation down the vertical ray from w + iY; throws
// ConeTooLow on failure or when the root fails the vertical monotonicity test.
cplx invert_analytic(const AnalyticFn& F, cplx w, const Config& cfg = default_config());
cplx invert_f(const Measure& m, HalfPlanePoint w, const ConeParams& cone,
              const Config& cfg = default_config());
cplx phi(const Measure& m, HalfPlanePoint w, const ConeParams& cone,
         const Config& cfg = default_config());
// Voiculescu transform of any reciprocal Cauchy transform evaluator.
cplx phi_of(const AnalyticFn& F, cplx w, const Config& cfg = default_config());

// Doubles beta from 1 until the 32 cone probes invert cleanly.
ConeParams auto_cone(const AnalyticFn& F, double alpha = 1.0, const Config& cfg = default_config());
ConeParams auto_cone(const Measure& m, double alpha = 1.0, const Config& cfg = default_config());

// Sigma transforms. The generic forms take the transform (K or Q), its
// derivative at 0 (the mean) and invert along the ray from 0.
cplx sigma_rplus_of(const AnalyticFn& K, double mean, cplx z, const Config& cfg = default_config());
cplx sigma_circle_of(const AnalyticFn& Q, cplx mean, cplx z, const Config& cfg = default_config());
cplx sigma_rplus(const Measure& m, cplx z, const Config& cfg = default_config());
cplx sigma_circle(const Measure& m, cplx z, const Config& cfg = default_config());
// Radius alpha such that the circle Sigma transform inverts on |z| <= alpha.
double sigma_circle_radius(const Measure& m, const Config& cfg = default_config());

}  // namespace freeprob
