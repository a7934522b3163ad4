#include "freeprob/conv_mul_rplus.hpp"

#include <cmath>

#include "freeprob/transforms.hpp"

namespace freeprob {

namespace {

AnalyticFn reduced_of(const Measure& m) {
    if (m.domain != Domain::PositiveHalfLine)
        fail(ErrorKind::DomainMismatch, "half-line multiplicative convolution needs half-line measures");
    return [m](cplx z) { return reduced_transform(m, z); };
}

void check(const RootResult& r, const char* what) {
    if (!r.converged)
        fail(ErrorKind::NoConvergence, std::string(what) + ": residual " + std::to_string(r.residual) + " after " +
                                           std::to_string(r.iterations) + " iterations");
}

// Admissible set for a query point: the open upper half-plane, or the
// negative axis when z itself is a negative real.
Admissible region_of(cplx z) {
    if (z.imag() > 0.0) return [](cplx w) { return w.imag() > 0.0; };
    return [](cplx w) { return w.real() < 0.0 && std::abs(w.imag()) <= 1e-12 * std::abs(w); };
}

void require_off_cut(cplx z) {
    if (z.imag() == 0.0 && z.real() >= 0.0) fail(ErrorKind::PointOnCut, "query point lies on [0, inf)");
}

cplx conj_if(cplx v, bool flip) { return flip ? std::conj(v) : v; }

RootResult power_solve(const AnalyticFn& kt, double t, cplx z, cplx seed, const Config& cfg) {
    if (t == 1.0) return {z, 0.0, 0, true};
    const Admissible inside = region_of(z);
    Admissible adm = [&](cplx w) { return inside(w); };
    auto T = [&](cplx w) { return z * std::pow(kt(w), t - 1.0); };
    if (!adm(seed)) seed = z;
    RootResult r = solve_fixed_point(T, seed, cfg, adm);
    check(r, "half-line power subordination");
    return r;
}

// K of the power at z (any point off the cut), with the solve seeded at `seed`.
cplx power_k(const AnalyticFn& kt, double t, cplx z, cplx& seed, const Config& cfg) {
    require_off_cut(z);
    const bool flip = z.imag() < 0.0;
    const cplx zz = conj_if(z, flip);
    cplx s = conj_if(seed, flip);
    const RootResult r = power_solve(kt, t, zz, s, cfg);
    seed = conj_if(r.z, flip);
    return conj_if(r.z * kt(r.z), flip);
}

}  // namespace

MulSubordinationResult subord_mul_rplus_fn(const AnalyticFn& kt1, const AnalyticFn& kt2, cplx z, cplx seed,
                                           const Config& cfg) {
    require_off_cut(z);
    const bool flip = z.imag() < 0.0;
    const cplx zz = conj_if(z, flip);
    const Admissible inside = region_of(zz);
    auto T = [&](cplx w) { return zz * kt1(zz * kt2(w)); };
    Admissible adm = [&](cplx w) { return inside(w) && inside(zz * kt2(w)); };
    seed = conj_if(seed, flip);
    if (!adm(seed)) seed = zz;
    const RootResult r = solve_fixed_point(T, seed, cfg, adm);
    check(r, "half-line multiplicative subordination");

    MulSubordinationResult out;
    out.z = z;
    const cplx Z2 = r.z, Z1 = zz * kt2(Z2);
    const cplx k1 = Z1 * kt1(Z1), k2 = Z2 * kt2(Z2);
    out.Z1 = conj_if(Z1, flip);
    out.Z2 = conj_if(Z2, flip);
    out.common_value = conj_if(k1, flip);
    out.residual_system = std::abs(Z1 * Z2 - zz * k1);
    out.residual_match = std::abs(k1 - k2);
    out.iterations = r.iterations;
    if (zz.imag() > 0.0) out.wedge_ok = std::arg(Z2) >= std::arg(zz) - 1e-12 && std::arg(Z2) < pi;
    return out;
}

MulSubordinationResult subord_mul_rplus(const Measure& m1, const Measure& m2, HalfPlanePoint z, const Config& cfg) {
    return subord_mul_rplus_fn(reduced_of(m1), reduced_of(m2), z.value(), z.value(), cfg);
}

AnalyticFn free_mul_rplus_k(const Measure& m1, const Measure& m2, const Config& cfg) {
    AnalyticFn kt1 = reduced_of(m1), kt2 = reduced_of(m2);
    return [kt1, kt2, cfg](cplx z) { return subord_mul_rplus_fn(kt1, kt2, z, z, cfg).common_value; };
}

AnalyticFn free_mul_rplus_power_k(const Measure& m, double t, const Config& cfg) {
    if (!(t >= 1.0)) fail(ErrorKind::TLessThanOne, "multiplicative powers need t >= 1");
    AnalyticFn kt = reduced_of(m);
    return [kt, t, cfg](cplx z) {
        cplx seed = z;
        return power_k(kt, t, z, seed, cfg);
    };
}

namespace {

// psi along 1/(x - i eta), continuing down from the continuation height.
template <class KAt>
PsiRay psi_ray(const Config& cfg, KAt k_at) {
    return [cfg, k_at](double x, const std::vector<double>& eta) {
        std::vector<cplx> out;
        out.reserve(eta.size());
        cplx seed = 0.0;
        bool first = true;
        for (const LadderStep& st : continuation_ladder(cfg.continuation_height, eta)) {
            const cplx z = 1.0 / cplx(x, -st.s);
            if (first) seed = z;
            first = false;
            const cplx K = k_at(z, seed);
            if (st.scheduled) out.push_back(K / (1.0 - K));
        }
        return out;
    };
}

}  // namespace

DensityTable free_mul_rplus(const Measure& m1, const Measure& m2, const Eigen::VectorXd& grid,
                            const std::vector<double>& eta, const Config& cfg) {
    AnalyticFn kt1 = reduced_of(m1), kt2 = reduced_of(m2);
    auto k_at = [kt1, kt2, cfg](cplx z, cplx& seed) {
        const MulSubordinationResult r = subord_mul_rplus_fn(kt1, kt2, z, seed, cfg);
        seed = r.Z2;
        return r.common_value;
    };
    AnalyticFn psi_at = [k_at](cplx z) {
        cplx seed = z;
        const cplx K = k_at(z, seed);
        return K / (1.0 - K);
    };
    return recover_from_psi_rplus(psi_at, grid, eta, cfg, psi_ray(cfg, k_at));
}

DensityTable free_mul_rplus_power(const Measure& m, double t, const Eigen::VectorXd& grid,
                                  const std::vector<double>& eta, const Config& cfg) {
    if (!(t >= 1.0)) fail(ErrorKind::TLessThanOne, "multiplicative powers need t >= 1");
    AnalyticFn kt = reduced_of(m);
    auto k_at = [kt, t, cfg](cplx z, cplx& seed) { return power_k(kt, t, z, seed, cfg); };
    AnalyticFn psi_at = [k_at](cplx z) {
        cplx seed = z;
        const cplx K = k_at(z, seed);
        return K / (1.0 - K);
    };
    return recover_from_psi_rplus(psi_at, grid, eta, cfg, psi_ray(cfg, k_at));
}

}  // namespace freeprob
