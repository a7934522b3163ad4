#include "freeprob/conv_add.hpp"

#include <algorithm>
#include <cmath>

#include "freeprob/transforms.hpp"

namespace freeprob {

namespace {

void require_line(const Measure& m) {
    if (m.domain == Domain::UnitCircle) fail(ErrorKind::DomainMismatch, "additive convolution needs measures on the line");
}

AnalyticFn f_of(const Measure& m) {
    require_line(m);
    return [m](cplx z) { return recip_f_at(m, z); };
}

void check(const RootResult& r, const char* what) {
    if (!r.converged)
        fail(ErrorKind::NoConvergence, std::string(what) + ": residual " + std::to_string(r.residual) + " after " +
                                           std::to_string(r.iterations) + " iterations");
}

// G values along x + i*eta for each scheduled eta, walking down from the
// continuation height; `solve` maps (z, seed) to (F(z), new seed).
template <class Solve>
std::vector<cplx> continuation_ray(double x, const std::vector<double>& eta, const Config& cfg, Solve&& solve) {
    std::vector<cplx> out;
    out.reserve(eta.size());
    cplx seed(x, cfg.continuation_height);
    for (const LadderStep& st : continuation_ladder(cfg.continuation_height, eta)) {
        const cplx z(x, st.s);
        if (seed.imag() < st.s) seed = z;
        const cplx F = solve(z, seed);
        if (st.scheduled) out.push_back(1.0 / F);
    }
    return out;
}

}  // namespace

SubordinationResult subord_add_fn(const AnalyticFn& F1, const AnalyticFn& F2, cplx z, cplx seed, const Config& cfg) {
    if (!(z.imag() > 0.0)) fail(ErrorKind::DomainViolation, "subordination needs Im z > 0");
    const double floor = z.imag();
    auto T = [&](cplx w) {
        const cplx z1 = z + F2(w) - w;
        return z + F1(z1) - z1;
    };
    // both arguments must stay in the half-plane above Im z
    Admissible adm = [&](cplx w) {
        return w.imag() >= floor * (1.0 - 1e-9) && (z + F2(w) - w).imag() >= floor * (1.0 - 1e-9);
    };
    if (!adm(seed)) seed = z;
    const RootResult r = solve_fixed_point(T, seed, cfg, adm);
    check(r, "additive subordination");
    SubordinationResult out;
    out.z = z;
    out.Z2 = r.z;
    const cplx f2 = F2(out.Z2);
    out.Z1 = z + f2 - out.Z2;
    out.common_value = F1(out.Z1);
    out.residual_system = std::abs(z - out.Z1 - out.Z2 + out.common_value);
    out.residual_match = std::abs(out.common_value - f2);
    out.iterations = r.iterations;
    return out;
}

SubordinationResult subord_add(const Measure& m1, const Measure& m2, HalfPlanePoint z, const Config& cfg) {
    return subord_add_fn(f_of(m1), f_of(m2), z.value(), z.value(), cfg);
}

namespace {

// Pairwise fold: rho_k = rho_{k-1} [+] mu_k. Returns the subordination
// points of all n measures at z plus the common F value.
void multi_fold(const std::vector<AnalyticFn>& fs, std::size_t n, cplx z, const Config& cfg, std::vector<cplx>& Z,
                cplx& common) {
    if (n == 1) {
        Z.assign(1, z);
        common = fs[0](z);
        return;
    }
    AnalyticFn prefix = [&fs, n, &cfg](cplx w) {
        std::vector<cplx> tmp;
        cplx c;
        multi_fold(fs, n - 1, w, cfg, tmp, c);
        return c;
    };
    const SubordinationResult r = subord_add_fn(prefix, fs[n - 1], z, z, cfg);
    multi_fold(fs, n - 1, r.Z1, cfg, Z, common);
    Z.push_back(r.Z2);
    common = r.common_value;
}

}  // namespace

MultiSubordinationResult subord_add_multi(const std::vector<Measure>& ms, HalfPlanePoint z, const Config& cfg) {
    if (ms.size() < 2) fail(ErrorKind::InvalidArgument, "multi-measure subordination needs at least two measures");
    std::vector<AnalyticFn> fs;
    for (const Measure& m : ms) fs.push_back(f_of(m));
    MultiSubordinationResult out;
    out.z = z.value();
    multi_fold(fs, fs.size(), z.value(), cfg, out.Z, out.common_value);
    cplx sum = 0.0;
    for (cplx v : out.Z) sum += v;
    out.residual_system = std::abs(sum - double(ms.size() - 1) * out.common_value - out.z);
    for (std::size_t j = 0; j < ms.size(); ++j)
        out.residual_match = std::max(out.residual_match, std::abs(fs[j](out.Z[j]) - out.common_value));
    return out;
}

AnalyticFn free_add_f(const Measure& m1, const Measure& m2, const Config& cfg) {
    AnalyticFn F1 = f_of(m1), F2 = f_of(m2);
    return [F1, F2, cfg](cplx z) { return subord_add_fn(F1, F2, z, z, cfg).common_value; };
}

namespace {

RootResult power_solve(const AnalyticFn& F, double t, cplx z, cplx seed, const Config& cfg) {
    if (!(z.imag() > 0.0)) fail(ErrorKind::DomainViolation, "subordination needs Im z > 0");
    if (t == 1.0) return {z, 0.0, 0, true};
    auto T = [&](cplx w) { return (z + (t - 1.0) * F(w)) / t; };
    const double floor = z.imag();
    Admissible adm = [floor](cplx w) { return w.imag() >= floor * (1.0 - 1e-9); };
    if (!adm(seed)) seed = z;
    RootResult r = solve_fixed_point(T, seed, cfg, adm);
    check(r, "additive power subordination");
    return r;
}

}  // namespace

RootResult subord_add_power(const Measure& m, double t, cplx z, cplx seed, const Config& cfg) {
    if (!(t >= 1.0)) fail(ErrorKind::TLessThanOne, "additive powers need t >= 1");
    return power_solve(f_of(m), t, z, seed, cfg);
}

AnalyticFn free_add_power_f(const Measure& m, double t, const Config& cfg) {
    if (!(t >= 1.0)) fail(ErrorKind::TLessThanOne, "additive powers need t >= 1");
    AnalyticFn F = f_of(m);
    return [F, t, cfg](cplx z) { return F(power_solve(F, t, z, z, cfg).z); };
}

AnalyticFn boolean_add_f(const Measure& m1, const Measure& m2) {
    AnalyticFn F1 = f_of(m1), F2 = f_of(m2);
    return [F1, F2](cplx z) { return F1(z) + F2(z) - z; };
}

DensityTable free_add(const Measure& m1, const Measure& m2, const Eigen::VectorXd& grid,
                      const std::vector<double>& eta, const Config& cfg) {
    AnalyticFn F1 = f_of(m1), F2 = f_of(m2);
    BoundaryRay ray = [&](double x, const std::vector<double>& s) {
        return continuation_ray(x, s, cfg, [&](cplx z, cplx& seed) {
            const SubordinationResult r = subord_add_fn(F1, F2, z, seed, cfg);
            seed = r.Z2;
            return r.common_value;
        });
    };
    return stieltjes_invert(ray, grid, eta, cfg);
}

DensityTable free_add_power(const Measure& m, double t, const Eigen::VectorXd& grid, const std::vector<double>& eta,
                            const Config& cfg) {
    if (!(t >= 1.0)) fail(ErrorKind::TLessThanOne, "additive powers need t >= 1");
    AnalyticFn F = f_of(m);
    BoundaryRay ray = [&](double x, const std::vector<double>& s) {
        return continuation_ray(x, s, cfg, [&](cplx z, cplx& seed) {
            const RootResult r = power_solve(F, t, z, seed, cfg);
            seed = r.z;
            return F(r.z);
        });
    };
    return stieltjes_invert(ray, grid, eta, cfg);
}

DensityTable boolean_add(const Measure& m1, const Measure& m2, const Eigen::VectorXd& grid,
                         const std::vector<double>& eta, const Config& cfg) {
    AnalyticFn F = boolean_add_f(m1, m2);
    BoundaryRay ray = [&](double x, const std::vector<double>& s) {
        std::vector<cplx> out;
        for (double e : s) out.push_back(1.0 / F(cplx(x, e)));
        return out;
    };
    return stieltjes_invert(ray, grid, eta, cfg);
}

}  // namespace freeprob
