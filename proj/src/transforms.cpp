#include "freeprob/transforms.hpp"

#include <cmath>

#include "freeprob/quadrature.hpp"

namespace freeprob {

namespace {

[[noreturn]] void on_cut() { fail(ErrorKind::PointOnCut, "transform evaluated on the support"); }

double mp_lo(double lam) { return (1.0 - std::sqrt(lam)) * (1.0 - std::sqrt(lam)); }
double mp_hi(double lam) { return (1.0 + std::sqrt(lam)) * (1.0 + std::sqrt(lam)); }

// Cauchy transform of a named continuous part, weight included.
cplx named_cauchy(const ContinuousPart& c, cplx z) {
    const bool real_axis = z.imag() == 0.0;
    cplx g;
    switch (c.family) {
        case Family::Semicircle: {
            const cplx w = z - c.p1;
            const double R = c.p2;
            if (real_axis && std::abs(w.real()) <= R) on_cut();
            g = 2.0 / (w + std::sqrt(w - R) * std::sqrt(w + R));
            break;
        }
        case Family::Arcsine: {
            const cplx w = z - c.p1;
            const double h = c.p2;
            if (real_axis && std::abs(w.real()) <= h) on_cut();
            g = 1.0 / (std::sqrt(w - h) * std::sqrt(w + h));
            break;
        }
        case Family::Cauchy: {
            if (real_axis) on_cut();
            const double b = z.imag() > 0.0 ? c.p1 : -c.p1;
            g = 1.0 / (z - c.p2 + cplx(0.0, b));
            break;
        }
        case Family::Uniform: {
            const double lo = c.p1, hi = c.p2;
            if (real_axis && z.real() >= lo && z.real() <= hi) on_cut();
            if (std::abs(z - 0.5 * (lo + hi)) > 2.0 * (hi - lo))
                g = std::log((z - lo) / (z - hi)) / (hi - lo);
            else
                g = (std::log(z - lo) - std::log(z - hi)) / (hi - lo);
            break;
        }
        case Family::MarchenkoPastur: {
            const double lam = c.p1, s = c.p2, a = mp_lo(lam), b = mp_hi(lam);
            const cplx y = z / s;
            if (real_axis && y.real() >= a && y.real() <= b) on_cut();
            const cplx S = std::sqrt(y - a) * std::sqrt(y - b);
            cplx full;
            if (std::abs(y) > b) full = 2.0 / (y + 1.0 - lam + S);
            else full = (y + 1.0 - lam - S) / (2.0 * y);
            const cplx cont = (full - std::max(1.0 - lam, 0.0) / y) / std::min(lam, 1.0);
            g = cont / s;
            break;
        }
    }
    return c.weight * g;
}

cplx continuous_cauchy(const ContinuousPart& c, cplx z) {
    if (c.tabulated) return piecewise_linear_cauchy(c.grid, c.density, z);
    return named_cauchy(c, z);
}

void require_line(const Measure& m) {
    if (m.domain == Domain::UnitCircle) fail(ErrorKind::DomainMismatch, "Cauchy transform of a circle measure");
}

// ∫ xi/(1 - z xi) over the continuous part of a half-line measure.
cplx rplus_continuous_a(const ContinuousPart& c, cplx z) {
    auto [lo, hi] = continuous_support(c, Domain::PositiveHalfLine);
    const double R = std::max(std::abs(lo), std::abs(hi));
    if (std::abs(z) * R < 1e-3) {
        cplx acc = 0.0, zk = 1.0;
        for (int k = 0; k < 12; ++k, zk *= z) acc += zk * continuous_moment(c, k + 1);
        return acc;
    }
    const cplx s = 1.0 / z;
    return s * (s * continuous_cauchy(c, s) - c.weight);
}

cplx circle_continuous_psi(const ContinuousPart& c, cplx z) {
    if (c.tabulated) return piecewise_linear_circle_psi(c.grid, c.density, z);
    const cplx I(0.0, 1.0);
    return c.weight * I *
           (std::log(1.0 - z * std::polar(1.0, c.p2)) - std::log(1.0 - z * std::polar(1.0, c.p1))) /
           (c.p2 - c.p1);
}

cplx circle_continuous_a(const ContinuousPart& c, cplx z) {
    if (std::abs(z) < 1e-3) {
        cplx acc = 0.0, zk = 1.0;
        for (int k = 0; k < 12; ++k, zk *= z) acc += zk * continuous_circle_moment(c, k + 1);
        return acc;
    }
    return circle_continuous_psi(c, z) / z;
}

bool vertical_monotone(const AnalyticFn& F, cplx z) {
    double prev = F(z).imag();
    for (int k = 1; k <= 4; ++k) {
        const cplx p(z.real(), z.imag() * (1.0 + 0.25 * k));
        const double v = F(p).imag();
        if (v < prev - 1e-12 * (1.0 + std::abs(prev))) return false;
        prev = v;
    }
    return true;
}

}  // namespace

cplx cauchy_g_at(const Measure& m, cplx z) {
    require_line(m);
    cplx acc = 0.0;
    for (const Atom& a : m.atoms) {
        const cplx d = z - a.x;
        if (d == 0.0) on_cut();
        acc += a.w / d;
    }
    if (m.continuous) acc += continuous_cauchy(*m.continuous, z);
    return acc;
}

cplx cauchy_g(const Measure& m, HalfPlanePoint z) { return cauchy_g_at(m, z.value()); }

cplx recip_f_at(const Measure& m, cplx z) { return 1.0 / cauchy_g_at(m, z); }

cplx recip_f(const Measure& m, HalfPlanePoint z) { return recip_f_at(m, z.value()); }

cplx psi_over_z(const Measure& m, cplx z) {
    cplx acc = 0.0;
    switch (m.domain) {
        case Domain::RealLine: fail(ErrorKind::DomainMismatch, "psi needs a half-line or circle measure");
        case Domain::PositiveHalfLine:
            for (const Atom& a : m.atoms) {
                const cplx d = 1.0 - z * a.x;
                if (d == 0.0) on_cut();
                acc += a.w * a.x / d;
            }
            if (m.continuous) acc += rplus_continuous_a(*m.continuous, z);
            return acc;
        case Domain::UnitCircle:
            if (!(std::abs(z) < 1.0)) fail(ErrorKind::DomainViolation, "psi on the circle needs |z| < 1");
            for (const Atom& a : m.atoms) {
                const cplx xi = std::polar(1.0, a.x);
                acc += a.w * xi / (1.0 - z * xi);
            }
            if (m.continuous) acc += circle_continuous_a(*m.continuous, z);
            return acc;
    }
    return acc;
}

cplx psi(const Measure& m, cplx z) {
    if (m.domain == Domain::PositiveHalfLine && z.imag() == 0.0 && z.real() >= 0.0) on_cut();
    if (m.domain == Domain::UnitCircle) {
        // direct form keeps full accuracy for atoms near the unit circle
        if (!(std::abs(z) < 1.0)) fail(ErrorKind::DomainViolation, "psi on the circle needs |z| < 1");
        cplx acc = 0.0;
        for (const Atom& a : m.atoms) {
            const cplx u = z * std::polar(1.0, a.x);
            acc += a.w * u / (1.0 - u);
        }
        if (m.continuous) acc += circle_continuous_psi(*m.continuous, z);
        return acc;
    }
    return z * psi_over_z(m, z);
}

cplx k_transform(const Measure& m, cplx z) {
    if (m.domain != Domain::PositiveHalfLine) fail(ErrorKind::DomainMismatch, "K transform needs a half-line measure");
    const cplx p = psi(m, z);
    if (std::abs(1.0 + p) < 1e-14) fail(ErrorKind::PsiPoleHit, "1 + psi vanishes");
    return p / (1.0 + p);
}

cplx q_transform(const Measure& m, DiskPoint z) {
    if (m.domain != Domain::UnitCircle) fail(ErrorKind::DomainMismatch, "Q transform needs a circle measure");
    const cplx p = psi(m, z.value());
    return p / (1.0 + p);
}

cplx h_transform(const Measure& m, DiskPoint z) {
    if (m.domain != Domain::UnitCircle) fail(ErrorKind::DomainMismatch, "H transform needs a circle measure");
    return 1.0 + 2.0 * psi(m, z.value());
}

cplx reduced_transform(const Measure& m, cplx z) {
    const cplx a = psi_over_z(m, z);
    const cplx d = 1.0 + z * a;
    if (std::abs(d) < 1e-14) fail(ErrorKind::PsiPoleHit, "1 + psi vanishes");
    return a / d;
}

cplx invert_analytic(const AnalyticFn& F, cplx w, const Config& cfg) {
    const double tol = 0.1 * cfg.residual_tol * (1.0 + std::abs(w));
    Admissible upper = [](cplx z) { return z.imag() > 0.0; };
    // follow the branch that behaves like the identity at infinity down the
    // vertical ray above w; Newton from w alone can land on another sheet
    const double top = 4.0 * (1.0 + std::abs(w));
    cplx z = w + cplx(0.0, top);
    for (double off = top; off > 0.05 * w.imag(); off *= 0.5) {
        const cplx target = w + cplx(0.0, off);
        RootResult r = newton_solve([&](cplx v) { return F(v) - target; }, z, tol, 100, upper);
        if (!r.converged && r.residual > cfg.residual_tol * (1.0 + std::abs(target)))
            fail(ErrorKind::ConeTooLow, "Newton inversion of F did not converge");
        z = r.z;
    }
    RootResult r = newton_solve([&](cplx v) { return F(v) - w; }, z, tol, 200, upper);
    if (!r.converged && r.residual > cfg.residual_tol * (1.0 + std::abs(w)))
        fail(ErrorKind::ConeTooLow, "Newton inversion of F did not converge");
    if (!vertical_monotone(F, r.z)) fail(ErrorKind::ConeTooLow, "inverse is not on the principal sheet");
    return r.z;
}

cplx invert_f(const Measure& m, HalfPlanePoint w, const ConeParams& cone, const Config& cfg) {
    if (!cone.contains(w.value())) fail(ErrorKind::DomainViolation, "point lies outside the cone");
    return invert_analytic([&m](cplx z) { return recip_f_at(m, z); }, w.value(), cfg);
}

cplx phi(const Measure& m, HalfPlanePoint w, const ConeParams& cone, const Config& cfg) {
    if (m.is_dirac()) return m.atoms[0].x;
    return invert_f(m, w, cone, cfg) - w.value();
}

cplx phi_of(const AnalyticFn& F, cplx w, const Config& cfg) { return invert_analytic(F, w, cfg) - w; }

ConeParams auto_cone(const AnalyticFn& F, double alpha, const Config& cfg) {
    static const double heights[] = {1.25, 2.0, 4.0, 8.0};
    double beta = 1.0;
    for (int round = 0; round < 24; ++round, beta *= 2.0) {
        bool good = true;
        for (double hy : heights) {
            for (int j = 0; j < 8 && good; ++j) {
                const double y = hy * beta;
                const double x = alpha * y * (-0.875 + 0.25 * j);
                try {
                    invert_analytic(F, cplx(x, y), cfg);
                } catch (const Error&) {
                    good = false;
                }
            }
            if (!good) break;
        }
        if (good) return {alpha, beta};
    }
    fail(ErrorKind::ConeTooLow, "no admissible cone height found");
}

ConeParams auto_cone(const Measure& m, double alpha, const Config& cfg) {
    return auto_cone([&m](cplx z) { return recip_f_at(m, z); }, alpha, cfg);
}

namespace {

// Inverts T(x) = target along t*target, t = 2^-7 ... 1, starting from x ~ t*target/mean.
cplx invert_from_origin(const AnalyticFn& T, cplx mean, cplx target, const Admissible& adm,
                        const Config& cfg) {
    if (target == 0.0) return 0.0;
    cplx x = 0.0;
    const int steps = 8;
    double residual = 0.0;
    for (int j = steps - 1; j >= 0; --j) {
        const cplx tz = std::ldexp(1.0, -j) * target;
        const cplx guess = (j == steps - 1) ? tz / mean : 2.0 * x;
        auto f = [&](cplx v) { return T(v) - tz; };
        RootResult r = newton_solve(f, guess, 1e-14 * (1.0 + std::abs(tz)), 100, adm);
        if (!r.converged && r.residual > cfg.residual_tol)
            fail(ErrorKind::OutsideImage, "transform inversion left the image domain");
        x = r.z;
        residual = r.residual;
    }
    if (residual > cfg.residual_tol) fail(ErrorKind::OutsideImage, "inversion residual too large");
    return x;
}

}  // namespace

cplx sigma_rplus_of(const AnalyticFn& K, double mean, cplx z, const Config& cfg) {
    if (!(mean > 0.0)) fail(ErrorKind::DomainViolation, "half-line Sigma transform needs a positive mean");
    if (z == 0.0) return 1.0 / mean;
    if (z.real() >= 0.0)
        fail(ErrorKind::OutsideImage, "Sigma is evaluated on the left half-plane");
    const cplx x = invert_from_origin(K, mean, z, [](cplx v) { return v.real() < 0.0; }, cfg);
    return x / z;
}

cplx sigma_circle_of(const AnalyticFn& Q, cplx mean, cplx z, const Config& cfg) {
    if (std::abs(mean) == 0.0) fail(ErrorKind::ZeroMeanOnCircle, "Sigma needs a nonzero mean");
    if (z == 0.0) return 1.0 / mean;
    const cplx x = invert_from_origin(Q, mean, z, [](cplx v) { return std::abs(v) < 1.0; }, cfg);
    return x / z;
}

cplx sigma_rplus(const Measure& m, cplx z, const Config& cfg) {
    if (m.domain != Domain::PositiveHalfLine) fail(ErrorKind::DomainMismatch, "sigma_rplus needs a half-line measure");
    return sigma_rplus_of([&m](cplx x) { return x * reduced_transform(m, x); }, moment(m, 1), z, cfg);
}

cplx sigma_circle(const Measure& m, cplx z, const Config& cfg) {
    if (m.domain != Domain::UnitCircle) fail(ErrorKind::DomainMismatch, "sigma_circle needs a circle measure");
    return sigma_circle_of([&m](cplx x) { return x * reduced_transform(m, x); }, m.mean, z, cfg);
}

double sigma_circle_radius(const Measure& m, const Config& cfg) {
    double alpha = 0.5;
    for (int round = 0; round < 40; ++round, alpha *= 0.5) {
        bool good = true;
        for (int k = 0; k < 8 && good; ++k) {
            try {
                const cplx s = sigma_circle(m, std::polar(alpha, 2.0 * pi * k / 8.0), cfg);
                good = std::abs(s) >= 1.0 - 1e-10;
            } catch (const Error&) {
                good = false;
            }
        }
        if (good) return alpha;
    }
    fail(ErrorKind::OutsideImage, "no inversion radius found");
}

}  // namespace freeprob
