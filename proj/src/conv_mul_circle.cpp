#include "freeprob/conv_mul_circle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "freeprob/transforms.hpp"

namespace freeprob {

namespace {

AnalyticFn reduced_of(const Measure& m) {
    if (m.domain != Domain::UnitCircle)
        fail(ErrorKind::DomainMismatch, "circle multiplicative convolution needs circle measures");
    if (std::abs(m.mean) < 1e-12) fail(ErrorKind::ZeroMeanOnCircle, "measure has zero mean");
    return [m](cplx z) { return reduced_transform(m, z); };
}

void check(const RootResult& r, const char* what) {
    if (!r.converged)
        fail(ErrorKind::NoConvergence, std::string(what) + ": residual " + std::to_string(r.residual) + " after " +
                                           std::to_string(r.iterations) + " iterations");
}

bool in_disk(cplx w) { return std::abs(w) < 1.0; }

void require_disk(cplx z) {
    if (!in_disk(z)) fail(ErrorKind::DomainViolation, "circle subordination needs |z| < 1");
}

// qt of the power at z: Z = z qt(Z)^e, result Z qt(Z) / Z = qt(Z)^(e + 1).
cplx power_q(const AnalyticFn& qt, double e, cplx z, cplx& seed, const Config& cfg) {
    require_disk(z);
    if (e == 0.0) {
        seed = z;
        return z * qt(z);
    }
    auto T = [&](cplx w) { return z * std::pow(qt(w), e); };
    if (!in_disk(seed)) seed = z;
    const RootResult r = solve_fixed_point(T, seed, cfg, in_disk);
    check(r, "circle power subordination");
    seed = r.z;
    return r.z * qt(r.z);
}

}  // namespace

CircleSubordinationResult subord_mul_circle_fn(const AnalyticFn& qt1, const AnalyticFn& qt2, cplx z, cplx seed,
                                               const Config& cfg) {
    require_disk(z);
    auto T = [&](cplx w) { return z * qt1(z * qt2(w)); };
    Admissible adm = [&](cplx w) { return in_disk(w) && in_disk(z * qt2(w)); };
    if (!adm(seed)) seed = z;
    const RootResult r = solve_fixed_point(T, seed, cfg, adm);
    check(r, "circle multiplicative subordination");
    CircleSubordinationResult out;
    out.z = z;
    out.Z2 = r.z;
    out.Z1 = z * qt2(out.Z2);
    out.common_value = out.Z1 * qt1(out.Z1);
    out.residual_system = std::abs(out.Z1 * out.Z2 - z * out.common_value);
    out.residual_match = std::abs(out.common_value - out.Z2 * qt2(out.Z2));
    out.iterations = r.iterations;
    return out;
}

CircleSubordinationResult subord_mul_circle(const Measure& m1, const Measure& m2, DiskPoint z, const Config& cfg) {
    return subord_mul_circle_fn(reduced_of(m1), reduced_of(m2), z.value(), z.value(), cfg);
}

AnalyticFn free_mul_circle_q(const Measure& m1, const Measure& m2, const Config& cfg) {
    AnalyticFn qt1 = reduced_of(m1), qt2 = reduced_of(m2);
    return [qt1, qt2, cfg](cplx z) { return subord_mul_circle_fn(qt1, qt2, z, z, cfg).common_value; };
}

ZeroFreeCertificate zero_free_certificate(const Measure& m, int samples) {
    AnalyticFn qt = reduced_of(m);
    ZeroFreeCertificate c;
    c.min_modulus = std::numeric_limits<double>::infinity();
    double turn = 0.0;
    cplx prev = qt(c.radius);
    for (int k = 1; k <= samples; ++k) {
        const cplx v = qt(std::polar(c.radius, 2.0 * pi * k / samples));
        c.min_modulus = std::min(c.min_modulus, std::abs(v));
        turn += std::arg(v / prev);
        prev = v;
    }
    c.winding = static_cast<int>(std::lround(turn / (2.0 * pi)));
    c.zero_free = c.winding == 0 && c.min_modulus > 1e-8;
    return c;
}

namespace {

struct PowerPlan {
    AnalyticFn qt;    // reduced transform of the base (m or m [x] m)
    double exponent;  // power applied inside the fixed point
};

PowerPlan plan_power(const Measure& m, double t, bool use_certificate, const Config& cfg) {
    if (!(t >= 1.0)) fail(ErrorKind::TLessThanOne, "multiplicative powers need t >= 1");
    AnalyticFn qt = reduced_of(m);
    if (use_certificate && zero_free_certificate(m).zero_free) return {qt, t - 1.0};
    if (t < 2.0)
        fail(ErrorKind::TBelowTwoWithoutCertificate,
             "powers below 2 need Q(z) != 0 on the punctured disk; no certificate");
    AnalyticFn nu = [qt, cfg](cplx z) {
        if (z == 0.0) return qt(z) * qt(z);
        return subord_mul_circle_fn(qt, qt, z, z, cfg).common_value / z;
    };
    return {nu, t / 2.0 - 1.0};
}

}  // namespace

AnalyticFn free_mul_circle_power_q(const Measure& m, double t, bool use_certificate, const Config& cfg) {
    const PowerPlan p = plan_power(m, t, use_certificate, cfg);
    return [p, cfg](cplx z) {
        cplx seed = z;
        return power_q(p.qt, p.exponent, z, seed, cfg);
    };
}

namespace {

template <class QAt>
DensityTable invert_q(const Eigen::VectorXd& theta, const std::vector<double>& r, const Config& cfg, QAt q_at) {
    BoundaryRay ray = [&](double x, const std::vector<double>& sched) {
        std::vector<cplx> out;
        out.reserve(sched.size());
        cplx seed = 0.0;
        for (const LadderStep& st : continuation_ladder(1.0, sched)) {
            const cplx z = std::polar(1.0 - st.s, -x);
            const cplx Q = q_at(z, seed);
            if (st.scheduled) out.push_back((1.0 + Q) / (1.0 - Q));
        }
        return out;
    };
    return herglotz_invert(ray, theta, r, cfg);
}

}  // namespace

DensityTable free_mul_circle(const Measure& m1, const Measure& m2, const Eigen::VectorXd& theta,
                             const std::vector<double>& r, const Config& cfg) {
    AnalyticFn qt1 = reduced_of(m1), qt2 = reduced_of(m2);
    return invert_q(theta, r, cfg, [&](cplx z, cplx& seed) {
        const CircleSubordinationResult res = subord_mul_circle_fn(qt1, qt2, z, seed, cfg);
        seed = res.Z2;
        return res.common_value;
    });
}

DensityTable free_mul_circle_power(const Measure& m, double t, const Eigen::VectorXd& theta,
                                   const std::vector<double>& r, bool use_certificate, const Config& cfg) {
    const PowerPlan p = plan_power(m, t, use_certificate, cfg);
    return invert_q(theta, r, cfg, [&](cplx z, cplx& seed) { return power_q(p.qt, p.exponent, z, seed, cfg); });
}

}  // namespace freeprob
