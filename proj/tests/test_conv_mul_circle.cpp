#include <cmath>
#include <random>

#include "doctest.h"
#include "freeprob/conv_mul_circle.hpp"
#include "freeprob/transforms.hpp"

using namespace freeprob;

namespace {

const Domain T = Domain::UnitCircle;

Measure two_atom() { return atomic({{0.0, 0.75}, {pi, 0.25}}, T); }
Measure arc() { return with_part(T, {{0.5, 0.3}}, named_part(Family::Uniform, -1.0, 2.0, 0.7)); }

const Atom* atom_near(const DensityTable& t, double x, double tol = 1e-3) {
    for (const Atom& a : t.atoms)
        if (std::abs(std::remainder(a.x - x, 2 * pi)) < tol) return &a;
    return nullptr;
}

AnalyticFn reduced(const AnalyticFn& q, cplx mean) {
    return [q, mean](cplx w) { return std::abs(w) < 1e-300 ? mean : q(w) / w; };
}

}  // namespace

TEST_CASE("a point mass rotates") {
    const auto theta = theta_grid(360);
    const auto r = default_r_schedule();
    const Measure u = uniform(-1.0, 1.0, T);
    DensityTable t = free_mul_circle(u, dirac(0.5, T), theta, r);
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
        const double x = theta[i];
        const double expect = (x > -0.45 && x < 1.45) ? 0.5 : ((x < -0.55 || x > 1.55) ? 0.0 : -1.0);
        if (expect >= 0.0) CHECK(std::abs(t.density[i] - expect) < 1e-3);
    }

    DensityTable id = free_mul_circle(two_atom(), dirac(0.0, T), theta, r);
    REQUIRE(atom_near(id, 0.0) != nullptr);
    CHECK(atom_near(id, 0.0)->w == doctest::Approx(0.75).epsilon(1e-4));

    DensityTable dd = free_mul_circle(dirac(0.4, T), dirac(1.1, T), theta, r);
    REQUIRE(dd.atoms.size() == 1);
    CHECK(dd.atoms[0].x == doctest::Approx(1.5).epsilon(2e-3));
    CHECK(dd.atoms[0].w == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("equal factors share one subordination function") {
    const Measure m = two_atom();
    const cplx z(0.2, -0.3);
    CircleSubordinationResult s = subord_mul_circle(m, m, z);
    CHECK(std::abs(s.Z1 - s.Z2) < 1e-10);
    CHECK(std::abs(s.Z1 * s.Z1 - z * q_transform(m, s.Z1)) < 1e-10);
}

TEST_CASE("subordination stays in the disk") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> ur(0.0, 0.99), ut(-pi, pi);
    const Measure pairs[][2] = {{two_atom(), two_atom()}, {arc(), two_atom()}, {arc(), uniform(0.0, 2.0, T)}};
    for (const auto& p : pairs) {
        for (int k = 0; k < 100; ++k) {
            const cplx z = std::polar(ur(rng), ut(rng));
            CircleSubordinationResult s = subord_mul_circle(p[0], p[1], z);
            CHECK(std::abs(s.Z1) < 1.0);
            CHECK(std::abs(s.Z2) < 1.0);
            CHECK(s.residual_system < 1e-10);
            CHECK(s.residual_match < 1e-10);
        }
    }
}

TEST_CASE("S-transform is multiplicative near 0") {
    const Measure m1 = two_atom(), m2 = arc();
    const AnalyticFn q = free_mul_circle_q(m1, m2);
    const double rad = std::min(sigma_circle_radius(m1), sigma_circle_radius(m2));
    for (int k = 0; k < 8; ++k) {
        const cplx z = std::polar(0.5 * rad, 2 * pi * k / 8 + 0.1);
        const cplx lhs = sigma_circle(m1, z) * sigma_circle(m2, z);
        CHECK(std::abs(lhs - sigma_circle_of(q, m1.mean * m2.mean, z)) < 1e-8);
    }
}

TEST_CASE("circle powers") {
    const auto theta = theta_grid(360);
    const auto r = default_r_schedule();
    DensityTable two = free_mul_circle_power(arc(), 2.0, theta, r);
    DensityTable pair = free_mul_circle(arc(), arc(), theta, r);
    CHECK((two.density - pair.density).cwiseAbs().maxCoeff() < 1e-6);

    for (int t : {2, 3}) {
        DensityTable d = free_mul_circle_power(dirac(0.3, T), t, theta, r);
        REQUIRE(d.atoms.size() == 1);
        CHECK(d.atoms[0].x == doctest::Approx(0.3 * t).epsilon(2e-3));
    }

    // third power against (m [x] m) [x] m
    const Measure m = two_atom();
    const AnalyticFn q3 = free_mul_circle_power_q(m, 3.0);
    const AnalyticFn q2 = free_mul_circle_q(m, m);
    const cplx mean = m.mean;
    for (cplx z : {cplx(0.1, 0.05), cplx(-0.2, 0.1), cplx(0.0, -0.3)}) {
        CircleSubordinationResult s =
            subord_mul_circle_fn(reduced(q2, mean * mean), [&](cplx w) { return reduced_transform(m, w); }, z, z);
        CHECK(std::abs(q3(z) - s.common_value) < 1e-8);
    }

    bool threw = false;
    try {
        free_mul_circle_power(m, 1.5, theta, r);
    } catch (const Error& e) {
        threw = e.kind() == ErrorKind::TBelowTwoWithoutCertificate;
    }
    CHECK(threw);
}

TEST_CASE("zero-free certificate") {
    // {0: p, pi: 1-p} has Q(z)/z = (2p - 1 + z)/(1 + (2p - 1) z), zero at 1 - 2p
    const Measure m = two_atom();
    CHECK(std::abs(q_transform(m, cplx(-0.5, 0.0))) < 1e-15);
    ZeroFreeCertificate c = zero_free_certificate(m);
    CHECK_FALSE(c.zero_free);
    CHECK(c.winding == 1);

    ZeroFreeCertificate d = zero_free_certificate(dirac(0.7, T));
    CHECK(d.zero_free);
    CHECK(d.winding == 0);
    CHECK(d.min_modulus == doctest::Approx(1.0));
}
