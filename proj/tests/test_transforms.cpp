#include <cmath>
#include <random>

#include "doctest.h"
#include "freeprob/conv_mul_rplus.hpp"
#include "freeprob/density.hpp"
#include "freeprob/transforms.hpp"

using namespace freeprob;

namespace {

const cplx I(0.0, 1.0);

// G of the standard semicircle by midpoint quadrature on t = 2 sin(u)
cplx semicircle_g_oracle(cplx z) {
    const int n = 40000;
    cplx acc = 0.0;
    for (int k = 0; k < n; ++k) {
        const double u = -pi / 2 + (k + 0.5) * pi / n;
        const double t = 2.0 * std::sin(u);
        acc += (4.0 * std::cos(u) * std::cos(u)) / (2.0 * pi) / (z - t);
    }
    return acc * (pi / n);
}

const Atom* atom_near(const DensityTable& t, double x, double tol = 1e-3) {
    for (const Atom& a : t.atoms)
        if (std::abs(a.x - x) < tol) return &a;
    return nullptr;
}

Measure two_atom_rplus() { return atomic({{1.0, 0.5}, {4.0, 0.5}}, Domain::PositiveHalfLine); }

}  // namespace

TEST_CASE("cauchy transform closed forms") {
    CHECK(std::abs(cauchy_g(dirac(0.0), I) + I) < 1e-15);
    for (cplx z : {cplx(0.3, 0.2), cplx(-2.0, 1.0), cplx(5.0, 0.01)}) {
        CHECK(std::abs(cauchy_g(cauchy(2.0), z) - 1.0 / (z + 2.0 * I)) < 1e-10);
        CHECK(std::abs(recip_f(cauchy(2.0), z) - (z + 2.0 * I)) < 1e-9);
        CHECK(std::abs(recip_f(dirac(0.4), z) - (z - 0.4)) < 1e-14);
    }
    const cplx g = cauchy_g(semicircle(0.0, 2.0), 2.0 * I);
    CHECK(std::abs(g - I * (1.0 - std::sqrt(2.0))) < 1e-12);
    CHECK(std::abs(g - semicircle_g_oracle(2.0 * I)) < 1e-8);
    const cplx z(0.7, 0.3);
    CHECK(std::abs(cauchy_g(semicircle(0.0, 2.0), z) - semicircle_g_oracle(z)) < 1e-6);

    CHECK(std::abs(recip_f(bernoulli(), 2.0 * I) - 2.5 * I) < 1e-14);
}

TEST_CASE("G maps the upper half-plane down and F(z)/z tends to one") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ux(-3.0, 3.0), uy(0.01, 3.0);
    for (const Measure& m : {semicircle(0.0, 2.0), bernoulli(), uniform(-1.0, 2.0), marchenko_pastur(0.5)}) {
        for (int k = 0; k < 50; ++k) {
            const cplx z(ux(rng), uy(rng));
            CHECK(cauchy_g(m, z).imag() < 0.0);
            CHECK(recip_f(m, z).imag() >= z.imag() - 1e-12);
        }
        const cplx far(0.0, 1e6);
        CHECK(std::abs(recip_f(m, far) / far - 1.0) < 1e-5);
    }
}

TEST_CASE("psi, K and Q") {
    const Measure da = dirac(2.0, Domain::PositiveHalfLine);
    const cplx z(-0.3, 0.4);
    CHECK(std::abs(psi(da, z) - 2.0 * z / (1.0 - 2.0 * z)) < 1e-14);
    CHECK(std::abs(k_transform(da, z) - 2.0 * z) < 1e-14);

    CHECK(std::abs(psi(two_atom_rplus(), -1.0) - (-0.65)) < 1e-14);
    CHECK(std::abs(k_transform(two_atom_rplus(), -1.0) - (-0.65 / 0.35)) < 1e-12);
    CHECK(std::abs(k_transform(two_atom_rplus(), -1e-9)) < 1e-8);
    CHECK(std::abs(k_transform(marchenko_pastur(2.0), -1e-9)) < 1e-8);

    const Measure one = dirac(0.0, Domain::UnitCircle);
    CHECK(std::abs(psi(one, cplx(0.2, 0.1)) - cplx(0.2, 0.1) / (1.0 - cplx(0.2, 0.1))) < 1e-14);
    const Measure rot = dirac(0.9, Domain::UnitCircle);
    CHECK(std::abs(q_transform(rot, cplx(0.3, -0.2)) - cplx(0.3, -0.2) * std::polar(1.0, 0.9)) < 1e-14);

    const Measure m = atomic({{0.0, 0.75}, {pi, 0.25}}, Domain::UnitCircle);
    const Measure arc = with_part(Domain::UnitCircle, {{0.5, 0.3}}, named_part(Family::Uniform, -1.0, 2.0, 0.7));
    CHECK(std::abs(q_transform(m, cplx(0.0, 0.0))) == 0.0);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> ur(0.0, 0.99), ut(-pi, pi);
    for (int k = 0; k < 200; ++k) {
        const cplx w = std::polar(ur(rng), ut(rng));
        CHECK(std::abs(q_transform(m, w)) <= std::abs(w) + 1e-14);
        CHECK(std::abs(q_transform(arc, w)) <= std::abs(w) + 1e-12);
        CHECK(h_transform(arc, w).real() > 0.0);
    }
}

TEST_CASE("inverse and Voiculescu transforms") {
    const ConeParams cone{1.0, 1.0};
    for (cplx w : {cplx(0.0, 3.0), cplx(1.0, 2.5), cplx(-2.0, 4.0)}) {
        CHECK(std::abs(invert_f(dirac(0.6), w, cone) - (w + 0.6)) < 1e-10);
        CHECK(std::abs(invert_f(cauchy(1.5), w, cone) - (w - 1.5 * I)) < 1e-9);
        CHECK(std::abs(phi(dirac(0.6), w, cone) - 0.6) < 1e-10);
        CHECK(std::abs(phi(cauchy(1.5), w, cone) + 1.5 * I) < 1e-9);
    }
    CHECK(std::abs(invert_f(bernoulli(), 2.5 * I, cone) - 2.0 * I) < 1e-12);
    const cplx w = 3.0 * I;
    CHECK(std::abs(phi(semicircle(0.0, 2.0), w, cone) - 1.0 / w) < 1e-9);
    // F(F^{-1}(w)) = w
    const cplx w2(0.5, 3.0);
    CHECK(std::abs(recip_f(uniform(-1.0, 1.0), invert_f(uniform(-1.0, 1.0), w2, cone)) - w2) < 1e-10);
}

TEST_CASE("S-transforms on the half-line") {
    const Measure da = dirac(2.0, Domain::PositiveHalfLine);
    CHECK(std::abs(sigma_rplus(da, cplx(-0.4, 0.1)) - 0.5) < 1e-10);

    const Measure m = two_atom_rplus();
    for (double x : {-0.2, -1.0, -3.0}) CHECK(std::abs(std::arg(sigma_rplus(m, x))) < 1e-12);

    // m [x] delta_a is a dilation
    const AnalyticFn k = free_mul_rplus_k(m, da);
    for (cplx z : {cplx(-0.5, 0.2), cplx(-1.0, 0.0), cplx(-0.3, -0.4)}) {
        const cplx lhs = sigma_rplus_of(k, 2.0 * moment(m, 1), z);
        CHECK(std::abs(lhs - sigma_rplus(m, z) / 2.0) < 1e-9);
    }
}

TEST_CASE("S-transforms on the circle") {
    const Measure rot = dirac(0.9, Domain::UnitCircle);
    CHECK(std::abs(sigma_circle(rot, cplx(0.1, 0.05)) - std::polar(1.0, -0.9)) < 1e-10);

    const Measure m = atomic({{0.0, 0.75}, {pi, 0.25}}, Domain::UnitCircle);
    CHECK(std::abs(sigma_circle(m, cplx(1e-7, 0.0)) - 1.0 / m.mean) < 1e-6);
    const double rad = sigma_circle_radius(m);
    CHECK(rad > 0.0);
    for (int k = 0; k < 16; ++k) {
        const cplx z = std::polar(0.9 * rad, 2 * pi * k / 16);
        CHECK(std::abs(sigma_circle(m, z)) >= 1.0 - 1e-12);
    }
}

TEST_CASE("extrapolation to zero") {
    std::vector<double> s{0.1, 0.05, 0.025, 0.0125, 0.00625};
    std::vector<double> v;
    for (double t : s) v.push_back(1.5 - 2.0 * t + 0.3 * t * t * t);
    Extrapolation e = extrapolate_to_zero(s, v);
    CHECK(e.value == doctest::Approx(1.5).epsilon(1e-10));
    CHECK_FALSE(e.diverging);

    auto lad = continuation_ladder(4.0, {0.1, 0.05});
    CHECK(lad.front().s == 4.0);
    CHECK(lad.back().s == 0.05);
    CHECK(lad.back().scheduled);
    CHECK(theta_grid(4).size() == 5);
}

TEST_CASE("boundary inversion on the line") {
    const auto grid = linear_grid(-1.9, 1.9, 77);
    DensityTable sc = density_of(semicircle(0.0, 2.0), grid);
    double err = 0.0;
    for (Eigen::Index i = 0; i < grid.size(); ++i)
        err = std::max(err, std::abs(sc.density[i] - std::sqrt(4.0 - grid[i] * grid[i]) / (2.0 * pi)));
    CHECK(err < 1e-3);
    CHECK(sc.atoms.empty());

    DensityTable c = density_of(cauchy(1.0), linear_grid(-5.0, 5.0, 101));
    err = 0.0;
    for (Eigen::Index i = 0; i < c.grid.size(); ++i)
        err = std::max(err, std::abs(c.density[i] - 1.0 / (pi * (1.0 + c.grid[i] * c.grid[i]))));
    CHECK(err < 1e-4);

    DensityTable d = density_of(dirac(0.5), linear_grid(-2.0, 2.0, 81));
    REQUIRE(d.atoms.size() == 1);
    CHECK(d.atoms[0].x == doctest::Approx(0.5));
    CHECK(d.atoms[0].w == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(d.density.cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("boundary inversion on the circle") {
    const auto theta = theta_grid(360);
    const auto r = default_r_schedule();
    BoundaryRay one = [](double, const std::vector<double>& s) { return std::vector<cplx>(s.size(), 1.0); };
    DensityTable u = herglotz_invert(one, theta, r);
    CHECK(u.atoms.empty());
    CHECK((u.density.array() - 1.0 / (2.0 * pi)).abs().maxCoeff() < 1e-9);

    DensityTable d = density_of(dirac(1.0, Domain::UnitCircle), theta);
    REQUIRE(d.atoms.size() == 1);
    CHECK(d.atoms[0].x == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(d.atoms[0].w == doctest::Approx(1.0).epsilon(1e-4));

    DensityTable two = density_of(atomic({{0.0, 0.75}, {pi, 0.25}}, Domain::UnitCircle), theta);
    REQUIRE(atom_near(two, 0.0) != nullptr);
    CHECK(atom_near(two, 0.0)->w == doctest::Approx(0.75).epsilon(1e-4));
    const Atom* at_pi = atom_near(two, pi);
    if (!at_pi) at_pi = atom_near(two, -pi);
    REQUIRE(at_pi != nullptr);
    CHECK(at_pi->w == doctest::Approx(0.25).epsilon(1e-4));

    DensityTable half = density_of(atomic({{0.0, 0.5}, {pi / 2, 0.5}}, Domain::UnitCircle), theta);
    CHECK(half.atoms.size() == 2);
}

TEST_CASE("half-line recovery from psi") {
    const auto grid = linear_grid(0.05, 6.0, 120);
    const auto eta = default_eta_schedule();
    DensityTable d = recover_from_psi_rplus([](cplx z) { return 2.0 * z / (1.0 - 2.0 * z); }, grid, eta);
    REQUIRE(atom_near(d, 2.0) != nullptr);
    CHECK(atom_near(d, 2.0)->w == doctest::Approx(1.0).epsilon(1e-4));

    // psi(-inf) = -1/2 means half the mass sits at 0
    DensityTable h = recover_from_psi_rplus([](cplx z) { return 0.5 * 2.0 * z / (1.0 - 2.0 * z); }, grid, eta);
    REQUIRE(atom_near(h, 0.0) != nullptr);
    CHECK(atom_near(h, 0.0)->w == doctest::Approx(0.5).epsilon(1e-4));

    const Measure m = two_atom_rplus();
    DensityTable t = recover_from_psi_rplus([&](cplx z) { return psi(m, z); }, grid, eta);
    REQUIRE(atom_near(t, 1.0) != nullptr);
    REQUIRE(atom_near(t, 4.0) != nullptr);
    CHECK(atom_near(t, 1.0)->w == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(atom_near(t, 4.0)->w == doctest::Approx(0.5).epsilon(1e-4));
}
