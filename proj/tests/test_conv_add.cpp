#include <cmath>
#include <random>

#include "doctest.h"
#include "freeprob/conv_add.hpp"
#include "freeprob/transforms.hpp"

using namespace freeprob;

namespace {

const cplx I(0.0, 1.0);

// square root with the branch cut along [-2, 2] for z^2 - 4, ~ z at infinity
cplx sqrt_z2m4(cplx z) { return std::sqrt(z - 2.0) * std::sqrt(z + 2.0); }

double arcsine_density(double x) { return 1.0 / (pi * std::sqrt(4.0 - x * x)); }

double sup_gap(const DensityTable& a, const DensityTable& b) {
    return (a.density - b.density).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("subordination against a point mass is a shift") {
    const Measure m = uniform(-1.0, 2.0);
    for (cplx z : {cplx(0.2, 0.5), cplx(-1.5, 1.0), cplx(3.0, 0.1)}) {
        SubordinationResult r = subord_add(m, dirac(0.7), z);
        CHECK(std::abs(r.common_value - recip_f_at(m, z - 0.7)) < 1e-10);
        CHECK(r.residual_system < 1e-10);
        CHECK(r.residual_match < 1e-10);
    }
}

TEST_CASE("equal summands share one subordination function") {
    const Measure m = semicircle(0.3, 1.5);
    const cplx z(0.4, 0.6);
    SubordinationResult r = subord_add(m, m, z);
    CHECK(std::abs(r.Z1 - r.Z2) < 1e-10);
    CHECK(std::abs(z - (2.0 * r.Z1 - recip_f(m, r.Z1))) < 1e-10);
}

TEST_CASE("Bernoulli pair against the quadratic") {
    // z = 2Z - (Z^2 - 1)/Z  =>  Z^2 - zZ + 1 = 0, root with Im Z >= Im z
    for (cplx z : {2.0 * I, cplx(0.5, 0.3), cplx(-1.2, 0.05)}) {
        SubordinationResult r = subord_add(bernoulli(), bernoulli(), z);
        const cplx d = sqrt_z2m4(z);
        const cplx Z = (z + d) / 2.0;
        CHECK(Z.imag() >= z.imag());
        CHECK(std::abs(r.Z1 - Z) < 1e-10);
        CHECK(r.residual_system < 1e-12);
        CHECK(r.residual_match < 1e-12);
    }
    CHECK(std::abs(subord_add(bernoulli(), bernoulli(), 2.0 * I).Z1 - I * (1.0 + std::sqrt(2.0))) < 1e-12);
}

TEST_CASE("arcsine law") {
    const auto grid = linear_grid(-1.9, 1.9, 381);
    DensityTable t = free_add(bernoulli(), bernoulli(), grid, default_eta_schedule());
    double err = 0.0;
    for (Eigen::Index i = 0; i < grid.size(); ++i) err = std::max(err, std::abs(t.density[i] - arcsine_density(grid[i])));
    CHECK(err < 1e-3);
    CHECK(t.atoms.empty());
}

TEST_CASE("Cauchy laws add their scales") {
    const auto grid = linear_grid(-6.0, 6.0, 121);
    DensityTable t = free_add(cauchy(1.0), cauchy(2.0), grid, default_eta_schedule());
    double err = 0.0;
    for (Eigen::Index i = 0; i < grid.size(); ++i)
        err = std::max(err, std::abs(t.density[i] - 3.0 / (pi * (9.0 + grid[i] * grid[i]))));
    CHECK(err < 1e-4);
}

TEST_CASE("adding a point mass translates") {
    const auto grid = linear_grid(-1.2, 2.2, 69);
    DensityTable t = free_add(semicircle(0.0, 2.0), dirac(0.5), grid, default_eta_schedule());
    double err = 0.0;
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        const double x = grid[i] - 0.5;
        err = std::max(err, std::abs(t.density[i] - std::sqrt(std::max(0.0, 4.0 - x * x)) / (2.0 * pi)));
    }
    CHECK(err < 1e-3);
}

TEST_CASE("several summands") {
    const cplx z(0.3, 0.7);
    MultiSubordinationResult zero = subord_add_multi({dirac(0.0), dirac(0.0), dirac(0.0)}, z);
    for (cplx Zj : zero.Z) CHECK(std::abs(Zj - z) < 1e-12);
    CHECK(std::abs(zero.common_value - z) < 1e-12);

    const Measure u = uniform(-1.0, 1.0), sc = semicircle(0.5, 1.0);
    MultiSubordinationResult two = subord_add_multi({u, sc}, z);
    SubordinationResult ref = subord_add(u, sc, z);
    CHECK(std::abs(two.common_value - ref.common_value) < 1e-10);

    // the arcsine law has F(z) = sqrt(z^2 - 4)
    const AnalyticFn f_arcsine = sqrt_z2m4;
    const AnalyticFn f_bern = [](cplx w) { return (w * w - 1.0) / w; };
    for (cplx p : {cplx(0.3, 0.7), cplx(-2.0, 0.4), cplx(0.0, 3.0)}) {
        MultiSubordinationResult three = subord_add_multi({bernoulli(), bernoulli(), bernoulli()}, p);
        SubordinationResult nested = subord_add_fn(f_arcsine, f_bern, p, p);
        CHECK(std::abs(three.common_value - nested.common_value) < 1e-9);
        CHECK(three.residual_system < 1e-10);
    }
}

TEST_CASE("subordination functions stay above z") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> ux(-3.0, 3.0), ly(-4.0, 0.5);
    const Measure pairs[][2] = {{bernoulli(), bernoulli()},
                                {semicircle(0.0, 2.0), atomic({{-1.0, 0.3}, {2.0, 0.7}})},
                                {uniform(0.0, 1.0), cauchy(0.5)}};
    for (const auto& p : pairs) {
        for (int k = 0; k < 100; ++k) {
            const cplx z(ux(rng), std::pow(10.0, ly(rng)));
            SubordinationResult r = subord_add(p[0], p[1], z);
            CHECK(r.Z1.imag() >= z.imag() * (1.0 - 1e-12));
            CHECK(r.Z2.imag() >= z.imag() * (1.0 - 1e-12));
            CHECK(r.residual_system < 1e-10);
            CHECK(r.residual_match < 1e-10);
        }
    }
}

TEST_CASE("phi is additive") {
    const Measure m1 = semicircle(0.0, 1.0), m2 = atomic({{-1.0, 0.3}, {2.0, 0.7}});
    const AnalyticFn f = free_add_f(m1, m2);
    for (cplx w : {cplx(0.0, 4.0), cplx(1.0, 5.0), cplx(-2.0, 6.0)}) {
        const ConeParams cone{1.0, 3.0};
        const cplx lhs = phi_of(f, w);
        CHECK(std::abs(lhs - phi(m1, w, cone) - phi(m2, w, cone)) < 1e-8);
    }
}

TEST_CASE("additive powers") {
    const auto grid = linear_grid(-2.5, 2.5, 101);
    const auto eta = default_eta_schedule();
    const Measure sc = semicircle(0.0, 2.0);
    DensityTable one = free_add_power(sc, 1.0, grid, eta);
    DensityTable ref = density_of(sc, grid);
    CHECK(sup_gap(one, ref) < 1e-6);

    const auto inner = linear_grid(-1.9, 1.9, 77);
    DensityTable two = free_add_power(bernoulli(), 2.0, inner, eta);
    DensityTable pair = free_add(bernoulli(), bernoulli(), inner, eta);
    CHECK(sup_gap(two, pair) < 1e-6);

    for (double t : {1.5, 3.0}) {
        const AnalyticFn ft = free_add_power_f(uniform(-1.0, 1.0), t);
        for (cplx w : {cplx(0.0, 5.0), cplx(1.0, 6.0)}) {
            const cplx lhs = phi_of(ft, w);
            CHECK(std::abs(lhs - t * phi(uniform(-1.0, 1.0), w, ConeParams{1.0, 2.0})) < 1e-9);
        }
    }

    bool threw = false;
    try {
        free_add_power(sc, 0.5, grid, eta);
    } catch (const Error& e) {
        threw = e.kind() == ErrorKind::TLessThanOne;
    }
    CHECK(threw);
}

TEST_CASE("boolean convolution") {
    const auto grid = linear_grid(-3.0, 3.0, 121);
    const auto eta = default_eta_schedule();
    DensityTable d = boolean_add(dirac(0.4), dirac(-1.5), grid, eta);
    REQUIRE(d.atoms.size() == 1);
    CHECK(d.atoms[0].x == doctest::Approx(-1.1).epsilon(1e-6));
    CHECK(d.atoms[0].w == doctest::Approx(1.0).epsilon(1e-6));

    const AnalyticFn f = boolean_add_f(uniform(-1.0, 2.0), dirac(0.0));
    for (cplx z : {cplx(0.3, 0.2), cplx(2.0, 1.0)}) CHECK(std::abs(f(z) - recip_f(uniform(-1.0, 2.0), z)) < 1e-12);

    // F(z) = z - 2/z
    DensityTable b = boolean_add(bernoulli(), bernoulli(), grid, eta);
    REQUIRE(b.atoms.size() == 2);
    CHECK(b.atoms[0].x == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-6));
    CHECK(b.atoms[1].x == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
    CHECK(b.atoms[0].w == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(b.atoms[1].w == doctest::Approx(0.5).epsilon(1e-5));
}
