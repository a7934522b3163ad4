#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "freeprob/conv_add.hpp"
#include "freeprob/rmt.hpp"

using namespace freeprob;

namespace {

double arcsine_cdf(double x) {
    if (x <= -2.0) return 0.0;
    if (x >= 2.0) return 1.0;
    return 0.5 + std::asin(x / 2.0) / pi;
}

// sup over both one-sided limits at every jump
double ks_against(const EmpiricalCdf& e, double (*cdf)(double)) {
    const double n = static_cast<double>(e.values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < e.values.size(); ++i) {
        const double f = cdf(e.values[i]);
        d = std::max({d, std::abs((i + 1) / n - f), std::abs(i / n - f)});
    }
    return d;
}

}  // namespace

TEST_CASE("Haar unitaries are unitary") {
    Eigen::MatrixXcd u = haar_unitary(64, 5);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(64, 64);
    CHECK((u.adjoint() * u - id).norm() < 1e-12);
    CHECK((haar_unitary(16, 9) - haar_unitary(16, 9)).norm() == 0.0);
    CHECK((haar_unitary(16, 9) - haar_unitary(16, 10)).norm() > 0.1);
}

TEST_CASE("degenerate ensembles") {
    EnsembleSpec s;
    s.m1 = dirac(0.75);
    s.m2 = dirac(0.75);
    s.n = 32;
    s.reps = 2;
    EmpiricalCdf e = sample_spectrum(s);
    CHECK(e.values.size() == 64);
    for (double v : e.values) CHECK(std::abs(v - 1.5) < 1e-12);

    EnsembleSpec p;
    p.mode = EnsembleMode::MultiplicativePositive;
    p.m1 = dirac(1.0, Domain::PositiveHalfLine);
    p.m2 = atomic({{1.0, 0.5}, {4.0, 0.5}}, Domain::PositiveHalfLine);
    p.n = 32;
    p.reps = 2;
    for (double v : sample_spectrum(p).values)
        CHECK(std::min(std::abs(v - 1.0), std::abs(v - 4.0)) < 1e-10);
}

TEST_CASE("seeded determinism") {
    EnsembleSpec s;
    s.m1 = bernoulli();
    s.m2 = uniform(-1.0, 1.0);
    s.n = 48;
    s.reps = 3;
    s.seed = 42;
    Config one = default_config(), many = default_config();
    one.threads = 1;
    many.threads = 3;
    CHECK(sample_spectrum(s, one).values == sample_spectrum(s, many).values);
    EnsembleSpec t = s;
    t.seed = 43;
    CHECK(sample_spectrum(s).values != sample_spectrum(t).values);
}

TEST_CASE("Kolmogorov-Smirnov distance") {
    EmpiricalCdf a{Domain::RealLine, {0.0, 0.0, 0.0}}, b{Domain::RealLine, {1.0, 1.0}};
    CHECK(ks_distance(a, b) == 1.0);
    CHECK(ks_distance(a, a) == 0.0);

    EmpiricalCdf c{Domain::RealLine, {-1.0, 0.2, 0.5, 2.0}}, d{Domain::RealLine, {-0.5, 0.3, 0.4}};
    const double cd = ks_distance(c, d);
    CHECK(cd == ks_distance(d, c));
    CHECK(cd >= 0.0);
    CHECK(cd <= 1.0);
    CHECK(c(0.2) == 0.5);
    CHECK(c.left_limit(0.2) == 0.25);

    const auto grid = linear_grid(-3.0, 3.0, 121);
    DensityTable t1 = density_of(semicircle(0.0, 2.0), grid);
    DensityTable t2 = density_of(semicircle(0.5, 2.0), grid);
    CHECK(ks_distance(t1, t1) == 0.0);
    CHECK(ks_distance(t1, t2) == doctest::Approx(ks_distance(t2, t1)));

    DensityTable atom = density_of(dirac(0.0), grid);
    EmpiricalCdf at_zero{Domain::RealLine, {0.0, 0.0}};
    EmpiricalCdf at_one{Domain::RealLine, {1.0, 1.0}};
    CHECK(ks_distance(at_zero, atom) < 1e-6);
    CHECK(ks_distance(at_one, atom) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("Bernoulli pair approaches the arcsine law") {
    EnsembleSpec s;
    s.m1 = bernoulli();
    s.m2 = bernoulli();
    s.n = 256;
    s.reps = 10;
    s.seed = 3;
    EmpiricalCdf e = sample_spectrum(s);
    const double direct = ks_against(e, arcsine_cdf);
    CHECK(direct < 0.05);
    DensityTable pred = free_add(bernoulli(), bernoulli(), linear_grid(-2.0, 2.0, 801), default_eta_schedule());
    CHECK(std::abs(ks_distance(e, pred) - direct) < 0.01);
}
