#include "freeprob/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "freeprob/parallel.hpp"

namespace freeprob {

const char* to_string(EnsembleMode m) {
    switch (m) {
        case EnsembleMode::AdditiveHermitian: return "additive";
        case EnsembleMode::MultiplicativePositive: return "multiplicative-positive";
        case EnsembleMode::MultiplicativeUnitary: return "multiplicative-unitary";
    }
    return "?";
}

EnsembleMode ensemble_mode_from_string(const std::string& s) {
    if (s == "additive") return EnsembleMode::AdditiveHermitian;
    if (s == "multiplicative-positive" || s == "positive") return EnsembleMode::MultiplicativePositive;
    if (s == "multiplicative-unitary" || s == "unitary") return EnsembleMode::MultiplicativeUnitary;
    fail(ErrorKind::InvalidArgument, "unknown ensemble mode '" + s + "'");
}

double EmpiricalCdf::operator()(double x) const {
    if (values.empty()) return 0.0;
    return double(std::upper_bound(values.begin(), values.end(), x) - values.begin()) / values.size();
}

double EmpiricalCdf::left_limit(double x) const {
    if (values.empty()) return 0.0;
    return double(std::lower_bound(values.begin(), values.end(), x) - values.begin()) / values.size();
}

namespace {

std::mt19937_64 rep_rng(std::uint64_t seed, std::uint64_t rep) {
    std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(rep), std::uint32_t(rep >> 32)};
    return std::mt19937_64(seq);
}

// Box-Muller on 53-bit uniforms, so the stream is the same on every platform.
class Normal {
public:
    explicit Normal(std::uint64_t seed) : rng_(seed) {}
    double operator()() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = (double(rng_() >> 11) + 0.5) * 0x1.0p-53;
        const double u2 = double(rng_() >> 11) * 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * pi * u2);
        has_spare_ = true;
        return r * std::cos(2.0 * pi * u2);
    }

private:
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

void require(const Measure& m, Domain d, const char* what) {
    if (m.domain != d) fail(ErrorKind::DomainMismatch, what);
}

std::vector<double> one_rep(const EnsembleSpec& spec, std::uint64_t rep) {
    std::mt19937_64 rng = rep_rng(spec.seed, rep);
    const std::uint64_t seed_u = rng(), seed_a = rng(), seed_b = rng();
    const int n = spec.n;
    const std::vector<double> a = sample(spec.m1, n, seed_a), b = sample(spec.m2, n, seed_b);
    const Eigen::MatrixXcd U = haar_unitary(n, seed_u);
    std::vector<double> out(n);

    if (spec.mode == EnsembleMode::MultiplicativeUnitary) {
        Eigen::VectorXcd da(n), db(n);
        for (int i = 0; i < n; ++i) {
            da[i] = std::polar(1.0, a[i]);
            db[i] = std::polar(1.0, b[i]);
        }
        const Eigen::MatrixXcd M = da.asDiagonal() * (U * db.asDiagonal() * U.adjoint());
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
        if (es.info() != Eigen::Success) fail(ErrorKind::EigensolverFailure, "complex eigensolver failed");
        for (int i = 0; i < n; ++i) out[i] = std::arg(es.eigenvalues()[i]);
        return out;
    }

    Eigen::MatrixXcd M = U * Eigen::VectorXd::Map(b.data(), n).cast<cplx>().asDiagonal() * U.adjoint();
    if (spec.mode == EnsembleMode::AdditiveHermitian) {
        for (int i = 0; i < n; ++i) M(i, i) += a[i];
    } else {
        Eigen::VectorXd s(n);
        for (int i = 0; i < n; ++i) s[i] = std::sqrt(a[i]);
        M = s.cast<cplx>().asDiagonal() * M * s.cast<cplx>().asDiagonal();
    }
    // symmetrize away rounding so the Hermitian solver sees a Hermitian input
    M = 0.5 * (M + M.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) fail(ErrorKind::EigensolverFailure, "Hermitian eigensolver failed");
    for (int i = 0; i < n; ++i) out[i] = es.eigenvalues()[i];
    return out;
}

}  // namespace

Eigen::MatrixXcd haar_unitary(int n, std::uint64_t seed) {
    Normal normal(seed);
    Eigen::MatrixXcd Z(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double re = normal();
            Z(i, j) = cplx(re, normal());
        }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Z);
    Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
    const Eigen::MatrixXcd& R = qr.matrixQR();
    for (int j = 0; j < n; ++j) {
        const cplx d = R(j, j);
        const double r = std::abs(d);
        if (r > 0.0) Q.col(j) *= d / r;
    }
    return Q;
}

EmpiricalCdf sample_spectrum(const EnsembleSpec& spec, const Config& cfg) {
    if (spec.n < 2) fail(ErrorKind::InvalidArgument, "matrix size must be at least 2");
    if (spec.reps < 1) fail(ErrorKind::InvalidArgument, "need at least one repetition");
    switch (spec.mode) {
        case EnsembleMode::AdditiveHermitian:
            if (spec.m1.domain == Domain::UnitCircle || spec.m2.domain == Domain::UnitCircle)
                fail(ErrorKind::DomainMismatch, "additive ensembles need measures on the line");
            break;
        case EnsembleMode::MultiplicativePositive:
            require(spec.m1, Domain::PositiveHalfLine, "positive ensembles need measures on [0, inf)");
            require(spec.m2, Domain::PositiveHalfLine, "positive ensembles need measures on [0, inf)");
            break;
        case EnsembleMode::MultiplicativeUnitary:
            require(spec.m1, Domain::UnitCircle, "unitary ensembles need measures on the circle");
            require(spec.m2, Domain::UnitCircle, "unitary ensembles need measures on the circle");
            break;
    }
    std::vector<std::vector<double>> per_rep(spec.reps);
    parallel_for(spec.reps, cfg.threads, [&](std::size_t r) { per_rep[r] = one_rep(spec, r); });
    EmpiricalCdf out;
    out.domain = spec.mode == EnsembleMode::MultiplicativeUnitary ? Domain::UnitCircle
                 : spec.mode == EnsembleMode::MultiplicativePositive ? Domain::PositiveHalfLine
                                                                     : Domain::RealLine;
    for (const auto& v : per_rep) out.values.insert(out.values.end(), v.begin(), v.end());
    std::sort(out.values.begin(), out.values.end());
    return out;
}

namespace {

void same_kind(Domain a, Domain b) {
    if ((a == Domain::UnitCircle) != (b == Domain::UnitCircle))
        fail(ErrorKind::DomainMismatch, "cannot compare distributions on the circle and on the line");
}

double atoms_at(const DensityTable& t, double x) {
    double acc = 0.0;
    for (const Atom& a : t.atoms)
        if (a.x == x) acc += a.w;
    return acc;
}

}  // namespace

double ks_distance(const EmpiricalCdf& emp, const DensityTable& predicted, double atom_tol) {
    same_kind(emp.domain, predicted.domain);
    EmpiricalCdf e = emp;
    for (double& v : e.values)
        for (const Atom& a : predicted.atoms)
            if (std::abs(v - a.x) <= atom_tol * (1.0 + std::abs(a.x))) v = a.x;
    std::sort(e.values.begin(), e.values.end());
    std::vector<double> pts = e.values;
    for (const Atom& a : predicted.atoms) pts.push_back(a.x);
    double d = 0.0;
    for (double x : pts) {
        const double right = predicted.cdf(x);
        d = std::max(d, std::abs(e(x) - right));
        d = std::max(d, std::abs(e.left_limit(x) - (right - atoms_at(predicted, x))));
    }
    return std::min(d, 1.0);
}

double ks_distance(const EmpiricalCdf& a, const EmpiricalCdf& b) {
    same_kind(a.domain, b.domain);
    double d = 0.0;
    for (const auto* s : {&a, &b})
        for (double x : s->values) d = std::max(d, std::abs(a(x) - b(x)));
    return d;
}

double ks_distance(const DensityTable& a, const DensityTable& b) {
    same_kind(a.domain, b.domain);
    std::vector<double> pts(a.grid.data(), a.grid.data() + a.grid.size());
    pts.insert(pts.end(), b.grid.data(), b.grid.data() + b.grid.size());
    for (const Atom& at : a.atoms) pts.push_back(at.x);
    for (const Atom& at : b.atoms) pts.push_back(at.x);
    double d = 0.0;
    for (double x : pts) {
        const double fa = a.cdf(x), fb = b.cdf(x);
        d = std::max(d, std::abs(fa - fb));
        d = std::max(d, std::abs((fa - atoms_at(a, x)) - (fb - atoms_at(b, x))));
    }
    return std::min(d, 1.0);
}

}  // namespace freeprob
