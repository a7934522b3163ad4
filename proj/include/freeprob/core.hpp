#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace freeprob {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

enum class ErrorKind {
    MassNotOne,
    DomainViolation,
    ZeroMeanOnCircle,
    DomainMismatch,
    PointOnCut,
    PsiPoleHit,
    ConeTooLow,
    OutsideImage,
    ExtrapolationUnstable,
    NoConvergence,
    TLessThanOne,
    TBelowTwoWithoutCertificate,
    NoRoot,
    NoWitnessFound,
    MassCondition,
    EigensolverFailure,
    InvalidArgument,
    Io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

// Every numeric knob used by the solvers and inversion routines.
struct Config {
    double mass_tol = 1e-9;

    // fixed-point / Newton solvers
    double step_tol = 1e-13;
    double residual_tol = 1e-12;
    int max_iter = 500;
    int newton_after = 200;
    double continuation_height = 1.0;

    // boundary inversion
    double eta0 = 0.1;
    int eta_levels = 7;
    int r_levels = 11;
    double atom_threshold = 0.05;
    double atom_stability = 0.02;
    double density_tol = 1e-3;
    // fraction of grid points allowed to fall back to the raw finest estimate
    double max_unstable_fraction = 0.25;
    // half-line outputs report an atom at 0 only above this mass
    double zero_atom_threshold = 1e-4;

    // cone for Voiculescu transforms
    double cone_alpha = 1.0;

    int threads = 0;
};

const Config& default_config();

// z with Im z > 0.
class HalfPlanePoint {
public:
    HalfPlanePoint(cplx z);
    HalfPlanePoint(double x, double y) : HalfPlanePoint(cplx(x, y)) {}
    cplx value() const { return z_; }
    operator cplx() const { return z_; }

private:
    cplx z_;
};

// z with |z| < 1.
class DiskPoint {
public:
    DiskPoint(cplx z);
    DiskPoint(double x, double y) : DiskPoint(cplx(x, y)) {}
    cplx value() const { return z_; }
    operator cplx() const { return z_; }

private:
    cplx z_;
};

struct ConeParams {
    double alpha = 1.0;
    double beta = 1.0;

    bool contains(cplx w) const;
};

}  // namespace freeprob
