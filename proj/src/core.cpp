#include "freeprob/core.hpp"

#include <cmath>

namespace freeprob {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::MassNotOne: return "MassNotOne";
        case ErrorKind::DomainViolation: return "DomainViolation";
        case ErrorKind::ZeroMeanOnCircle: return "ZeroMeanOnCircle";
        case ErrorKind::DomainMismatch: return "DomainMismatch";
        case ErrorKind::PointOnCut: return "PointOnCut";
        case ErrorKind::PsiPoleHit: return "PsiPoleHit";
        case ErrorKind::ConeTooLow: return "ConeTooLow";
        case ErrorKind::OutsideImage: return "OutsideImage";
        case ErrorKind::ExtrapolationUnstable: return "ExtrapolationUnstable";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::TLessThanOne: return "TLessThanOne";
        case ErrorKind::TBelowTwoWithoutCertificate: return "TBelowTwoWithoutCertificate";
        case ErrorKind::NoRoot: return "NoRoot";
        case ErrorKind::NoWitnessFound: return "NoWitnessFound";
        case ErrorKind::MassCondition: return "MassCondition";
        case ErrorKind::EigensolverFailure: return "EigensolverFailure";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

const Config& default_config() {
    static const Config cfg;
    return cfg;
}

HalfPlanePoint::HalfPlanePoint(cplx z) : z_(z) {
    if (!(z.imag() > 0.0) || !std::isfinite(z.real()) || !std::isfinite(z.imag()))
        fail(ErrorKind::DomainViolation, "point is not in the open upper half-plane");
}

DiskPoint::DiskPoint(cplx z) : z_(z) {
    if (!(std::abs(z) < 1.0))
        fail(ErrorKind::DomainViolation, "point is not in the open unit disk");
}

bool ConeParams::contains(cplx w) const {
    return w.imag() > beta && std::abs(w.real()) < alpha * w.imag();
}

}  // namespace freeprob
