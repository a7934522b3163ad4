#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "freeprob/density.hpp"
#include "freeprob/measure.hpp"

namespace freeprob {

enum class EnsembleMode { AdditiveHermitian, MultiplicativePositive, MultiplicativeUnitary };

const char* to_string(EnsembleMode m);
EnsembleMode ensemble_mode_from_string(const std::string& s);

struct EnsembleSpec {
    EnsembleMode mode = EnsembleMode::AdditiveHermitian;
    Measure m1;
    Measure m2;
    int n = 512;
    int reps = 40;
    std::uint64_t seed = 1;
};

// Pooled eigenvalues, sorted; angles in [-pi, pi] on the circle.
struct EmpiricalCdf {
    Domain domain = Domain::RealLine;
    std::vector<double> values;

    double operator()(double x) const;  // fraction of values <= x
    double left_limit(double x) const;  // fraction of values < x
};

// Haar unitary from a complex Ginibre matrix: QR with the phases of diag(R)
// moved into Q.
Eigen::MatrixXcd haar_unitary(int n, std::uint64_t seed);

// A + U B U*, A^{1/2} U B U* A^{1/2} or A U B U* with A, B diagonal and
// entries drawn from m1, m2. Reps run on cfg.threads workers; the result
// depends only on the ensemble spec.
EmpiricalCdf sample_spectrum(const EnsembleSpec& spec, const Config& cfg = default_config());

// Eigenvalues within atom_tol of a predicted atom count as sitting on it.
double ks_distance(const EmpiricalCdf& emp, const DensityTable& predicted, double atom_tol = 1e-8);
double ks_distance(const EmpiricalCdf& a, const EmpiricalCdf& b);
double ks_distance(const DensityTable& a, const DensityTable& b);

}  // namespace freeprob
