#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "freeprob/core.hpp"

namespace freeprob {

enum class Domain { RealLine, PositiveHalfLine, UnitCircle };

const char* to_string(Domain d);
Domain domain_from_string(const std::string& s);

// On the unit circle `x` is an angle in (-pi, pi].
struct Atom {
    double x = 0.0;
    double w = 0.0;
};

enum class Family { Semicircle, Arcsine, Cauchy, Uniform, MarchenkoPastur };

const char* to_string(Family f);

// Parameters by family:
//   Semicircle       p1 = center, p2 = radius
//   Arcsine          p1 = center, p2 = half-width
//   Cauchy           p1 = scale b, p2 = center
//   Uniform          p1 = lo,     p2 = hi   (angles on the circle)
//   MarchenkoPastur  p1 = ratio lambda, p2 = scale; normalized absolutely
//                    continuous part of the scaled free Poisson law
struct ContinuousPart {
    bool tabulated = false;
    Family family = Family::Semicircle;
    double p1 = 0.0;
    double p2 = 0.0;
    double weight = 0.0;  // total mass carried by this part
    // tabulated parts store absolute density values (already weighted)
    Eigen::VectorXd grid;
    Eigen::VectorXd density;
};

struct Measure {
    Domain domain = Domain::RealLine;
    std::vector<Atom> atoms;
    std::optional<ContinuousPart> continuous;
    cplx mean = 0.0;  // cached first moment on the circle

    double atom_mass() const;
    double total_mass() const;
    bool is_dirac() const;
    bool finite_support() const { return !continuous.has_value(); }
};

// Checks mass, domain and family constraints and returns the canonical form:
// atoms sorted, coincident atoms merged, angles wrapped into (-pi, pi].
// Shapes of Levy measures on the circle may have zero mean: pass
// require_circle_mean = false.
Measure validate(const Measure& m, const Config& cfg = default_config(), bool require_circle_mean = true);

Measure dirac(double a, Domain d = Domain::RealLine);
Measure atomic(std::vector<Atom> atoms, Domain d = Domain::RealLine);
Measure bernoulli(double a = 1.0);
Measure semicircle(double center, double radius);
Measure arcsine(double center, double halfwidth);
Measure cauchy(double scale, double center = 0.0);
Measure uniform(double lo, double hi, Domain d = Domain::RealLine);
// Free Poisson law with jump size one, including its atom at 0 when ratio < 1.
Measure marchenko_pastur(double ratio);
Measure tabulated(Domain d, const Eigen::VectorXd& grid, const Eigen::VectorXd& density,
                  std::vector<Atom> atoms = {});
ContinuousPart named_part(Family f, double p1, double p2, double weight);
Measure with_part(Domain d, std::vector<Atom> atoms, ContinuousPart part);

// x -> s*x for s > 0 on RealLine / PositiveHalfLine.
Measure dilate(const Measure& m, double s);
// x -> x + a on RealLine.
Measure translate(const Measure& m, double a);
// theta -> theta + a on UnitCircle.
Measure rotate(const Measure& m, double a);

double wrap_angle(double theta);

// Absolute density of the continuous part at x (0 if absent).
double continuous_density(const Measure& m, double x);
// Mass of the continuous part on (-inf, x] (angles start at -pi).
double continuous_cdf(const ContinuousPart& c, Domain d, double x);
// Closed interval containing the continuous support; infinite for Cauchy.
std::pair<double, double> continuous_support(const ContinuousPart& c, Domain d);
// Smallest interval containing the whole support.
std::pair<double, double> support_hull(const Measure& m);

double moment(const Measure& m, int k);
// Moments of the continuous part alone (absolute, weight included).
double continuous_moment(const ContinuousPart& c, int k);
cplx continuous_circle_moment(const ContinuousPart& c, int k);
cplx circle_moment(const Measure& m, int k);

std::vector<double> sample(const Measure& m, std::size_t n, std::uint64_t seed);

}  // namespace freeprob
