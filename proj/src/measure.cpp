#include "freeprob/measure.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "freeprob/quadrature.hpp"

namespace freeprob {

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double mp_edge_lo(double lam) { return (1.0 - std::sqrt(lam)) * (1.0 - std::sqrt(lam)); }
double mp_edge_hi(double lam) { return (1.0 + std::sqrt(lam)) * (1.0 + std::sqrt(lam)); }

// Normalized Marchenko-Pastur continuous mass on [a, x] (unit scale), via the
// substitution x = m - r cos(theta) which removes the edge singularities.
double mp_cdf_unit(double lam, double x) {
    const double a = mp_edge_lo(lam), b = mp_edge_hi(lam);
    if (x <= a) return 0.0;
    if (x >= b) return 1.0;
    const double m = 0.5 * (a + b), r = 0.5 * (b - a);
    const double th = std::acos(std::clamp((m - x) / r, -1.0, 1.0));
    auto f = [&](double t) {
        const double st = std::sin(t);
        return r * r * st * st / (2.0 * pi * (m - r * std::cos(t)));
    };
    double acc = 0.0;
    const int panels = 8;
    for (int p = 0; p < panels; ++p)
        acc += integrate_gl<double>(f, th * p / panels, th * (p + 1) / panels, 20);
    return acc / std::min(lam, 1.0);
}

double circle_uniform_cdf(double lo, double hi, double x) {
    // arc [lo, hi] with lo in (-pi, pi], hi - lo <= 2 pi; mass measured from -pi
    const double width = hi - lo;
    double covered = std::clamp(x - lo, 0.0, width);
    if (hi > pi) covered += std::clamp(x + pi, 0.0, hi - pi);
    return covered / width;
}

void check_named(const ContinuousPart& c, Domain d) {
    auto bad = [](const char* what) { fail(ErrorKind::DomainViolation, what); };
    switch (c.family) {
        case Family::Semicircle:
            if (!(c.p2 > 0.0)) bad("semicircle radius must be positive");
            if (d == Domain::PositiveHalfLine && c.p1 - c.p2 < 0.0) bad("semicircle extends below 0");
            break;
        case Family::Arcsine:
            if (!(c.p2 > 0.0)) bad("arcsine half-width must be positive");
            if (d == Domain::PositiveHalfLine && c.p1 - c.p2 < 0.0) bad("arcsine extends below 0");
            break;
        case Family::Cauchy:
            if (!(c.p1 > 0.0)) bad("Cauchy scale must be positive");
            if (d == Domain::PositiveHalfLine) bad("Cauchy law is not supported on [0, inf)");
            break;
        case Family::Uniform:
            if (!(c.p2 > c.p1)) bad("uniform requires lo < hi");
            if (d == Domain::PositiveHalfLine && c.p1 < 0.0) bad("uniform extends below 0");
            if (d == Domain::UnitCircle && c.p2 - c.p1 > 2.0 * pi + 1e-12) bad("arc longer than the circle");
            break;
        case Family::MarchenkoPastur:
            if (!(c.p1 > 0.0) || !(c.p2 > 0.0)) bad("Marchenko-Pastur ratio and scale must be positive");
            break;
    }
    if (d == Domain::UnitCircle && c.family != Family::Uniform)
        bad("only uniform arcs and tabulated densities live on the circle");
}

}  // namespace

const char* to_string(Domain d) {
    switch (d) {
        case Domain::RealLine: return "real";
        case Domain::PositiveHalfLine: return "rplus";
        case Domain::UnitCircle: return "circle";
    }
    return "?";
}

Domain domain_from_string(const std::string& s) {
    if (s == "real") return Domain::RealLine;
    if (s == "rplus") return Domain::PositiveHalfLine;
    if (s == "circle") return Domain::UnitCircle;
    fail(ErrorKind::InvalidArgument, "unknown domain '" + s + "'");
}

const char* to_string(Family f) {
    switch (f) {
        case Family::Semicircle: return "semicircle";
        case Family::Arcsine: return "arcsine";
        case Family::Cauchy: return "cauchy";
        case Family::Uniform: return "uniform";
        case Family::MarchenkoPastur: return "marchenko_pastur";
    }
    return "?";
}

double wrap_angle(double theta) {
    double r = std::remainder(theta, 2.0 * pi);
    if (r <= -pi) r += 2.0 * pi;
    return r;
}

double Measure::atom_mass() const {
    double s = 0.0;
    for (const Atom& a : atoms) s += a.w;
    return s;
}

double Measure::total_mass() const { return atom_mass() + (continuous ? continuous->weight : 0.0); }

bool Measure::is_dirac() const { return !continuous && atoms.size() == 1; }

Measure validate(const Measure& in, const Config& cfg, bool require_circle_mean) {
    Measure m = in;
    for (Atom& a : m.atoms) {
        if (!std::isfinite(a.x) || !std::isfinite(a.w)) fail(ErrorKind::DomainViolation, "non-finite atom");
        if (!(a.w > 0.0)) fail(ErrorKind::DomainViolation, "atom mass must be positive");
        if (m.domain == Domain::PositiveHalfLine && a.x < 0.0)
            fail(ErrorKind::DomainViolation, "atom below 0 on the half-line");
        if (m.domain == Domain::UnitCircle) a.x = wrap_angle(a.x);
    }
    std::sort(m.atoms.begin(), m.atoms.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });
    std::vector<Atom> merged;
    for (const Atom& a : m.atoms) {
        if (!merged.empty() && std::abs(merged.back().x - a.x) <= 1e-14 * std::max(1.0, std::abs(a.x)))
            merged.back().w += a.w;
        else
            merged.push_back(a);
    }
    m.atoms = std::move(merged);

    if (m.continuous) {
        ContinuousPart& c = *m.continuous;
        if (c.tabulated) {
            if (c.grid.size() < 2 || c.grid.size() != c.density.size())
                fail(ErrorKind::DomainViolation, "tabulated density needs matching grid of size >= 2");
            for (Eigen::Index i = 0; i < c.grid.size(); ++i) {
                if (!std::isfinite(c.grid[i]) || !std::isfinite(c.density[i]) || c.density[i] < 0.0)
                    fail(ErrorKind::DomainViolation, "tabulated density must be finite and nonnegative");
                if (i > 0 && !(c.grid[i] > c.grid[i - 1]))
                    fail(ErrorKind::DomainViolation, "grid must be strictly increasing");
            }
            if (m.domain == Domain::PositiveHalfLine && c.grid[0] < 0.0)
                fail(ErrorKind::DomainViolation, "tabulated grid extends below 0");
            if (m.domain == Domain::UnitCircle &&
                (c.grid[0] < -pi - 1e-12 || c.grid[c.grid.size() - 1] > pi + 1e-12))
                fail(ErrorKind::DomainViolation, "angle grid must lie in [-pi, pi]");
            c.weight = trapezoid(c.grid, c.density);
            if (c.weight > 1.0 + cfg.mass_tol) fail(ErrorKind::MassNotOne, "tabulated mass exceeds 1");
        } else {
            check_named(c, m.domain);
            if (!(c.weight >= 0.0)) fail(ErrorKind::DomainViolation, "negative continuous weight");
            if (m.domain == Domain::UnitCircle) {
                const double width = c.p2 - c.p1;
                c.p1 = wrap_angle(c.p1);
                c.p2 = c.p1 + width;
            }
        }
        if (c.weight == 0.0) m.continuous.reset();
    }

    const double total = m.total_mass();
    if (std::abs(total - 1.0) > cfg.mass_tol)
        fail(ErrorKind::MassNotOne, "total mass is " + std::to_string(total));

    if (m.domain == Domain::PositiveHalfLine) {
        for (const Atom& a : m.atoms)
            if (a.x == 0.0 && a.w >= 1.0 - cfg.mass_tol)
                fail(ErrorKind::DomainViolation, "all mass at 0 on the half-line");
    }
    if (m.domain == Domain::UnitCircle) {
        m.mean = circle_moment(m, 1);
        if (require_circle_mean && std::abs(m.mean) < 1e-12) fail(ErrorKind::ZeroMeanOnCircle, "first moment vanishes");
    }
    return m;
}

ContinuousPart named_part(Family f, double p1, double p2, double weight) {
    ContinuousPart c;
    c.tabulated = false;
    c.family = f;
    c.p1 = p1;
    c.p2 = p2;
    c.weight = weight;
    return c;
}

Measure with_part(Domain d, std::vector<Atom> atoms, ContinuousPart part) {
    Measure m;
    m.domain = d;
    m.atoms = std::move(atoms);
    m.continuous = std::move(part);
    return validate(m);
}

Measure dirac(double a, Domain d) { return atomic({{a, 1.0}}, d); }

Measure atomic(std::vector<Atom> atoms, Domain d) {
    Measure m;
    m.domain = d;
    m.atoms = std::move(atoms);
    return validate(m);
}

Measure bernoulli(double a) { return atomic({{-a, 0.5}, {a, 0.5}}); }

Measure semicircle(double center, double radius) {
    return with_part(Domain::RealLine, {}, named_part(Family::Semicircle, center, radius, 1.0));
}

Measure arcsine(double center, double halfwidth) {
    return with_part(Domain::RealLine, {}, named_part(Family::Arcsine, center, halfwidth, 1.0));
}

Measure cauchy(double scale, double center) {
    return with_part(Domain::RealLine, {}, named_part(Family::Cauchy, scale, center, 1.0));
}

Measure uniform(double lo, double hi, Domain d) {
    return with_part(d, {}, named_part(Family::Uniform, lo, hi, 1.0));
}

Measure marchenko_pastur(double ratio) {
    std::vector<Atom> atoms;
    if (ratio < 1.0) atoms.push_back({0.0, 1.0 - ratio});
    return with_part(Domain::PositiveHalfLine, std::move(atoms),
                     named_part(Family::MarchenkoPastur, ratio, 1.0, std::min(ratio, 1.0)));
}

Measure tabulated(Domain d, const Eigen::VectorXd& grid, const Eigen::VectorXd& density,
                  std::vector<Atom> atoms) {
    ContinuousPart c;
    c.tabulated = true;
    c.grid = grid;
    c.density = density;
    return with_part(d, std::move(atoms), std::move(c));
}

Measure dilate(const Measure& m, double s) {
    if (m.domain == Domain::UnitCircle) fail(ErrorKind::DomainMismatch, "dilation of a circle measure");
    if (!(s > 0.0)) fail(ErrorKind::InvalidArgument, "dilation factor must be positive");
    Measure r = m;
    for (Atom& a : r.atoms) a.x *= s;
    if (r.continuous) {
        ContinuousPart& c = *r.continuous;
        if (c.tabulated) {
            c.grid *= s;
            c.density /= s;
        } else {
            switch (c.family) {
                case Family::Semicircle:
                case Family::Arcsine:
                    c.p1 *= s;
                    c.p2 *= s;
                    break;
                case Family::Cauchy:
                    c.p1 *= s;
                    c.p2 *= s;
                    break;
                case Family::Uniform:
                    c.p1 *= s;
                    c.p2 *= s;
                    break;
                case Family::MarchenkoPastur: c.p2 *= s; break;
            }
        }
    }
    return validate(r);
}

Measure translate(const Measure& m, double a) {
    if (m.domain != Domain::RealLine) fail(ErrorKind::DomainMismatch, "translation needs a real-line measure");
    Measure r = m;
    for (Atom& at : r.atoms) at.x += a;
    if (r.continuous) {
        ContinuousPart& c = *r.continuous;
        if (c.tabulated) {
            c.grid.array() += a;
        } else {
            switch (c.family) {
                case Family::Semicircle:
                case Family::Arcsine: c.p1 += a; break;
                case Family::Cauchy: c.p2 += a; break;
                case Family::Uniform:
                    c.p1 += a;
                    c.p2 += a;
                    break;
                case Family::MarchenkoPastur:
                    fail(ErrorKind::InvalidArgument, "Marchenko-Pastur part cannot be translated");
            }
        }
    }
    return validate(r);
}

Measure rotate(const Measure& m, double a) {
    if (m.domain != Domain::UnitCircle) fail(ErrorKind::DomainMismatch, "rotation needs a circle measure");
    Measure r = m;
    for (Atom& at : r.atoms) at.x = wrap_angle(at.x + a);
    if (r.continuous) {
        ContinuousPart& c = *r.continuous;
        if (!c.tabulated) {
            c.p1 += a;
            c.p2 += a;
        } else {
            // resample the periodic table on the rotated nodes plus the seam
            std::vector<double> nodes{-pi, pi};
            for (Eigen::Index i = 0; i < c.grid.size(); ++i) nodes.push_back(wrap_angle(c.grid[i] + a));
            std::sort(nodes.begin(), nodes.end());
            nodes.erase(std::unique(nodes.begin(), nodes.end(),
                                    [](double x, double y) { return std::abs(x - y) < 1e-13; }),
                        nodes.end());
            Eigen::VectorXd g(nodes.size()), d(nodes.size());
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                g[i] = nodes[i];
                // nudge the seam nodes inward so each side reads its own branch
                double nudge = 0.0;
                if (i == 0) nudge = 1e-12;
                if (i + 1 == nodes.size()) nudge = -1e-12;
                const double v = continuous_density(m, wrap_angle(nodes[i] - a + nudge));
                d[i] = v;
            }
            c.grid = g;
            c.density = d;
        }
    }
    return validate(r);
}

double continuous_density(const Measure& m, double x) {
    if (!m.continuous) return 0.0;
    const ContinuousPart& c = *m.continuous;
    if (c.tabulated) {
        const Eigen::VectorXd& g = c.grid;
        const Eigen::Index n = g.size();
        if (x < g[0] || x > g[n - 1]) return 0.0;
        auto it = std::upper_bound(g.data(), g.data() + n, x);
        Eigen::Index i = std::max<Eigen::Index>(1, it - g.data()) - 1;
        if (i >= n - 1) return c.density[n - 1];
        const double t = (x - g[i]) / (g[i + 1] - g[i]);
        return (1.0 - t) * c.density[i] + t * c.density[i + 1];
    }
    const double w = c.weight;
    switch (c.family) {
        case Family::Semicircle: {
            const double u = x - c.p1, R = c.p2;
            return std::abs(u) < R ? w * 2.0 * std::sqrt(R * R - u * u) / (pi * R * R) : 0.0;
        }
        case Family::Arcsine: {
            const double u = x - c.p1, h = c.p2;
            return std::abs(u) < h ? w / (pi * std::sqrt(h * h - u * u)) : 0.0;
        }
        case Family::Cauchy: {
            const double u = x - c.p2, b = c.p1;
            return w * b / (pi * (u * u + b * b));
        }
        case Family::Uniform: {
            if (m.domain == Domain::UnitCircle) {
                double off = x - c.p1;
                off -= 2.0 * pi * std::floor(off / (2.0 * pi));
                return off <= c.p2 - c.p1 ? w / (c.p2 - c.p1) : 0.0;
            }
            return (x >= c.p1 && x <= c.p2) ? w / (c.p2 - c.p1) : 0.0;
        }
        case Family::MarchenkoPastur: {
            const double s = c.p2, lam = c.p1;
            const double y = x / s, a = mp_edge_lo(lam), b = mp_edge_hi(lam);
            if (y <= a || y >= b || y <= 0.0) return 0.0;
            return w * std::sqrt((b - y) * (y - a)) / (2.0 * pi * y * std::min(lam, 1.0)) / s;
        }
    }
    return 0.0;
}

double continuous_cdf(const ContinuousPart& c, Domain d, double x) {
    if (c.tabulated) {
        const Eigen::VectorXd& g = c.grid;
        double acc = 0.0;
        for (Eigen::Index i = 0; i + 1 < g.size(); ++i) {
            if (x <= g[i]) break;
            const double h = g[i + 1] - g[i];
            if (x >= g[i + 1]) {
                acc += 0.5 * (c.density[i] + c.density[i + 1]) * h;
            } else {
                const double tau = x - g[i];
                const double s = (c.density[i + 1] - c.density[i]) / h;
                acc += c.density[i] * tau + 0.5 * s * tau * tau;
            }
        }
        return acc;
    }
    const double w = c.weight;
    switch (c.family) {
        case Family::Semicircle: {
            const double u = std::clamp((x - c.p1) / c.p2, -1.0, 1.0);
            return w * (0.5 + (u * std::sqrt(1.0 - u * u) + std::asin(u)) / pi);
        }
        case Family::Arcsine: {
            const double u = std::clamp((x - c.p1) / c.p2, -1.0, 1.0);
            return w * (0.5 + std::asin(u) / pi);
        }
        case Family::Cauchy: return w * (0.5 + std::atan((x - c.p2) / c.p1) / pi);
        case Family::Uniform:
            if (d == Domain::UnitCircle) return w * circle_uniform_cdf(c.p1, c.p2, x);
            return w * std::clamp((x - c.p1) / (c.p2 - c.p1), 0.0, 1.0);
        case Family::MarchenkoPastur: return w * mp_cdf_unit(c.p1, x / c.p2);
    }
    return 0.0;
}

std::pair<double, double> continuous_support(const ContinuousPart& c, Domain d) {
    if (c.tabulated) {
        Eigen::Index lo = 0, hi = c.grid.size() - 1;
        while (lo < hi && c.density[lo] == 0.0 && c.density[lo + 1] == 0.0) ++lo;
        while (hi > lo && c.density[hi] == 0.0 && c.density[hi - 1] == 0.0) --hi;
        return {c.grid[lo], c.grid[hi]};
    }
    const double inf = std::numeric_limits<double>::infinity();
    switch (c.family) {
        case Family::Semicircle:
        case Family::Arcsine: return {c.p1 - c.p2, c.p1 + c.p2};
        case Family::Cauchy: return {-inf, inf};
        case Family::Uniform:
            if (d == Domain::UnitCircle && c.p2 > pi) return {-pi, pi};
            return {c.p1, c.p2};
        case Family::MarchenkoPastur:
            return {c.p2 * mp_edge_lo(c.p1), c.p2 * mp_edge_hi(c.p1)};
    }
    return {0.0, 0.0};
}

std::pair<double, double> support_hull(const Measure& m) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const Atom& a : m.atoms) {
        lo = std::min(lo, a.x);
        hi = std::max(hi, a.x);
    }
    if (m.continuous) {
        auto [a, b] = continuous_support(*m.continuous, m.domain);
        lo = std::min(lo, a);
        hi = std::max(hi, b);
    }
    return {lo, hi};
}

double continuous_moment(const ContinuousPart& c, int k) {
    if (k == 0) return c.weight;
    if (c.tabulated) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i + 1 < c.grid.size(); ++i) {
            const double t0 = c.grid[i], t1 = c.grid[i + 1], r0 = c.density[i], r1 = c.density[i + 1];
            acc += integrate_gl<double>(
                [&](double t) { return (r0 + (r1 - r0) * (t - t0) / (t1 - t0)) * std::pow(t, k); }, t0, t1, 10);
        }
        return acc;
    }
    double mk = 0.0;
    switch (c.family) {
        case Family::Semicircle:
        case Family::Arcsine: {
            const double ctr = c.p1, half = 0.5 * c.p2;
            for (int j = 0; 2 * j <= k; ++j) {
                const double central = c.family == Family::Semicircle
                                           ? binom(2 * j, j) / (j + 1) * std::pow(half, 2 * j)
                                           : binom(2 * j, j) * std::pow(half, 2 * j);
                mk += binom(k, 2 * j) * std::pow(ctr, k - 2 * j) * central;
            }
            break;
        }
        case Family::Cauchy:
            fail(ErrorKind::InvalidArgument, "Cauchy law has no moments of order >= 1");
        case Family::Uniform:
            mk = (std::pow(c.p2, k + 1) - std::pow(c.p1, k + 1)) / ((k + 1) * (c.p2 - c.p1));
            break;
        case Family::MarchenkoPastur: {
            const double lam = c.p1;
            for (int j = 1; j <= k; ++j) mk += binom(k, j) * binom(k, j - 1) / k * std::pow(lam, j);
            mk *= std::pow(c.p2, k) / std::min(lam, 1.0);
            break;
        }
    }
    return c.weight * mk;
}

double moment(const Measure& m, int k) {
    if (m.domain == Domain::UnitCircle) fail(ErrorKind::DomainMismatch, "use circle_moment on the circle");
    if (k < 0) fail(ErrorKind::InvalidArgument, "negative moment order");
    double acc = 0.0;
    for (const Atom& a : m.atoms) acc += a.w * std::pow(a.x, k);
    if (m.continuous) acc += continuous_moment(*m.continuous, k);
    return acc;
}

cplx continuous_circle_moment(const ContinuousPart& c, int k) {
    if (k == 0) return c.weight;
    const cplx I(0.0, 1.0);
    if (c.tabulated) {
        // exact for piecewise-linear densities
        cplx acc = 0.0;
        for (Eigen::Index i = 0; i + 1 < c.grid.size(); ++i) {
            const double t0 = c.grid[i], t1 = c.grid[i + 1], r0 = c.density[i], r1 = c.density[i + 1];
            const double s = (r1 - r0) / (t1 - t0);
            auto prim = [&](double t) {
                const cplx e = std::polar(1.0, k * t);
                return r0 * e / (I * double(k)) + s * ((t - t0) * e / (I * double(k)) + e / double(k * k));
            };
            acc += prim(t1) - prim(t0);
        }
        return acc;
    }
    // uniform arc
    return c.weight * (std::polar(1.0, k * c.p2) - std::polar(1.0, k * c.p1)) / (I * double(k) * (c.p2 - c.p1));
}

cplx circle_moment(const Measure& m, int k) {
    if (m.domain != Domain::UnitCircle) fail(ErrorKind::DomainMismatch, "circle_moment needs a circle measure");
    cplx acc = 0.0;
    for (const Atom& a : m.atoms) acc += a.w * std::polar(1.0, k * a.x);
    if (m.continuous) acc += continuous_circle_moment(*m.continuous, k);
    return acc;
}

namespace {

class ContinuousSampler {
public:
    ContinuousSampler(const ContinuousPart& c, Domain d) : c_(c), d_(d) {
        if (c.tabulated) {
            cum_.resize(c.grid.size());
            cum_[0] = 0.0;
            for (Eigen::Index i = 0; i + 1 < c.grid.size(); ++i)
                cum_[i + 1] = cum_[i] + 0.5 * (c.density[i] + c.density[i + 1]) * (c.grid[i + 1] - c.grid[i]);
        } else if (c.family == Family::MarchenkoPastur) {
            const double lam = c.p1, a = mp_edge_lo(lam), b = mp_edge_hi(lam);
            mid_ = 0.5 * (a + b);
            rad_ = 0.5 * (b - a);
            const int n = 4096;
            theta_.resize(n + 1);
            cum_.resize(n + 1);
            cum_[0] = 0.0;
            auto f = [&](double t) {
                const double st = std::sin(t);
                return rad_ * rad_ * st * st / (2.0 * pi * (mid_ - rad_ * std::cos(t)));
            };
            for (int i = 0; i <= n; ++i) theta_[i] = pi * i / n;
            for (int i = 0; i < n; ++i) cum_[i + 1] = cum_[i] + integrate_gl<double>(f, theta_[i], theta_[i + 1], 8);
            for (double& v : cum_) v /= cum_[n];
        }
    }

    // p in (0, 1): quantile of the normalized continuous part
    double quantile(double p) const {
        if (c_.tabulated) {
            const double target = p * cum_.back();
            std::size_t i = std::upper_bound(cum_.begin(), cum_.end(), target) - cum_.begin();
            i = std::clamp<std::size_t>(i, 1, cum_.size() - 1) - 1;
            const double r0 = c_.density[i], h = c_.grid[i + 1] - c_.grid[i];
            const double s = (c_.density[i + 1] - r0) / h;
            const double rem = target - cum_[i];
            const double disc = std::max(0.0, r0 * r0 + 2.0 * s * rem);
            const double denom = r0 + std::sqrt(disc);
            double tau = denom > 0.0 ? 2.0 * rem / denom : 0.0;
            return c_.grid[i] + std::clamp(tau, 0.0, h);
        }
        switch (c_.family) {
            case Family::Semicircle: {
                // (theta - sin theta cos theta)/pi = p, x = c - R cos theta
                double lo = 0.0, hi = pi, th = pi * p;
                for (int it = 0; it < 100; ++it) {
                    const double f = (th - std::sin(th) * std::cos(th)) / pi - p;
                    if (f > 0) hi = th;
                    else lo = th;
                    const double df = 2.0 * std::sin(th) * std::sin(th) / pi;
                    double next = df > 0 ? th - f / df : 0.5 * (lo + hi);
                    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
                    if (std::abs(next - th) < 1e-15) {
                        th = next;
                        break;
                    }
                    th = next;
                }
                return c_.p1 - c_.p2 * std::cos(th);
            }
            case Family::Arcsine: return c_.p1 + c_.p2 * std::sin(pi * (p - 0.5));
            case Family::Cauchy: return c_.p2 + c_.p1 * std::tan(pi * (p - 0.5));
            case Family::Uniform: {
                const double x = c_.p1 + p * (c_.p2 - c_.p1);
                return d_ == Domain::UnitCircle ? wrap_angle(x) : x;
            }
            case Family::MarchenkoPastur: {
                std::size_t i = std::upper_bound(cum_.begin(), cum_.end(), p) - cum_.begin();
                i = std::clamp<std::size_t>(i, 1, cum_.size() - 1) - 1;
                const double t = (p - cum_[i]) / (cum_[i + 1] - cum_[i]);
                const double th = theta_[i] + t * (theta_[i + 1] - theta_[i]);
                return c_.p2 * (mid_ - rad_ * std::cos(th));
            }
        }
        return 0.0;
    }

private:
    const ContinuousPart& c_;
    Domain d_;
    std::vector<double> cum_, theta_;
    double mid_ = 0.0, rad_ = 0.0;
};

}  // namespace

std::vector<double> sample(const Measure& m, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto uniform01 = [&rng] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };
    std::vector<double> cum;
    double acc = 0.0;
    for (const Atom& a : m.atoms) cum.push_back(acc += a.w);
    std::optional<ContinuousSampler> cs;
    if (m.continuous) cs.emplace(*m.continuous, m.domain);
    const double total = m.total_mass();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = uniform01() * total;
        std::size_t k = std::upper_bound(cum.begin(), cum.end(), u) - cum.begin();
        if (k < m.atoms.size() || !cs) {
            out[i] = m.atoms[std::min(k, m.atoms.size() - 1)].x;
        } else {
            out[i] = cs->quantile(uniform01());
        }
    }
    return out;
}

}  // namespace freeprob
