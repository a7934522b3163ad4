#include "freeprob/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "freeprob/parallel.hpp"
#include "freeprob/quadrature.hpp"
#include "freeprob/transforms.hpp"

namespace freeprob {

double DensityTable::continuous_mass() const { return trapezoid(grid, density); }

double DensityTable::density_at(double x) const {
    const Eigen::Index n = grid.size();
    if (n == 0 || x < grid[0] || x > grid[n - 1]) return 0.0;
    const Eigen::Index i =
        std::clamp<Eigen::Index>(std::upper_bound(grid.data(), grid.data() + n, x) - grid.data(), 1, n - 1) - 1;
    const double t = (x - grid[i]) / (grid[i + 1] - grid[i]);
    return (1.0 - t) * density[i] + t * density[i + 1];
}

double DensityTable::cdf(double x) const {
    double acc = 0.0;
    for (const Atom& a : atoms)
        if (a.x <= x) acc += a.w;
    for (Eigen::Index i = 0; i + 1 < grid.size(); ++i) {
        if (x <= grid[i]) break;
        const double h = grid[i + 1] - grid[i];
        if (x >= grid[i + 1]) {
            acc += 0.5 * (density[i] + density[i + 1]) * h;
        } else {
            const double tau = x - grid[i];
            acc += density[i] * tau + 0.5 * (density[i + 1] - density[i]) / h * tau * tau;
        }
    }
    return acc;
}

Extrapolation extrapolate_to_zero(const std::vector<double>& s, const std::vector<double>& v) {
    const std::size_t n = v.size();
    Extrapolation out;
    if (n == 0) return out;
    out.value = v.back();
    if (n == 1) {
        out.error = std::numeric_limits<double>::infinity();
        return out;
    }
    const int max_order = 3;
    std::vector<std::vector<double>> T(n);
    for (std::size_t k = 0; k < n; ++k) {
        T[k].push_back(v[k]);
        for (std::size_t j = 1; j <= std::min<std::size_t>(k, max_order); ++j)
            T[k].push_back(T[k][j - 1] + (T[k][j - 1] - T[k - 1][j - 1]) / (s[k - j] / s[k] - 1.0));
    }
    const std::size_t K = n - 1;
    out.error = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j <= std::min<std::size_t>(K - 1, max_order); ++j) {
        const double err = std::abs(T[K][j] - T[K - 1][j]);
        if (err < out.error) {
            out.error = err;
            out.value = T[K][j];
        }
    }
    if (n >= 3) {
        const double d1 = std::abs(v[K] - v[K - 1]), d0 = std::abs(v[K - 1] - v[K - 2]);
        out.diverging = d1 > 0.75 * d0;
    }
    return out;
}

std::vector<double> default_eta_schedule(const Config& cfg) {
    std::vector<double> s;
    for (int k = 0; k < cfg.eta_levels; ++k) s.push_back(std::ldexp(cfg.eta0, -k));
    return s;
}

std::vector<double> default_r_schedule(const Config& cfg) {
    std::vector<double> r;
    for (int k = 0; k < cfg.r_levels; ++k) r.push_back(1.0 - std::ldexp(0.5, -k));
    return r;
}

Eigen::VectorXd linear_grid(double lo, double hi, int n) {
    if (n < 2 || !(hi > lo)) fail(ErrorKind::InvalidArgument, "grid needs hi > lo and at least 2 points");
    Eigen::VectorXd g(n);
    for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
    return g;
}

std::vector<LadderStep> continuation_ladder(double top, const std::vector<double>& s) {
    std::vector<LadderStep> out;
    if (s.empty()) return out;
    for (double h = top; h > s.front() * (1.0 + 1e-12); h *= 0.5) out.push_back({h, false});
    for (double v : s) out.push_back({v, true});
    return out;
}

Eigen::VectorXd theta_grid(int n) { return linear_grid(-pi, pi, n + 1); }

namespace {

struct Geometry {
    bool circle = false;

    cplx point(double x, double s) const { return circle ? std::polar(1.0 - s, -x) : cplx(x, s); }
    double density(cplx v) const { return circle ? v.real() / (2.0 * pi) : -v.imag() / pi; }
    double atom_weight(cplx v, double s) const { return circle ? s * v.real() / (2.0 - s) : -s * v.imag(); }
    double candidate_weight(cplx v, double s) const { return circle ? s * std::abs(v) / (2.0 - s) : s * std::abs(v); }
    double locator(cplx v) const {
        const cplx u = 1.0 / v;
        return circle ? u.imag() : u.real();
    }
    cplx pole(const Atom& a, double x, double s) const {
        const cplx z = point(x, s);
        if (circle) {
            const cplx u = z * std::polar(1.0, a.x);
            return a.w * (1.0 + u) / (1.0 - u);
        }
        return a.w / (z - a.x);
    }
    double distance(double a, double b) const { return circle ? std::abs(wrap_angle(a - b)) : std::abs(a - b); }
};

// Root of the locator in [lo, hi] with f(lo) < 0 < f(hi) (Illinois variant).
double locate_root(const std::function<double(double)>& f, double lo, double hi, double flo, double fhi) {
    int side = 0;
    for (int it = 0; it < 100 && hi - lo > 1e-14 * (1.0 + std::abs(lo)); ++it) {
        double x = (lo * fhi - hi * flo) / (fhi - flo);
        if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
        const double fx = f(x);
        if (fx == 0.0) return x;
        if (fx < 0.0) {
            lo = x;
            flo = fx;
            if (side == -1) fhi *= 0.5;
            side = -1;
        } else {
            hi = x;
            fhi = fx;
            if (side == 1) flo *= 0.5;
            side = 1;
        }
    }
    return 0.5 * (lo + hi);
}

DensityTable invert_boundary(const Geometry& geo, const BoundaryRay& ray, const Eigen::VectorXd& grid,
                             const std::vector<double>& s, const Config& cfg, const std::vector<Atom>& known,
                             Domain domain) {
    const std::size_t n = grid.size();
    if (n < 2) fail(ErrorKind::InvalidArgument, "inversion grid needs at least 2 points");
    for (std::size_t i = 1; i < n; ++i)
        if (!(grid[i] > grid[i - 1])) fail(ErrorKind::InvalidArgument, "inversion grid must increase");
    if (s.size() < 2) fail(ErrorKind::InvalidArgument, "approach schedule needs at least 2 levels");
    for (std::size_t k = 0; k < s.size(); ++k)
        if (!(s[k] > 0.0) || (k > 0 && !(s[k] < s[k - 1])))
            fail(ErrorKind::InvalidArgument, "approach schedule must decrease towards the boundary");
    const std::size_t K = s.size() - 1;

    std::vector<std::vector<cplx>> V(n);
    parallel_for(n, cfg.threads, [&](std::size_t i) {
        V[i] = ray(grid[i], s);
        if (V[i].size() != s.size()) fail(ErrorKind::InvalidArgument, "boundary ray returned a short schedule");
    });

    // atom candidates: local maxima of the pole weight at the coarsest and finest level
    std::vector<std::size_t> cand;
    for (std::size_t level : {std::size_t(0), K}) {
        std::vector<double> w(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = geo.candidate_weight(V[i][level], s[level]);
        for (std::size_t i = 0; i < n; ++i) {
            const double left = i > 0 ? w[i - 1] : -1.0, right = i + 1 < n ? w[i + 1] : -1.0;
            if (w[i] > cfg.atom_threshold && w[i] >= left && w[i] > right) cand.push_back(i);
        }
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    std::vector<Atom> atoms = known;
    auto near_existing = [&](double x, double radius) {
        for (const Atom& a : atoms)
            if (geo.distance(a.x, x) <= radius) return true;
        return false;
    };
    auto prefix = [&](std::size_t level) { return std::vector<double>(s.begin(), s.begin() + level + 1); };

    for (std::size_t i : cand) {
        const std::size_t il = i > 0 ? i - 1 : i, ih = i + 1 < n ? i + 1 : i;
        const double spacing = grid[ih] - grid[il];
        if (near_existing(grid[i], spacing)) continue;

        auto root_at = [&](std::size_t level, double& out) {
            auto f = [&](double x) { return geo.locator(ray(x, prefix(level)).back()); };
            const double xs[3] = {grid[il], grid[i], grid[ih]};
            const std::size_t idx[3] = {il, i, ih};
            double fs[3];
            for (int j = 0; j < 3; ++j) fs[j] = geo.locator(V[idx[j]][level]);
            for (int j = 0; j < 3; ++j)
                if (fs[j] == 0.0) {
                    out = xs[j];
                    return true;
                }
            for (int j = 0; j < 2; ++j)
                if (fs[j] < 0.0 && fs[j + 1] > 0.0) {
                    out = locate_root(f, xs[j], xs[j + 1], fs[j], fs[j + 1]);
                    return true;
                }
            return false;
        };

        double a = 0.0;
        if (!root_at(K, a)) continue;
        // the root drifts quadratically in s; one Richardson step in s^2
        double prev;
        if (root_at(K - 1, prev)) {
            const double q = s[K] * s[K] / (s[K - 1] * s[K - 1] - s[K] * s[K]);
            const double ext = a + (a - prev) * q;
            if (std::abs(ext - a) < 0.5 * spacing) a = ext;
        }
        if (geo.circle) a = wrap_angle(a);

        const std::vector<cplx> va = ray(a, s);
        std::vector<double> mass(s.size());
        for (std::size_t k = 0; k < s.size(); ++k) mass[k] = geo.atom_weight(va[k], s[k]);
        const double mk = mass[K], mk1 = mass[K - 1];
        if (!(mk > cfg.atom_threshold)) continue;
        if (std::abs(mk - mk1) > cfg.atom_stability * std::abs(mk)) continue;
        const Extrapolation e = extrapolate_to_zero(s, mass);
        if (near_existing(a, 1e-9 * (1.0 + std::abs(a)))) continue;
        atoms.push_back({a, e.value});
    }
    std::sort(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) { return x.x < y.x; });

    DensityTable t;
    t.domain = domain;
    t.grid = grid;
    t.density.resize(n);
    t.atoms = atoms;
    std::vector<char> unstable(n, 0);
    parallel_for(n, cfg.threads, [&](std::size_t i) {
        std::vector<double> d(s.size());
        for (std::size_t k = 0; k < s.size(); ++k) {
            cplx v = V[i][k];
            for (const Atom& a : atoms) v -= geo.pole(a, grid[i], s[k]);
            d[k] = geo.density(v);
        }
        const Extrapolation e = extrapolate_to_zero(s, d);
        double value = e.value;
        if (e.diverging && e.error > cfg.density_tol * std::max(1.0, std::abs(e.value))) {
            unstable[i] = 1;
            value = d.back();
        }
        t.density[i] = std::max(0.0, value);
    });
    t.unstable_points = static_cast<int>(std::count(unstable.begin(), unstable.end(), 1));
    if (t.unstable_points > cfg.max_unstable_fraction * n)
        fail(ErrorKind::ExtrapolationUnstable,
             std::to_string(t.unstable_points) + " of " + std::to_string(n) + " grid points failed to extrapolate");
    double total = t.continuous_mass();
    for (const Atom& a : atoms) total += a.w;
    t.mass_deficit = 1.0 - total;
    return t;
}

}  // namespace

DensityTable stieltjes_invert(const BoundaryRay& g, const Eigen::VectorXd& grid, const std::vector<double>& eta,
                              const Config& cfg, const std::vector<Atom>& known_atoms) {
    Geometry geo;
    geo.circle = false;
    return invert_boundary(geo, g, grid, eta, cfg, known_atoms, Domain::RealLine);
}

DensityTable herglotz_invert(const BoundaryRay& h, const Eigen::VectorXd& theta, const std::vector<double>& r,
                             const Config& cfg, const std::vector<Atom>& known_atoms) {
    for (double v : r)
        if (!(v > 0.0 && v < 1.0)) fail(ErrorKind::InvalidArgument, "radii must lie in (0, 1)");
    if (theta.size() > 0 && (theta[0] < -pi - 1e-12 || theta[theta.size() - 1] > pi + 1e-12))
        fail(ErrorKind::InvalidArgument, "angle grid must lie in [-pi, pi]");
    std::vector<double> s(r.size());
    for (std::size_t k = 0; k < r.size(); ++k) s[k] = 1.0 - r[k];
    Geometry geo;
    geo.circle = true;
    return invert_boundary(geo, h, theta, s, cfg, known_atoms, Domain::UnitCircle);
}

DensityTable recover_from_psi_rplus(const AnalyticFn& psi_at, const Eigen::VectorXd& grid,
                                    const std::vector<double>& eta, const Config& cfg, const PsiRay& psi_ray) {
    for (Eigen::Index i = 0; i < grid.size(); ++i)
        if (grid[i] < 0.0) fail(ErrorKind::DomainViolation, "half-line density grid has negative points");
    // 1 + psi(-x) -> mass at 0; a density ~ t^{-1/2} at 0 adds a x^{-1/2} tail,
    // removed by one extrapolation step
    const double p1 = 1.0 + psi_at(cplx(-1e6, 0.0)).real();
    const double p4 = 1.0 + psi_at(cplx(-4e6, 0.0)).real();
    const double zero_mass = std::clamp(2.0 * p4 - p1, 0.0, p4);
    std::vector<Atom> known;
    if (zero_mass > cfg.zero_atom_threshold) known.push_back({0.0, zero_mass});
    PsiRay pr = psi_ray;
    if (!pr) {
        pr = [&psi_at](double x, const std::vector<double>& s) {
            std::vector<cplx> out;
            for (double e : s) out.push_back(psi_at(1.0 / cplx(x, -e)));
            return out;
        };
    }
    BoundaryRay g = [&pr](double x, const std::vector<double>& s) {
        std::vector<cplx> p = pr(x, s);
        std::vector<cplx> out(s.size());
        for (std::size_t k = 0; k < s.size(); ++k) {
            const cplx w(x, s[k]);
            out[k] = (std::conj(p[k]) + 1.0) / w;
        }
        return out;
    };
    DensityTable t = stieltjes_invert(g, grid, eta, cfg, known);
    t.domain = Domain::PositiveHalfLine;
    return t;
}

DensityTable density_of(const Measure& m, const Eigen::VectorXd& grid, const Config& cfg) {
    if (m.domain == Domain::UnitCircle) {
        BoundaryRay h = [&m](double x, const std::vector<double>& s) {
            std::vector<cplx> out;
            for (double e : s) out.push_back(h_transform(m, DiskPoint(std::polar(1.0 - e, -x))));
            return out;
        };
        return herglotz_invert(h, grid, default_r_schedule(cfg), cfg);
    }
    BoundaryRay g = [&m](double x, const std::vector<double>& s) {
        std::vector<cplx> out;
        for (double e : s) out.push_back(cauchy_g_at(m, cplx(x, e)));
        return out;
    };
    DensityTable t = stieltjes_invert(g, grid, default_eta_schedule(cfg), cfg);
    t.domain = m.domain;
    return t;
}

Measure measure_from_table(const DensityTable& t, bool renormalize) {
    Measure m;
    m.domain = t.domain;
    m.atoms = t.atoms;
    ContinuousPart c;
    c.tabulated = true;
    c.grid = t.grid;
    c.density = t.density;
    const double cont = trapezoid(c.grid, c.density);
    if (renormalize && cont > 0.0) c.density *= (1.0 - m.atom_mass()) / cont;
    if (cont > 0.0) m.continuous = c;
    return validate(m);
}

}  // namespace freeprob
