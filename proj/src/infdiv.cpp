#include "freeprob/infdiv.hpp"

#include <algorithm>
#include <cmath>

#include "freeprob/quadrature.hpp"
#include "freeprob/transforms.hpp"

namespace freeprob {

bool Window::contains(double x) const {
    const bool above = lo_closed ? x >= lo : x > lo;
    const bool below = hi_closed ? x <= hi : x < hi;
    return above && below;
}

namespace {

Window intersect(const Window& a, const Window& b) {
    Window w;
    if (a.lo > b.lo || (a.lo == b.lo && !a.lo_closed)) {
        w.lo = a.lo;
        w.lo_closed = a.lo_closed;
    } else {
        w.lo = b.lo;
        w.lo_closed = b.lo_closed;
    }
    if (a.hi < b.hi || (a.hi == b.hi && !a.hi_closed)) {
        w.hi = a.hi;
        w.hi_closed = a.hi_closed;
    } else {
        w.hi = b.hi;
        w.hi_closed = b.hi_closed;
    }
    return w;
}

// Part of the continuous support inside the window, or nothing.
bool continuous_range(const Measure& shape, const Window& w, double& lo, double& hi) {
    if (!shape.continuous) return false;
    const auto [s0, s1] = continuous_support(*shape.continuous, shape.domain);
    lo = std::max(s0, w.lo);
    hi = std::min(s1, w.hi);
    if (!(hi > lo)) return false;
    if (std::isinf(lo) || std::isinf(hi))
        fail(ErrorKind::InvalidArgument, "windowed Levy pieces need a bounded window or compact support");
    return true;
}

// ∫_window g(u) rho(u) du for the continuous part of the shape.
template <class T, class G>
T window_quadrature(const Measure& shape, double lo, double hi, cplx z, G g) {
    auto f = [&](double u) -> cplx { return g(u) * continuous_density(shape, u); };
    if constexpr (std::is_same_v<T, double>) {
        double acc = 0.0;
        const int panels = 16;
        for (int k = 0; k < panels; ++k) {
            const double a = lo + (hi - lo) * k / panels, b = lo + (hi - lo) * (k + 1) / panels;
            acc += integrate_gl<double>([&](double u) { return f(u).real(); }, a, b, 20);
        }
        return acc;
    } else {
        const double d0 = std::max(std::abs(z.imag()), 1e-14);
        return integrate_graded(f, lo, hi, z.real(), d0, 0.5, 20);
    }
}

void require_line(const LevyMeasure& nu) {
    if (nu.domain == Domain::UnitCircle) fail(ErrorKind::DomainMismatch, "expected a Levy measure on the line");
}

}  // namespace

double LevyMeasure::total_mass() const {
    Window all;
    return mass_in(all);
}

double LevyMeasure::mass_in(const Window& w) const {
    double acc = 0.0;
    for (const Piece& p : pieces) {
        const Window win = intersect(p.window, w);
        double m = 0.0;
        for (const Atom& a : p.shape.atoms)
            if (win.contains(a.x)) m += a.w;
        if (p.shape.continuous) {
            const ContinuousPart& c = *p.shape.continuous;
            const double hi = std::isinf(win.hi) ? c.weight : continuous_cdf(c, p.shape.domain, win.hi);
            const double lo = std::isinf(win.lo) ? 0.0 : continuous_cdf(c, p.shape.domain, win.lo);
            m += std::max(0.0, hi - lo);
        }
        acc += p.weight * m;
    }
    return acc;
}

LevyMeasure levy_zero(Domain d) {
    LevyMeasure nu;
    nu.domain = d;
    return nu;
}

LevyMeasure levy_from(const Measure& shape, double weight) {
    if (!(weight >= 0.0)) fail(ErrorKind::DomainViolation, "Levy measure weight must be nonnegative");
    LevyMeasure nu;
    nu.domain = shape.domain;
    if (weight > 0.0) nu.pieces.push_back({weight, shape, Window{}});
    return nu;
}

LevyMeasure levy_sum(const LevyMeasure& a, const LevyMeasure& b) {
    if (!a.empty() && !b.empty() && a.domain != b.domain)
        fail(ErrorKind::DomainMismatch, "Levy measures live on different domains");
    LevyMeasure out = a.empty() ? b : a;
    if (!a.empty()) out.pieces.insert(out.pieces.end(), b.pieces.begin(), b.pieces.end());
    return out;
}

cplx levy_window_integral(const LevyMeasure& nu, const Window& w, cplx z) {
    require_line(nu);
    cplx acc = 0.0;
    for (const LevyMeasure::Piece& p : nu.pieces) {
        const Window win = intersect(p.window, w);
        cplx part = 0.0;
        for (const Atom& a : p.shape.atoms)
            if (win.contains(a.x)) part += a.w * (1.0 + a.x * a.x) / (z - a.x);
        double lo, hi;
        if (continuous_range(p.shape, win, lo, hi))
            part += window_quadrature<cplx>(p.shape, lo, hi, z, [z](double u) { return (1.0 + u * u) / (z - u); });
        acc += p.weight * part;
    }
    return acc;
}

double levy_window_first_moment(const LevyMeasure& nu, const Window& w) {
    require_line(nu);
    double acc = 0.0;
    for (const LevyMeasure::Piece& p : nu.pieces) {
        const Window win = intersect(p.window, w);
        double part = 0.0;
        for (const Atom& a : p.shape.atoms)
            if (win.contains(a.x)) part += a.w * a.x;
        double lo, hi;
        if (continuous_range(p.shape, win, lo, hi))
            part += window_quadrature<double>(p.shape, lo, hi, 0.0, [](double u) { return cplx(u); });
        acc += p.weight * part;
    }
    return acc;
}

cplx levy_kernel_integral(const LevyMeasure& nu, cplx z) {
    require_line(nu);
    cplx acc = 0.0;
    for (const LevyMeasure::Piece& p : nu.pieces) {
        if (!p.window.full()) {
            // (1 + uz)/(z - u) = (1 + u^2)/(z - u) + u, same nodes as the split
            LevyMeasure one;
            one.domain = nu.domain;
            one.pieces.push_back({p.weight, p.shape, Window{}});
            acc += levy_window_integral(one, p.window, z) + levy_window_first_moment(one, p.window);
            continue;
        }
        cplx part = 0.0, g_atoms = 0.0;
        for (const Atom& a : p.shape.atoms) {
            part += a.w * (1.0 + a.x * z) / (z - a.x);
            g_atoms += a.w / (z - a.x);
        }
        if (p.shape.continuous) {
            const cplx gc = cauchy_g_at(p.shape, z) - g_atoms;
            part += (1.0 + z * z) * gc - z * p.shape.continuous->weight;
        }
        acc += p.weight * part;
    }
    return acc;
}

TripletAdd triplet_sum(const TripletAdd& t1, const TripletAdd& t2) {
    return {t1.alpha + t2.alpha, levy_sum(t1.nu, t2.nu)};
}

cplx phi_from_triplet(const TripletAdd& t, HalfPlanePoint z) { return t.alpha + levy_kernel_integral(t.nu, z); }

cplx id_recip_f(const TripletAdd& t, cplx w, cplx seed, const Config& cfg) {
    if (!(w.imag() > 0.0)) fail(ErrorKind::DomainViolation, "F is evaluated in the upper half-plane");
    const double floor = w.imag();
    auto T = [&](cplx zeta) { return w - t.alpha - levy_kernel_integral(t.nu, zeta); };
    Admissible adm = [floor](cplx zeta) { return zeta.imag() >= floor * (1.0 - 1e-9); };
    if (!adm(seed)) seed = w;
    const RootResult r = solve_fixed_point(T, seed, cfg, adm);
    if (!r.converged) fail(ErrorKind::NoRoot, "no solution of zeta + phi(zeta) = w in the upper half-plane");
    return r.z;
}

DensityTable idmeasure_from_triplet_add(const TripletAdd& t, const Eigen::VectorXd& grid,
                                        const std::vector<double>& eta, const Config& cfg) {
    require_line(t.nu);
    BoundaryRay ray = [&](double x, const std::vector<double>& s) {
        std::vector<cplx> out;
        cplx seed(x, cfg.continuation_height);
        for (const LadderStep& st : continuation_ladder(cfg.continuation_height, s)) {
            seed = id_recip_f(t, cplx(x, st.s), seed, cfg);
            if (st.scheduled) out.push_back(1.0 / seed);
        }
        return out;
    };
    return stieltjes_invert(ray, grid, eta, cfg);
}

namespace {

// G'(z): exact for atoms, fourth-order differences for the continuous part.
cplx cauchy_g_prime(const Measure& m, cplx z) {
    cplx acc = 0.0;
    for (const Atom& a : m.atoms) acc -= a.w / ((z - a.x) * (z - a.x));
    if (m.continuous) {
        auto gc = [&](cplx v) {
            cplx ga = 0.0;
            for (const Atom& a : m.atoms) ga += a.w / (v - a.x);
            return cauchy_g_at(m, v) - ga;
        };
        const double h = 1e-3 * z.imag();
        acc += (gc(z - 2.0 * h) - 8.0 * gc(z - h) + 8.0 * gc(z + h) - gc(z + 2.0 * h)) / (12.0 * h);
    }
    return acc;
}

cplx f_prime(const Measure& m, cplx z) {
    const cplx g = cauchy_g_at(m, z);
    return -cauchy_g_prime(m, z) / (g * g);
}

int winding_of(const std::function<cplx(cplx)>& f, cplx center, double radius, int samples = 64) {
    double turn = 0.0;
    cplx prev = f(center + radius);
    for (int k = 1; k <= samples; ++k) {
        const cplx v = f(center + std::polar(radius, 2.0 * pi * k / samples));
        turn += std::arg(v / prev);
        prev = v;
    }
    return static_cast<int>(std::lround(turn / (2.0 * pi)));
}

// Searches C+ for a zero of F' near the support; certified by a winding count.
bool find_critical_point(const Measure& m, cplx& where) {
    auto [lo, hi] = support_hull(m);
    if (std::isinf(lo) || std::isinf(hi)) {
        // Cauchy part: look within ten scales of the centre and the atoms
        const double b = m.continuous->p1, c = m.continuous->p2;
        lo = c - 10.0 * b;
        hi = c + 10.0 * b;
        for (const Atom& a : m.atoms) {
            lo = std::min(lo, a.x);
            hi = std::max(hi, a.x);
        }
    }
    const double width = std::max(hi - lo, 1e-3);
    const double scale = std::max(1.0, 0.5 * width);
    const int nx = 81, ny = 14;
    struct Cand {
        double v;
        cplx z;
    };
    std::vector<Cand> grid;
    std::vector<double> vals(nx * ny);
    std::vector<cplx> pts(nx * ny);
    for (int j = 0; j < ny; ++j) {
        const double y = scale * 0.02 * std::pow(1.6, j);
        for (int i = 0; i < nx; ++i) {
            const double x = lo - 0.5 * width + 2.0 * width * i / (nx - 1);
            const cplx z(x, y);
            pts[j * nx + i] = z;
            vals[j * nx + i] = std::abs(f_prime(m, z));
        }
    }
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const double v = vals[j * nx + i];
            bool local_min = true;
            for (int dj = -1; dj <= 1 && local_min; ++dj)
                for (int di = -1; di <= 1; ++di) {
                    const int ii = i + di, jj = j + dj;
                    if ((di == 0 && dj == 0) || ii < 0 || jj < 0 || ii >= nx || jj >= ny) continue;
                    if (vals[jj * nx + ii] < v) {
                        local_min = false;
                        break;
                    }
                }
            if (local_min) grid.push_back({v, pts[j * nx + i]});
        }
    std::sort(grid.begin(), grid.end(), [](const Cand& a, const Cand& b) { return a.v < b.v; });
    if (grid.size() > 12) grid.resize(12);
    AnalyticFn fp = [&m](cplx z) { return f_prime(m, z); };
    for (const Cand& c : grid) {
        const RootResult r = newton_solve(fp, c.z, 1e-10, 60, [](cplx z) { return z.imag() > 0.0; });
        if (!r.converged || r.z.imag() < 1e-6 * scale) continue;
        const double radius = std::min(0.1 * r.z.imag(), 0.05 * scale);
        if (winding_of(fp, r.z, radius) >= 1) {
            where = r.z;
            return true;
        }
    }
    return false;
}

}  // namespace

IdCheckReport id_check_add(const Measure& m, const Eigen::VectorXd& probe_grid, const Config& cfg) {
    if (m.domain == Domain::UnitCircle) fail(ErrorKind::DomainMismatch, "id_check_add needs a measure on the line");
    IdCheckReport rep;
    const ConeParams cone = auto_cone(m, cfg.cone_alpha, cfg);
    rep.worst_im_phi = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < probe_grid.size(); ++i) {
        const double x = probe_grid[i];
        for (double k : {1.3, 2.2, 4.5, 9.1}) {
            const double y = std::max(k * cone.beta, 1.01 * std::abs(x) / cone.alpha);
            const cplx w(x, y);
            ++rep.probes;
            cplx v;
            try {
                v = phi(m, w, cone, cfg);
            } catch (const Error&) {
                ++rep.failed_probes;
                continue;
            }
            if (v.imag() > rep.worst_im_phi) {
                rep.worst_im_phi = v.imag();
                rep.worst_point = w;
            }
        }
    }
    const double Y = 1e4;
    rep.tail_ratio = std::abs(phi(m, cplx(0.0, Y), cone, cfg)) / Y;
    if (!m.is_dirac()) rep.critical_point_found = find_critical_point(m, rep.critical_point);
    rep.passed = rep.failed_probes == 0 && rep.worst_im_phi <= 1e-8 && rep.tail_ratio < 1e-3 && !rep.critical_point_found;
    return rep;
}

I0SplitResult i0_split_add(const TripletAdd& t, double a, double b, double eps0, double eps, const Config& cfg) {
    (void)cfg;
    require_line(t.nu);
    if (!(a <= b)) fail(ErrorKind::InvalidArgument, "need a <= b");
    if (!(eps0 > 0.0) || !(eps > 0.0)) fail(ErrorKind::InvalidArgument, "eps0 and eps must be positive");
    Window ab{a, b, true, true};
    if (!(t.nu.mass_in(ab) > 0.0)) fail(ErrorKind::MassCondition, "nu([a, b]) = 0");

    I0SplitResult out;
    out.a = a;
    out.b = b;
    const LevyMeasure nu = t.nu;
    // eps0 <= 1/4 keeps the third factor infinitely divisible
    eps0 = std::min(eps0, 0.25);
    for (int k = 0; k < 60; ++k, eps0 *= 0.5) {
        const double Y = 1e4;
        if (std::abs(eps0 * levy_window_integral(nu, ab, cplx(0.0, Y))) / Y < 1e-3) break;
    }
    out.eps0 = eps0;
    AnalyticFn phi_fn = [nu, ab, eps0](cplx z) { return eps0 * levy_window_integral(nu, ab, z); };

    // boundary-proxy curves Im(z + phi(z)) = eta near [a, b]
    const double c = 0.5 * (a + b), R = std::max(b - a, 0.5);
    double A1 = 0.0;
    for (int k = 0; k <= 10; ++k) {
        const double eta = std::ldexp(1.0, -k);
        for (int i = 0; i <= 40; ++i) {
            const double x = c - R + 2.0 * R * i / 40.0;
            auto g = [&](double y) { return y + phi_fn(cplx(x, y)).imag() - eta; };
            double ylo = 1e-12, yhi = 2.0 * eta + 1.0;
            while (g(yhi) < 0.0 && yhi < 1e6) yhi *= 2.0;
            double y = ylo;
            if (g(ylo) < 0.0) {
                for (int it = 0; it < 100; ++it) {
                    const double mid = 0.5 * (ylo + yhi);
                    (g(mid) < 0.0 ? ylo : yhi) = mid;
                }
                y = 0.5 * (ylo + yhi);
            }
            A1 = std::max(A1, std::abs(phi_fn(cplx(x, y))));
        }
    }
    out.A1 = A1;
    while (eps * A1 >= 0.5) eps *= 0.5;
    out.eps = eps;

    out.phi = phi_fn;
    out.f1 = [phi_fn, eps](cplx z) {
        const cplx p = phi_fn(z);
        return 2.0 * p - eps * p * p;
    };
    out.f2 = [phi_fn, eps](cplx z) {
        const cplx p = phi_fn(z);
        return 2.0 * p + eps * p * p;
    };

    out.triplet3.alpha = t.alpha + 4.0 * eps0 * levy_window_first_moment(nu, ab);
    out.triplet3.nu = nu;
    for (const LevyMeasure::Piece& p : nu.pieces)
        out.triplet3.nu.pieces.push_back({-4.0 * eps0 * p.weight, p.shape, intersect(p.window, ab)});

    const double threshold = 1e-3;
    for (int k = 3; k <= 20; ++k) {
        const double h = std::ldexp(1.0, -k);
        if (!out.witness1.found) {
            const cplx z(b + h, h);
            const double v = out.f1(z).imag();
            if (v > threshold) out.witness1 = {true, z, v, h};
        }
        if (!out.witness2.found) {
            const cplx z(a - h, h);
            const double v = out.f2(z).imag();
            if (v > threshold) out.witness2 = {true, z, v, h};
        }
    }
    if (!out.witness1.found && !out.witness2.found)
        fail(ErrorKind::NoWitnessFound, "no point with Im f_j > 0 down to h = 2^-20");

    for (int k = 0; k < 10; ++k) {
        const cplx z(c - 2.0 * R + 4.0 * R * k / 9.0, 0.25 + 0.5 * (k % 3));
        const cplx lhs = phi_from_triplet(t, z);
        const cplx rhs = out.f1(z) + out.f2(z) + phi_from_triplet(out.triplet3, z);
        out.residual = std::max(out.residual, std::abs(lhs - rhs));
    }
    return out;
}

I0FactorsResult i0_factors_rplus(double c, I0Variant variant) {
    if (!(c > 0.0)) fail(ErrorKind::InvalidArgument, "c must be positive");
    I0FactorsResult out;
    out.c = c;
    out.variant = variant;
    const cplx I(0.0, 1.0);
    AnalyticFn target;
    if (variant == I0Variant::MinusCz) {
        out.exponent1 = [c, I](cplx z) { return -c * z / 2.0 - I * std::sqrt(c * z); };
        out.exponent2 = [c, I](cplx z) { return -c * z / 2.0 + I * std::sqrt(c * z); };
        target = [c](cplx z) { return std::exp(-c * z); };
    } else {
        out.exponent1 = [c, I](cplx z) { return c / (2.0 * z) - I * std::sqrt(c / z); };
        out.exponent2 = [c, I](cplx z) { return c / (2.0 * z) + I * std::sqrt(c / z); };
        target = [c](cplx z) { return std::exp(c / z); };
    }
    AnalyticFn e1 = out.exponent1, e2 = out.exponent2;
    out.sigma1 = [e1](cplx z) { return std::exp(e1(z)); };
    out.sigma2 = [e2](cplx z) { return std::exp(e2(z)); };

    for (double x : {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0})
        for (double y : {0.25, 1.0, 2.0}) {
            const cplx z(x, y);
            out.product_residual = std::max(out.product_residual, std::abs(out.sigma1(z) * out.sigma2(z) - target(z)));
        }

    // just above the positive axis the square-root term dominates
    const double x0 = variant == I0Variant::MinusCz ? 1.0 / c : c;
    for (int k = 3; k <= 20 && !out.witness.found; ++k) {
        const double h = std::ldexp(1.0, -k);
        const cplx z(x0, x0 * h);
        const double v = e2(z).imag();
        if (v > 0.0) out.witness = {true, z, v, h};
    }
    return out;
}

cplx sigma_from_triplet_rplus(const TripletRplus& t, cplx z) {
    if (!t.nu.empty() && t.nu.domain != Domain::PositiveHalfLine)
        fail(ErrorKind::DomainMismatch, "half-line triplet needs a Levy measure on (0, inf)");
    if (t.b < 0.0) fail(ErrorKind::DomainViolation, "b must be nonnegative");
    return std::exp(t.a - t.b * z + levy_kernel_integral(t.nu, z));
}

cplx sigma_from_triplet_circle(const TripletCircle& t, cplx z) {
    if (!t.nu.empty() && t.nu.domain != Domain::UnitCircle)
        fail(ErrorKind::DomainMismatch, "circle triplet needs a Levy measure on the circle");
    if (!(std::abs(z) < 1.0)) fail(ErrorKind::DomainViolation, "circle Sigma needs |z| < 1");
    cplx acc(0.0, t.a);
    for (const LevyMeasure::Piece& p : t.nu.pieces) {
        if (!p.window.full()) fail(ErrorKind::InvalidArgument, "circle Levy pieces cannot be windowed");
        acc += p.weight * h_transform(p.shape, DiskPoint(z));
    }
    return std::exp(acc);
}

}  // namespace freeprob
