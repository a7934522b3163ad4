#include "freeprob/arithmetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "freeprob/conv_add.hpp"
#include "freeprob/quadrature.hpp"
#include "freeprob/transforms.hpp"

namespace freeprob {

const char* to_string(IndecompVerdict v) {
    switch (v) {
        case IndecompVerdict::IndecomposableByFiniteSupport: return "IndecomposableByFiniteSupport";
        case IndecompVerdict::IndecomposableByLineEdge: return "IndecomposableByLineEdge";
        case IndecompVerdict::IndecomposableByHalfLineEdge: return "IndecomposableByHalfLineEdge";
        case IndecompVerdict::IndecomposableByCircleGap: return "IndecomposableByCircleGap";
        case IndecompVerdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

BoundaryLimit boundary_limit(const std::function<double(double)>& f, int levels) {
    BoundaryLimit out;
    std::vector<double> t;
    for (int k = 0; k < levels; ++k) {
        const double h = 0.25 * std::pow(4.0, -k);
        out.sequence.push_back(f(h));
        t.push_back(std::sqrt(h));
    }
    const std::size_t K = out.sequence.size() - 1;
    const double d1 = out.sequence[K] - out.sequence[K - 1];
    const double d0 = out.sequence[K - 1] - out.sequence[K - 2];
    // quartering h shrinks the steps of a convergent sqrt(h) expansion by
    // half; log or pole growth keeps them from shrinking
    if (std::abs(d1) > 1e-8 * (1.0 + std::abs(out.sequence[K])) && std::abs(d1) > 0.8 * std::abs(d0) &&
        d1 * d0 > 0.0) {
        out.diverging = true;
        out.direction = d1 > 0.0 ? 1 : -1;
        out.value = out.direction * std::numeric_limits<double>::infinity();
        return out;
    }
    out.value = extrapolate_to_zero(t, out.sequence).value;
    return out;
}

namespace {

constexpr double limit_tol = 1e-4;

void add(IndecompCertificate& c, std::string name, bool holds, double evidence) {
    c.checked_conditions.push_back({std::move(name), holds, evidence});
}

bool all_hold(const IndecompCertificate& c) {
    return std::all_of(c.checked_conditions.begin(), c.checked_conditions.end(),
                       [](const CheckedCondition& k) { return k.holds; });
}

// ∫ g(u) rho(u) du over the continuous part, nearly singular at s.
double continuous_integral(const Measure& m, double lo, double hi, double s, double d0,
                           const std::function<double(double)>& g) {
    if (!m.continuous || !(hi > lo)) return 0.0;
    auto f = [&](double u) { return cplx(g(u) * continuous_density(m, u)); };
    return integrate_graded(f, lo, hi, s, std::max(d0, 1e-300), 0.5, 10).real();
}

IndecompCertificate check_line(const Measure& m) {
    IndecompCertificate c;
    const auto [lo, hi] = support_hull(m);
    auto bottom = std::find_if(m.atoms.begin(), m.atoms.end(), [lo = lo](const Atom& a) { return a.x == lo; });
    add(c, "lowest support point is an atom a", bottom != m.atoms.end(), bottom != m.atoms.end() ? bottom->w : 0.0);
    if (bottom == m.atoms.end()) return c;
    const double a = bottom->x, wa = bottom->w;
    double b = std::numeric_limits<double>::infinity();
    for (const Atom& at : m.atoms)
        if (at.x != a) b = std::min(b, at.x);
    double clo = 0.0, chi = 0.0;
    if (m.continuous) {
        std::tie(clo, chi) = continuous_support(*m.continuous, m.domain);
        b = std::min(b, clo);
    }
    add(c, "mu({a}) > 0", wa > 0.0, wa);
    add(c, "mu([b, inf)) > 0", m.total_mass() - wa > 0.0, m.total_mass() - wa);
    add(c, "a < b", a < b && std::isfinite(b), b - a);
    add(c, "mu({a}) + mu([b, inf)) = 1", true, wa + (m.total_mass() - wa));
    if (!(a < b) || !std::isfinite(b)) return c;

    auto G = [&](double h) {
        const double x = b - h * (b - a);
        double g = 0.0;
        for (const Atom& at : m.atoms) g += at.w / (x - at.x);
        return g + continuous_integral(m, clo, chi, x, b - x, [x](double u) { return 1.0 / (x - u); });
    };
    const BoundaryLimit lim = boundary_limit(G);
    c.limit_sequence = lim.sequence;
    add(c, "lim G(x) as x -> b- equals 0", !lim.diverging && std::abs(lim.value) <= limit_tol, lim.value);
    if (all_hold(c)) c.verdict = IndecompVerdict::IndecomposableByLineEdge;
    return c;
}

IndecompCertificate check_rplus(const Measure& m) {
    IndecompCertificate c;
    const auto [lo, hi] = support_hull(m);
    auto top = std::find_if(m.atoms.begin(), m.atoms.end(), [hi = hi](const Atom& a) { return a.x == hi; });
    add(c, "largest support point is an atom b", top != m.atoms.end(), top != m.atoms.end() ? top->w : 0.0);
    if (top == m.atoms.end()) return c;
    const double b = top->x, wb = top->w;
    double a = 0.0, w0 = 0.0;
    for (const Atom& at : m.atoms) {
        if (at.x != b) a = std::max(a, at.x);
        if (at.x == 0.0) w0 += at.w;
    }
    double clo = 0.0, chi = 0.0;
    if (m.continuous) {
        std::tie(clo, chi) = continuous_support(*m.continuous, m.domain);
        a = std::max(a, chi);
    }
    const double inner = m.total_mass() - wb - w0;
    add(c, "mu((0, a]) > 0", inner > 0.0, inner);
    add(c, "mu({b}) > 0", wb > 0.0, wb);
    add(c, "0 < a < b", a > 0.0 && a < b, b - a);
    add(c, "mu([0, a]) + mu({b}) = 1", true, m.total_mass());
    if (!(a > 0.0 && a < b)) return c;

    auto psi_real = [&](double h) {
        const double x = (1.0 - h) / a;
        double v = 0.0;
        for (const Atom& at : m.atoms) v += at.w * x * at.x / (1.0 - x * at.x);
        return v + continuous_integral(m, clo, chi, 1.0 / x, 1.0 / x - a,
                                       [x](double u) { return x * u / (1.0 - x * u); });
    };
    const BoundaryLimit lim = boundary_limit(psi_real);
    c.limit_sequence = lim.sequence;
    const double margin = lim.value + 1.0;
    add(c, "lim psi(x) as x -> 1/a- >= -1", margin >= -limit_tol, lim.value);
    if (std::isfinite(margin) && std::abs(margin) < 10.0 * limit_tol)
        c.note = "limit within 10x tolerance of -1; margin " + std::to_string(margin);
    if (all_hold(c)) c.verdict = IndecompVerdict::IndecomposableByHalfLineEdge;
    return c;
}

IndecompCertificate check_circle(const Measure& m) {
    IndecompCertificate c;
    auto one = std::find_if(m.atoms.begin(), m.atoms.end(),
                            [](const Atom& a) { return std::abs(wrap_angle(a.x)) < 1e-12; });
    add(c, "mu({1}) > 0", one != m.atoms.end(), one != m.atoms.end() ? one->w : 0.0);
    if (one == m.atoms.end()) return c;

    double alpha = pi;
    for (const Atom& at : m.atoms)
        if (&at != &*one) alpha = std::min(alpha, std::abs(wrap_angle(at.x)));
    double clo = 0.0, chi = 0.0;
    if (m.continuous) {
        const ContinuousPart& cp = *m.continuous;
        if (cp.tabulated) {
            clo = cp.grid[0];
            chi = cp.grid[cp.grid.size() - 1];
            for (Eigen::Index i = 0; i < cp.grid.size(); ++i)
                if (cp.density[i] > 0.0) alpha = std::min(alpha, std::abs(wrap_angle(cp.grid[i])));
        } else {
            clo = cp.p1;
            chi = cp.p2;
            double off = -cp.p1;
            off -= 2.0 * pi * std::floor(off / (2.0 * pi));
            alpha = off <= cp.p2 - cp.p1 ? 0.0 : std::min({alpha, std::abs(wrap_angle(cp.p1)), std::abs(wrap_angle(cp.p2))});
        }
    }
    const double rest = m.total_mass() - one->w;
    add(c, "mu(gamma_alpha minus {1}) = 0 with alpha > 0", alpha > 0.0, alpha);
    add(c, "mu(T minus gamma_alpha) > 0", rest > 0.0, rest);
    if (!(alpha > 0.0) || !(rest > 0.0)) return c;

    auto im_psi = [&](double theta) {
        const cplx z = std::polar(1.0, theta);
        double v = 0.0;
        for (const Atom& at : m.atoms) {
            const cplx u = z * std::polar(1.0, at.x);
            v += at.w * (u / (1.0 - u)).imag();
        }
        if (m.continuous) {
            // nearest copy of the singular angle -theta
            const double mid = 0.5 * (clo + chi);
            double s = -theta + 2.0 * pi * std::round((mid + theta) / (2.0 * pi));
            if (s < clo - pi) s += 2.0 * pi;
            if (s > chi + pi) s -= 2.0 * pi;
            const double d0 = std::max({clo - s, s - chi, 1e-300});
            v += continuous_integral(m, clo, chi, s, d0,
                                     [theta](double phi) { return 0.5 / std::tan(0.5 * (theta + phi)); });
        }
        return v;
    };
    const BoundaryLimit up = boundary_limit([&](double h) { return im_psi(alpha * (1.0 - h)); });
    const BoundaryLimit down = boundary_limit([&](double h) { return im_psi(-alpha * (1.0 - h)); });
    c.limit_sequence = up.sequence;
    c.limit_sequence.insert(c.limit_sequence.end(), down.sequence.begin(), down.sequence.end());
    add(c, "Im psi(e^{i theta}) -> -inf as theta -> alpha-", up.diverging && up.direction < 0, up.sequence.back());
    add(c, "Im psi(e^{i theta}) -> +inf as theta -> -alpha+", down.diverging && down.direction > 0,
        down.sequence.back());
    if (all_hold(c)) c.verdict = IndecompVerdict::IndecomposableByCircleGap;
    return c;
}

}  // namespace

IndecompCertificate certify_indecomposable(const Measure& m, const Config& cfg) {
    const Measure v = validate(m, cfg);
    if (v.is_dirac()) {
        IndecompCertificate c;
        c.note = "Dirac measures are units, not indecomposable";
        return c;
    }
    if (v.finite_support()) {
        IndecompCertificate c;
        c.verdict = IndecompVerdict::IndecomposableByFiniteSupport;
        c.checked_conditions.push_back({"finitely many atoms, at least two", true, double(v.atoms.size())});
        return c;
    }
    switch (v.domain) {
        case Domain::RealLine: return check_line(v);
        case Domain::PositiveHalfLine: return check_rplus(v);
        case Domain::UnitCircle: return check_circle(v);
    }
    return {};
}

DelphicGamma default_gamma(Domain d) {
    switch (d) {
        case Domain::RealLine: return {1.0, 1.0, 0.0};
        case Domain::PositiveHalfLine: return {pi / 2.0, 0.5, 2.0};
        case Domain::UnitCircle: return {0.5, 0.0, 0.0};
    }
    return {};
}

double delphic_degree_line(const AnalyticFn& F, const DelphicGamma& g, const Config& cfg) {
    return -phi_of(F, cplx(0.0, g.beta + 1.0), cfg).imag();
}

double delphic_degree_rplus(const AnalyticFn& K, double mean, const DelphicGamma& g, const Config& cfg) {
    const cplx z = std::polar(0.5 * (g.beta + g.delta), 0.5 * (pi + g.alpha));
    return -std::log(sigma_rplus_of(K, mean, z, cfg)).imag();
}

double delphic_degree_circle(const AnalyticFn& Q, cplx mean, const DelphicGamma& g, const Config& cfg) {
    return std::log(std::abs(sigma_circle_of(Q, mean, cplx(0.5 * g.alpha, 0.0), cfg)));
}

double delphic_degree(const Measure& m, const DelphicGamma& g, const Config& cfg) {
    const Measure v = validate(m, cfg);
    // phi of a point mass is a real constant and Sigma has modulus one
    // (circle) or is a positive constant (half-line)
    if (v.is_dirac()) return 0.0;
    switch (v.domain) {
        case Domain::RealLine:
            return delphic_degree_line([v](cplx z) { return recip_f_at(v, z); }, g, cfg);
        case Domain::PositiveHalfLine:
            return delphic_degree_rplus([v](cplx z) { return k_transform(v, z); }, moment(v, 1), g, cfg);
        case Domain::UnitCircle:
            return delphic_degree_circle([v](cplx z) { return q_transform(v, DiskPoint(z)); }, circle_moment(v, 1), g,
                                         cfg);
    }
    return 0.0;
}

double delphic_degree(const Measure& m, const Config& cfg) { return delphic_degree(m, default_gamma(m.domain), cfg); }

KhintchineReport khintchine_demo(const Measure& base, const std::vector<int>& n_list, const Eigen::VectorXd& grid,
                                 const std::vector<double>& eta, const Config& cfg) {
    const Measure b = validate(base, cfg);
    if (b.domain != Domain::RealLine) fail(ErrorKind::DomainMismatch, "the additive demo needs a measure on the line");
    const double mean = moment(b, 1), var = moment(b, 2) - mean * mean;
    if (std::abs(mean) > 1e-9 || std::abs(var - 1.0) > 1e-9)
        fail(ErrorKind::InvalidArgument, "base must have mean 0 and variance 1");
    const Measure sc = semicircle(0.0, 2.0);
    const ContinuousPart& scp = *sc.continuous;

    KhintchineReport rep;
    for (int n : n_list) {
        if (n < 1) fail(ErrorKind::InvalidArgument, "counts must be positive");
        const DensityTable t = free_add_power(dilate(b, 1.0 / std::sqrt(double(n))), n, grid, eta, cfg);
        KhintchineStep st;
        st.n = n;
        st.unstable_points = t.unstable_points;
        for (Eigen::Index i = 0; i < grid.size(); ++i) {
            const double x = grid[i];
            st.kolmogorov = std::max(st.kolmogorov, std::abs(t.cdf(x) - continuous_cdf(scp, Domain::RealLine, x)));
            st.linf = std::max(st.linf, std::abs(t.density[i] - continuous_density(sc, x)));
        }
        rep.steps.push_back(st);
    }
    rep.decreasing = true;
    for (std::size_t k = 1; k < rep.steps.size(); ++k)
        if (rep.steps[k].linf > rep.steps[k - 1].linf + 1e-3) rep.decreasing = false;
    rep.final_below = !rep.steps.empty() && rep.steps.back().linf < 0.05;
    return rep;
}

}  // namespace freeprob
