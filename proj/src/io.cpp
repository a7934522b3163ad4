#include "freeprob/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "freeprob/quadrature.hpp"

namespace freeprob {

namespace {

Family family_from_string(const std::string& s) {
    for (Family f : {Family::Semicircle, Family::Arcsine, Family::Cauchy, Family::Uniform, Family::MarchenkoPastur})
        if (s == to_string(f)) return f;
    fail(ErrorKind::InvalidArgument, "unknown family '" + s + "'");
}

const char* param_name(Family f, int k) {
    static const char* names[][2] = {
        {"center", "radius"}, {"center", "halfwidth"}, {"scale", "center"}, {"lo", "hi"}, {"ratio", "scale"}};
    return names[static_cast<int>(f)][k];
}

double param(const json& params, Family f, int k) {
    const char* name = param_name(f, k);
    if (params.contains(name)) return params.at(name).get<double>();
    if (f == Family::Cauchy && k == 1) return 0.0;
    if (f == Family::MarchenkoPastur && k == 1) return 1.0;
    fail(ErrorKind::InvalidArgument, std::string("missing parameter '") + name + "' for " + to_string(f));
}

Eigen::VectorXd vec(const json& j) {
    const std::vector<double> v = j.get<std::vector<double>>();
    return Eigen::VectorXd::Map(v.data(), v.size());
}

// Unvalidated measure from a spec; `default_weight` < 0 means "whatever the
// atoms leave".
Measure parse(const json& j, double default_weight) {
    Measure m;
    m.domain = domain_from_string(j.value("domain", std::string("real")));
    if (j.contains("atoms"))
        for (const json& a : j.at("atoms")) m.atoms.push_back({a.at("x").get<double>(), a.at("w").get<double>()});
    if (j.contains("continuous") && !j.at("continuous").is_null()) {
        const json& c = j.at("continuous");
        ContinuousPart part;
        if (c.contains("grid")) {
            part.tabulated = true;
            part.grid = vec(c.at("grid"));
            part.density = vec(c.at("density"));
            if (part.grid.size() != part.density.size() || part.grid.size() < 2)
                fail(ErrorKind::InvalidArgument, "grid and density must have the same length >= 2");
            part.weight = trapezoid(part.grid, part.density);
        } else {
            const Family f = family_from_string(c.at("family").get<std::string>());
            const json params = c.value("params", json::object());
            double w = default_weight < 0.0 ? 1.0 - m.atom_mass() : default_weight;
            if (c.contains("weight")) w = c.at("weight").get<double>();
            part = named_part(f, param(params, f, 0), param(params, f, 1), w);
        }
        m.continuous = part;
    }
    return m;
}

template <class F>
auto guarded(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const json::exception& e) {
        fail(ErrorKind::InvalidArgument, std::string("malformed spec: ") + e.what());
    }
}

}  // namespace

Measure measure_from_json(const json& j, const Config& cfg) {
    return guarded([&] {
        Measure m = parse(j, -1.0);
        if (m.continuous && m.continuous->tabulated) return tabulated(m.domain, m.continuous->grid, m.continuous->density, m.atoms);
        return validate(m, cfg);
    });
}

json measure_to_json(const Measure& m) {
    json j;
    j["domain"] = to_string(m.domain);
    j["atoms"] = json::array();
    for (const Atom& a : m.atoms) j["atoms"].push_back({{"x", a.x}, {"w", a.w}});
    if (m.continuous) {
        const ContinuousPart& c = *m.continuous;
        if (c.tabulated) {
            j["continuous"] = {{"grid", std::vector<double>(c.grid.data(), c.grid.data() + c.grid.size())},
                               {"density", std::vector<double>(c.density.data(), c.density.data() + c.density.size())}};
        } else {
            j["continuous"] = {{"family", to_string(c.family)},
                               {"params", {{param_name(c.family, 0), c.p1}, {param_name(c.family, 1), c.p2}}},
                               {"weight", c.weight}};
        }
    }
    return j;
}

LevyMeasure levy_from_json(const json& j, const Config& cfg) {
    return guarded([&] {
        if (j.is_array()) {
            LevyMeasure acc = levy_zero();
            for (const json& piece : j) acc = levy_sum(acc, levy_from_json(piece, cfg));
            return acc;
        }
        Measure m = parse(j, 1.0);
        const double W = m.total_mass();
        if (W == 0.0) return levy_zero(m.domain);
        if (!(W > 0.0)) fail(ErrorKind::DomainViolation, "Levy measure mass must be nonnegative");
        for (Atom& a : m.atoms) a.w /= W;
        if (m.continuous) {
            m.continuous->weight /= W;
            if (m.continuous->tabulated) m.continuous->density /= W;
        }
        // "scale" may be negative for pieces that cancel part of another one
        const double scale = W * j.value("scale", 1.0);
        if (scale == 0.0) return levy_zero(m.domain);
        Measure shape = m.continuous && m.continuous->tabulated
                            ? tabulated(m.domain, m.continuous->grid, m.continuous->density, m.atoms)
                            : validate(m, cfg, false);
        LevyMeasure nu = levy_zero(m.domain);
        Window win;
        if (j.contains("window")) {
            win.lo = j.at("window").at(0).get<double>();
            win.hi = j.at("window").at(1).get<double>();
            if (j.contains("window_closed")) {
                win.lo_closed = j.at("window_closed").at(0).get<bool>();
                win.hi_closed = j.at("window_closed").at(1).get<bool>();
            }
        }
        nu.pieces.push_back({scale, std::move(shape), win});
        return nu;
    });
}

json levy_to_json(const LevyMeasure& nu) {
    json out = json::array();
    for (const LevyMeasure::Piece& p : nu.pieces) {
        json j = measure_to_json(p.shape);
        j["scale"] = p.weight;
        if (!p.window.full()) {
            j["window"] = {p.window.lo, p.window.hi};
            j["window_closed"] = {p.window.lo_closed, p.window.hi_closed};
        }
        out.push_back(j);
    }
    return out;
}

TripletAdd triplet_add_from_json(const json& j, const Config& cfg) {
    return guarded([&] {
        TripletAdd t;
        t.alpha = j.value("alpha", 0.0);
        t.nu = j.contains("nu") ? levy_from_json(j.at("nu"), cfg) : levy_zero();
        return t;
    });
}

TripletRplus triplet_rplus_from_json(const json& j, const Config& cfg) {
    return guarded([&] {
        TripletRplus t;
        t.a = j.value("a", 0.0);
        t.b = j.value("b", 0.0);
        t.nu = j.contains("nu") ? levy_from_json(j.at("nu"), cfg) : levy_zero(Domain::PositiveHalfLine);
        return t;
    });
}

TripletCircle triplet_circle_from_json(const json& j, const Config& cfg) {
    return guarded([&] {
        TripletCircle t;
        t.a = j.value("a", 0.0);
        t.nu = j.contains("nu") ? levy_from_json(j.at("nu"), cfg) : levy_zero(Domain::UnitCircle);
        return t;
    });
}

#define FREEPROB_CONFIG_FIELDS(X)                                                                              \
    X(mass_tol) X(step_tol) X(residual_tol) X(max_iter) X(newton_after) X(continuation_height) X(eta0)          \
        X(eta_levels) X(r_levels) X(atom_threshold) X(atom_stability) X(density_tol) X(max_unstable_fraction) \
            X(zero_atom_threshold) X(cone_alpha) X(threads)

json config_to_json(const Config& cfg) {
    json j;
#define X(name) j[#name] = cfg.name;
    FREEPROB_CONFIG_FIELDS(X)
#undef X
    return j;
}

Config config_from_json(const json& j, Config cfg) {
    return guarded([&] {
        for (auto it = j.begin(); it != j.end(); ++it) {
            bool known = false;
#define X(name)                                                  \
    if (it.key() == #name) {                                     \
        cfg.name = it.value().get<decltype(cfg.name)>();         \
        known = true;                                            \
    }
            FREEPROB_CONFIG_FIELDS(X)
#undef X
            if (!known) fail(ErrorKind::InvalidArgument, "unknown config key '" + it.key() + "'");
        }
        return cfg;
    });
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::Io, path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write " + path);
    out << text;
    if (!out) fail(ErrorKind::Io, "write failed for " + path);
}

void write_json_file(const std::string& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string density_csv(const DensityTable& t) {
    std::ostringstream os;
    os << (t.domain == Domain::UnitCircle ? "theta" : "point") << ",density\n";
    for (Eigen::Index i = 0; i < t.grid.size(); ++i) os << num(t.grid[i]) << ',' << num(t.density[i]) << '\n';
    return os.str();
}

json density_sidecar(const DensityTable& t) {
    json j;
    j["domain"] = to_string(t.domain);
    j["points"] = t.grid.size();
    j["atoms"] = json::array();
    for (const Atom& a : t.atoms) j["atoms"].push_back({{"x", a.x}, {"w", a.w}});
    j["continuous_mass"] = t.continuous_mass();
    j["mass_deficit"] = t.mass_deficit;
    j["unstable_points"] = t.unstable_points;
    return j;
}

std::string empirical_csv(const EmpiricalCdf& e) {
    std::ostringstream os;
    os << (e.domain == Domain::UnitCircle ? "theta" : "value") << ",cdf\n";
    const std::size_t n = e.values.size();
    for (std::size_t i = 0; i < n; ++i)
        if (i + 1 == n || e.values[i + 1] != e.values[i]) os << num(e.values[i]) << ',' << num(double(i + 1) / n) << '\n';
    return os.str();
}

}  // namespace freeprob
