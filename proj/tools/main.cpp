// Command-line front end: one job per process, JSON measure specs in,
// CSV tables and JSON reports out.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "freeprob/arithmetic.hpp"
#include "freeprob/conv_add.hpp"
#include "freeprob/conv_mul_circle.hpp"
#include "freeprob/conv_mul_rplus.hpp"
#include "freeprob/infdiv.hpp"
#include "freeprob/io.hpp"
#include "freeprob/rmt.hpp"
#include "freeprob/transforms.hpp"

using namespace freeprob;

namespace {

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::Io: return 4;
        case ErrorKind::NoConvergence:
        case ErrorKind::ConeTooLow:
        case ErrorKind::OutsideImage:
        case ErrorKind::ExtrapolationUnstable:
        case ErrorKind::NoRoot:
        case ErrorKind::NoWitnessFound:
        case ErrorKind::PsiPoleHit:
        case ErrorKind::EigensolverFailure: return 3;
        default: return 2;
    }
}

double parse_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) fail(ErrorKind::InvalidArgument, "not a number: '" + s + "'");
    return v;
}

// "x", "yi", "x+yi", "x-yi", "i", "-i"
cplx parse_complex(std::string s) {
    s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
    if (s.empty()) fail(ErrorKind::InvalidArgument, "empty complex number");
    if (s.back() != 'i') return parse_double(s);
    s.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;)
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    auto imag = [](const std::string& t) {
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return parse_double(t);
    };
    if (split == std::string::npos) return cplx(0.0, imag(s));
    return cplx(parse_double(s.substr(0, split)), imag(s.substr(split)));
}

std::string format_complex(cplx z) {
    char buf[80];
    if (z.imag() == 0.0)
        std::snprintf(buf, sizeof buf, "%.17g", z.real());
    else
        std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
    return buf;
}

Eigen::VectorXd parse_grid(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) fail(ErrorKind::InvalidArgument, "grid must look like lo:hi:count");
    const double lo = parse_double(parts[0]), hi = parse_double(parts[1]), n = parse_double(parts[2]);
    if (!(hi > lo) || n < 2 || n != std::floor(n)) fail(ErrorKind::InvalidArgument, "bad grid '" + s + "'");
    return linear_grid(lo, hi, int(n));
}

std::vector<int> parse_counts(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(int(parse_double(p)));
    if (out.empty()) fail(ErrorKind::InvalidArgument, "empty count list");
    return out;
}

json cplx_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

struct Job {
    std::string command;
    std::string a, b, m, triplet, config_path, out, grid = "-3:3:601", at, mode = "additive", variant = "minus-cz",
                                                   ns = "2,4,16,64", probe = "-3:3:13";
    int theta = 720;
    double t = 2.0, c = 1.0, lo = 0.0, hi = 0.0, eps0 = 0.2, eps = 0.1;
    bool certificate = false;
    int n = 512, reps = 40;
    std::uint64_t seed = 1;
    int threads = 0;
    double eta0 = -1.0;
    int eta_levels = -1, r_levels = -1;
};

Config resolve_config(const Job& job) {
    Config cfg = default_config();
    if (!job.config_path.empty()) cfg = config_from_json(read_json_file(job.config_path), cfg);
    if (job.eta0 > 0.0) cfg.eta0 = job.eta0;
    if (job.eta_levels > 0) cfg.eta_levels = job.eta_levels;
    if (job.r_levels > 0) cfg.r_levels = job.r_levels;
    cfg.threads = job.threads;
    return cfg;
}

json job_json(const Job& j) {
    json o = {{"command", j.command}};
    auto put = [&](const char* k, const std::string& v) {
        if (!v.empty()) o[k] = v;
    };
    put("a", j.a);
    put("b", j.b);
    put("m", j.m);
    put("triplet", j.triplet);
    put("config", j.config_path);
    put("at", j.at);
    o["grid"] = j.grid;
    o["theta"] = j.theta;
    o["t"] = j.t;
    o["seed"] = j.seed;
    return o;
}

class Runner {
public:
    Runner(const Job& job, const Config& cfg) : job_(job), cfg_(cfg) {
        report_["job"] = job_json(job);
        report_["config"] = config_to_json(cfg);
    }

    int run() {
        const std::string& c = job_.command;
        if (c == "conv-add") return table(free_add(measure(job_.a), measure(job_.b), grid(), eta(), cfg_));
        if (c == "conv-mul-rplus") return table(free_mul_rplus(measure(job_.a), measure(job_.b), grid(), eta(), cfg_));
        if (c == "conv-mul-circle")
            return table(free_mul_circle(measure(job_.a), measure(job_.b), theta(), rs(), cfg_));
        if (c == "power-add") return table(free_add_power(measure(job_.m), job_.t, grid(), eta(), cfg_));
        if (c == "power-mul") {
            const Measure m = measure(job_.m);
            if (m.domain == Domain::UnitCircle)
                return table(free_mul_circle_power(m, job_.t, theta(), rs(), job_.certificate, cfg_));
            if (m.domain != Domain::PositiveHalfLine)
                fail(ErrorKind::DomainMismatch, "power-mul needs a measure on rplus or the circle");
            return table(free_mul_rplus_power(m, job_.t, grid(), eta(), cfg_));
        }
        if (c == "boolean-add") return table(boolean_add(measure(job_.a), measure(job_.b), grid(), eta(), cfg_));
        if (c == "density") return density();
        if (c == "phi") return phi_cmd();
        if (c == "sigma") return sigma_cmd();
        if (c == "id-check") return id_check();
        if (c == "i0-split") return i0_split();
        if (c == "i0-factors") return i0_factors();
        if (c == "certify") return certify();
        if (c == "delphic-degree") return delphic();
        if (c == "khintchine-demo") return khintchine();
        if (c == "rmt-check") return rmt();
        fail(ErrorKind::InvalidArgument, "unknown command " + c);
    }

private:
    Measure measure(const std::string& path) {
        if (path.empty()) fail(ErrorKind::InvalidArgument, "missing measure file");
        return measure_from_json(read_json_file(path), cfg_);
    }
    Eigen::VectorXd grid() const { return parse_grid(job_.grid); }
    Eigen::VectorXd theta() const { return theta_grid(job_.theta); }
    std::vector<double> eta() {
        const std::vector<double> s = default_eta_schedule(cfg_);
        report_["eta_schedule"] = s;
        return s;
    }
    std::vector<double> rs() {
        const std::vector<double> s = default_r_schedule(cfg_);
        report_["r_schedule"] = s;
        return s;
    }
    cplx at() const {
        if (job_.at.empty()) fail(ErrorKind::InvalidArgument, "missing --at");
        return parse_complex(job_.at);
    }

    // Without --out, tables go to stdout as CSV and other reports as JSON.
    int finish(const std::string& csv = {}) {
        if (job_.out.empty()) {
            if (!csv.empty() && job_.command != "rmt-check")
                std::cout << csv;
            else
                std::cout << report_.dump(2) << "\n";
            return 0;
        }
        if (!csv.empty()) write_text_file(job_.out + ".csv", csv);
        write_json_file(job_.out + ".json", report_);
        return 0;
    }

    int table(const DensityTable& t) {
        report_["table"] = density_sidecar(t);
        return finish(density_csv(t));
    }

    int density() {
        if (!job_.triplet.empty()) {
            const TripletAdd t = triplet_add_from_json(read_json_file(job_.triplet), cfg_);
            return table(idmeasure_from_triplet_add(t, grid(), eta(), cfg_));
        }
        const Measure m = measure(job_.m);
        if (m.domain == Domain::UnitCircle) return table(density_of(m, theta(), cfg_));
        return table(density_of(m, grid(), cfg_));
    }

    int scalar(const std::string& key, cplx v) {
        report_[key] = cplx_json(v);
        if (!job_.out.empty()) write_json_file(job_.out + ".json", report_);
        std::cout << format_complex(v) << "\n";
        return 0;
    }

    int phi_cmd() {
        if (!job_.triplet.empty()) {
            const TripletAdd t = triplet_add_from_json(read_json_file(job_.triplet), cfg_);
            return scalar("phi", phi_from_triplet(t, at()));
        }
        const Measure m = measure(job_.m);
        const ConeParams cone = auto_cone(m, cfg_.cone_alpha, cfg_);
        report_["cone"] = {{"alpha", cone.alpha}, {"beta", cone.beta}};
        return scalar("phi", phi(m, at(), cone, cfg_));
    }

    int sigma_cmd() {
        const Measure m = measure(job_.m);
        if (m.domain == Domain::PositiveHalfLine) return scalar("sigma", sigma_rplus(m, at(), cfg_));
        if (m.domain == Domain::UnitCircle) return scalar("sigma", sigma_circle(m, at(), cfg_));
        fail(ErrorKind::DomainMismatch, "sigma is defined for rplus and circle measures");
    }

    int id_check() {
        const IdCheckReport r = id_check_add(measure(job_.m), parse_grid(job_.probe), cfg_);
        report_["id_check"] = {{"passed", r.passed},
                               {"worst_im_phi", r.worst_im_phi},
                               {"worst_point", cplx_json(r.worst_point)},
                               {"tail_ratio", r.tail_ratio},
                               {"critical_point_found", r.critical_point_found},
                               {"critical_point", cplx_json(r.critical_point)},
                               {"probes", r.probes},
                               {"failed_probes", r.failed_probes}};
        return finish();
    }

    static json witness_json(const SplitWitness& w) {
        return {{"found", w.found}, {"z", cplx_json(w.z)}, {"im", w.im_f}, {"h", w.h}};
    }

    int i0_split() {
        if (job_.triplet.empty()) fail(ErrorKind::InvalidArgument, "missing --triplet");
        const TripletAdd t = triplet_add_from_json(read_json_file(job_.triplet), cfg_);
        const I0SplitResult r = i0_split_add(t, job_.lo, job_.hi, job_.eps0, job_.eps, cfg_);
        report_["i0_split"] = {{"eps0", r.eps0},
                               {"eps", r.eps},
                               {"a", r.a},
                               {"b", r.b},
                               {"A1", r.A1},
                               {"residual", r.residual},
                               {"witness1", witness_json(r.witness1)},
                               {"witness2", witness_json(r.witness2)},
                               {"triplet3", {{"alpha", r.triplet3.alpha}, {"nu", levy_to_json(r.triplet3.nu)}}}};
        return finish();
    }

    int i0_factors() {
        I0Variant v;
        if (job_.variant == "minus-cz")
            v = I0Variant::MinusCz;
        else if (job_.variant == "c-over-z")
            v = I0Variant::COverZ;
        else
            fail(ErrorKind::InvalidArgument, "variant must be minus-cz or c-over-z");
        const I0FactorsResult r = i0_factors_rplus(job_.c, v);
        report_["i0_factors"] = {{"c", r.c},
                                 {"variant", job_.variant},
                                 {"product_residual", r.product_residual},
                                 {"witness_factor", r.witness_factor},
                                 {"witness", witness_json(r.witness)}};
        return finish();
    }

    int certify() {
        const IndecompCertificate c = certify_indecomposable(measure(job_.m), cfg_);
        json conds = json::array();
        for (const CheckedCondition& k : c.checked_conditions)
            conds.push_back({{"name", k.name}, {"holds", k.holds}, {"evidence", k.evidence}});
        report_["certificate"] = {{"verdict", to_string(c.verdict)},
                                  {"checked_conditions", conds},
                                  {"limit_sequence", c.limit_sequence},
                                  {"note", c.note}};
        return finish();
    }

    int delphic() {
        const Measure m = measure(job_.m);
        const DelphicGamma g = default_gamma(m.domain);
        report_["gamma"] = {{"alpha", g.alpha}, {"beta", g.beta}, {"delta", g.delta}};
        return scalar("delphic_degree", delphic_degree(m, g, cfg_));
    }

    int khintchine() {
        const KhintchineReport r = khintchine_demo(measure(job_.m), parse_counts(job_.ns), grid(), eta(), cfg_);
        json steps = json::array();
        for (const KhintchineStep& s : r.steps)
            steps.push_back({{"n", s.n},
                             {"linf", s.linf},
                             {"kolmogorov", s.kolmogorov},
                             {"unstable_points", s.unstable_points}});
        report_["khintchine"] = {{"steps", steps}, {"decreasing", r.decreasing}, {"final_below", r.final_below}};
        return finish();
    }

    int rmt() {
        EnsembleSpec spec;
        spec.mode = ensemble_mode_from_string(job_.mode);
        spec.m1 = measure(job_.a);
        spec.m2 = measure(job_.b);
        spec.n = job_.n;
        spec.reps = job_.reps;
        spec.seed = job_.seed;
        const EmpiricalCdf e = sample_spectrum(spec, cfg_);
        DensityTable pred;
        switch (spec.mode) {
            case EnsembleMode::AdditiveHermitian: pred = free_add(spec.m1, spec.m2, grid(), eta(), cfg_); break;
            case EnsembleMode::MultiplicativePositive:
                pred = free_mul_rplus(spec.m1, spec.m2, grid(), eta(), cfg_);
                break;
            case EnsembleMode::MultiplicativeUnitary:
                pred = free_mul_circle(spec.m1, spec.m2, theta(), rs(), cfg_);
                break;
        }
        report_["rmt"] = {{"mode", to_string(spec.mode)},
                          {"n", spec.n},
                          {"reps", spec.reps},
                          {"seed", spec.seed},
                          {"eigenvalues", e.values.size()},
                          {"ks", ks_distance(e, pred)}};
        report_["prediction"] = density_sidecar(pred);
        return finish(empirical_csv(e));
    }

    const Job& job_;
    Config cfg_;
    json report_;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Free convolutions, transforms and infinitely divisible laws"};
    app.require_subcommand(1);
    app.fallthrough();
    Job job;
    app.add_option("--config", job.config_path, "JSON file of solver settings");
    app.add_option("--threads", job.threads, "worker threads for grid parallelism (0 = all cores)");
    app.add_option("--eta0", job.eta0, "first eta of the inversion schedule");
    app.add_option("--eta-levels", job.eta_levels, "number of eta levels");
    app.add_option("--r-levels", job.r_levels, "number of radius levels on the circle");
    app.add_option("--out", job.out, "output prefix: writes <out>.json and <out>.csv");

    auto sub = [&](const char* name, const char* help) { return app.add_subcommand(name, help); };
    auto two = [&](CLI::App* s) {
        s->add_option("--a", job.a, "first measure (JSON)")->required();
        s->add_option("--b", job.b, "second measure (JSON)")->required();
    };
    auto grid = [&](CLI::App* s) { s->add_option("--grid", job.grid, "lo:hi:count"); };
    auto theta = [&](CLI::App* s) { s->add_option("--theta", job.theta, "number of angle intervals"); };

    auto* ca = sub("conv-add", "free additive convolution");
    two(ca);
    grid(ca);
    auto* cr = sub("conv-mul-rplus", "free multiplicative convolution on [0, inf)");
    two(cr);
    grid(cr);
    auto* cc = sub("conv-mul-circle", "free multiplicative convolution on the circle");
    two(cc);
    theta(cc);
    auto* pa = sub("power-add", "additive convolution power");
    pa->add_option("--m", job.m)->required();
    pa->add_option("--t", job.t, "power t >= 1");
    grid(pa);
    auto* pm = sub("power-mul", "multiplicative convolution power");
    pm->add_option("--m", job.m)->required();
    pm->add_option("--t", job.t, "power t >= 1");
    pm->add_flag("--certificate", job.certificate, "use the zero-free certificate for circle powers");
    grid(pm);
    theta(pm);
    auto* ba = sub("boolean-add", "Boolean additive convolution");
    two(ba);
    grid(ba);
    auto* de = sub("density", "density of a measure or of the i.d. law of a triplet");
    de->add_option("--m", job.m);
    de->add_option("--triplet", job.triplet);
    grid(de);
    theta(de);
    auto* ph = sub("phi", "Voiculescu transform at a point");
    ph->add_option("--m", job.m);
    ph->add_option("--triplet", job.triplet);
    ph->add_option("--at", job.at, "x+yi")->required();
    auto* si = sub("sigma", "Sigma transform at a point");
    si->add_option("--m", job.m)->required();
    si->add_option("--at", job.at, "x+yi")->required();
    auto* ic = sub("id-check", "necessary conditions for infinite divisibility");
    ic->add_option("--m", job.m)->required();
    ic->add_option("--probe", job.probe, "lo:hi:count real parts of cone probes");
    auto* is = sub("i0-split", "split an i.d. law into two non-i.d. factors and an i.d. remainder");
    is->add_option("--triplet", job.triplet)->required();
    is->add_option("--lo", job.lo, "window start a");
    is->add_option("--hi", job.hi, "window end b");
    is->add_option("--eps0", job.eps0);
    is->add_option("--eps", job.eps);
    auto* ifa = sub("i0-factors", "factorization witness on [0, inf)");
    ifa->add_option("--c", job.c);
    ifa->add_option("--variant", job.variant, "minus-cz or c-over-z");
    auto* ce = sub("certify", "sufficient conditions for indecomposability");
    ce->add_option("--m", job.m)->required();
    auto* dd = sub("delphic-degree", "Delphic degree with the default gamma");
    dd->add_option("--m", job.m)->required();
    auto* kd = sub("khintchine-demo", "free central limit demo");
    kd->add_option("--m", job.m)->required();
    kd->add_option("--n", job.ns, "comma separated counts");
    grid(kd);
    auto* rc = sub("rmt-check", "Monte-Carlo check against random rotated matrices");
    rc->add_option("--mode", job.mode, "additive, positive or unitary");
    two(rc);
    rc->add_option("--n", job.n, "matrix size");
    rc->add_option("--reps", job.reps, "repetitions");
    rc->add_option("--seed", job.seed, "base seed; identical seeds give identical spectra");
    grid(rc);
    theta(rc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    job.command = app.get_subcommands().front()->get_name();

    try {
        const Config cfg = resolve_config(job);
        return Runner(job, cfg).run();
    } catch (const Error& e) {
        std::cerr << "freeprob: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "freeprob: " << e.what() << "\n";
        return 2;
    }
}
