#include <algorithm>
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "freeprob/io.hpp"
#include "freeprob/transforms.hpp"

using namespace freeprob;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::Io;
}

}  // namespace

TEST_CASE("measure specs") {
    json j = json::parse(R"({"domain": "real", "atoms": [{"x": 0, "w": 0.25}],
                             "continuous": {"family": "semicircle", "params": {"center": 1, "radius": 2}}})");
    Measure m = measure_from_json(j);
    REQUIRE(m.continuous);
    CHECK(m.continuous->weight == doctest::Approx(0.75));
    CHECK(m.continuous->p2 == 2.0);

    Measure back = measure_from_json(measure_to_json(m));
    const cplx z(0.3, 0.7);
    CHECK(std::abs(cauchy_g(back, z) - cauchy_g(m, z)) < 1e-15);

    Measure c = measure_from_json(json::parse(R"({"continuous": {"family": "cauchy", "params": {"scale": 2}}})"));
    CHECK(c.continuous->p2 == 0.0);

    Measure t = measure_from_json(json::parse(R"({"continuous": {"grid": [0, 1, 2], "density": [0, 1, 0]}})"));
    CHECK(t.total_mass() == doctest::Approx(1.0));

    Measure circ = measure_from_json(json::parse(R"({"domain": "circle", "atoms": [{"x": 0, "w": 0.75}, {"x": 3.141592653589793, "w": 0.25}]})"));
    CHECK(circ.domain == Domain::UnitCircle);

    CHECK(kind_of([] { measure_from_json(json::parse(R"({"atoms": [{"x": 0, "w": 0.5}]})")); }) == ErrorKind::MassNotOne);
    CHECK(kind_of([] { measure_from_json(json::parse(R"({"domain": "torus"})")); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { measure_from_json(json::parse(R"({"atoms": [{"x": "a", "w": 1}]})")); }) ==
          ErrorKind::InvalidArgument);
    CHECK(kind_of([] { measure_from_json(json::parse(R"({"continuous": {"family": "gauss"}})")); }) ==
          ErrorKind::InvalidArgument);
}

TEST_CASE("Levy measures and triplets") {
    LevyMeasure nu = levy_from_json(json::parse(R"({"atoms": [{"x": 0, "w": 2}]})"));
    CHECK(nu.total_mass() == doctest::Approx(2.0));
    LevyMeasure sum = levy_from_json(json::parse(
        R"([{"atoms": [{"x": 1, "w": 0.5}]}, {"continuous": {"family": "uniform", "params": {"lo": 0, "hi": 1}}}])"));
    CHECK(sum.total_mass() == doctest::Approx(1.5));

    TripletAdd t = triplet_add_from_json(json::parse(R"({"alpha": 0.5, "nu": {"atoms": [{"x": 0, "w": 1}]}})"));
    CHECK(t.alpha == 0.5);
    CHECK(std::abs(phi_from_triplet(t, cplx(0.0, 2.0)) - (0.5 + 1.0 / cplx(0.0, 2.0))) < 1e-14);
    const cplx z(1.0, 1.0);
    CHECK(std::abs(levy_kernel_integral(levy_from_json(levy_to_json(sum)), z) - levy_kernel_integral(sum, z)) < 1e-14);

    TripletRplus r = triplet_rplus_from_json(json::parse(R"({"a": 0.1, "b": 1})"));
    CHECK(r.b == 1.0);
    CHECK(r.nu.empty());
}

TEST_CASE("config layer") {
    Config cfg = default_config();
    cfg.eta_levels = 12;
    cfg.threads = 2;
    Config back = config_from_json(config_to_json(cfg));
    CHECK(back.eta_levels == 12);
    CHECK(back.threads == 2);
    CHECK(config_to_json(back) == config_to_json(cfg));
    CHECK(config_from_json(json::parse(R"({"eta0": 0.2})")).eta0 == 0.2);
    CHECK(kind_of([] { config_from_json(json::parse(R"({"eta_0": 0.2})")); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("files and tables") {
    CHECK(kind_of([] { read_json_file("/nonexistent/dir/x.json"); }) == ErrorKind::Io);

    const std::string path = (std::filesystem::temp_directory_path() / "freeprob_io_test.json").string();
    write_json_file(path, json{{"k", 1}});
    CHECK(read_json_file(path).at("k") == 1);
    write_text_file(path, "{oops");
    CHECK(kind_of([&] { read_json_file(path); }) == ErrorKind::Io);
    std::remove(path.c_str());

    DensityTable t = density_of(semicircle(0.0, 2.0), linear_grid(-1.0, 1.0, 3));
    const std::string csv = density_csv(t);
    CHECK(csv.rfind("point,density\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    json side = density_sidecar(t);
    CHECK(side.at("domain") == "real");
    CHECK(side.at("unstable_points") == 0);

    DensityTable c = density_of(dirac(0.0, Domain::UnitCircle), theta_grid(8));
    CHECK(density_csv(c).rfind("theta,density\n", 0) == 0);

    EmpiricalCdf e{Domain::RealLine, {0.0, 1.0}};
    CHECK(empirical_csv(e).rfind("value,cdf\n", 0) == 0);
}

TEST_CASE("windowed Levy pieces survive a round trip") {
    LevyMeasure nu = levy_from(semicircle(0.0, 2.0), 1.5);
    LevyMeasure cut = levy_from(semicircle(0.0, 2.0), 1.0);
    cut.pieces[0].weight = -0.5;
    cut.pieces[0].window = Window{-0.5, 0.5, true, false};
    LevyMeasure both = levy_sum(nu, cut);
    LevyMeasure back = levy_from_json(levy_to_json(both));
    REQUIRE(back.pieces.size() == 2);
    CHECK(back.pieces[1].weight == -0.5);
    CHECK_FALSE(back.pieces[1].window.hi_closed);
    CHECK(back.mass_in(Window{-0.5, 0.5}) == doctest::Approx(both.mass_in(Window{-0.5, 0.5})));
    for (cplx z : {cplx(0.1, 0.5), cplx(2.0, 1.0)})
        CHECK(std::abs(levy_kernel_integral(back, z) - levy_kernel_integral(both, z)) < 1e-14);
}
