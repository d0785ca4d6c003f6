#include <doctest.h>

#include <cmath>
#include <sstream>

#include "confsim/fields.hpp"
#include "confsim/io.hpp"
#include "confsim/quadrature.hpp"
#include "confsim/rng.hpp"

using namespace confsim;

TEST_CASE("gauss-legendre integrates polynomials exactly") {
    Vec lo{}, hi{};
    lo[0] = -1.5;
    hi[0] = 2.0;
    Window w(1, lo, hi);
    // degree 9 with a 5-node rule
    auto f = [](const Vec& x) { return 3 * std::pow(x[0], 9) - 2 * std::pow(x[0], 4) + x[0]; };
    auto F = [](double x) { return 0.3 * std::pow(x, 10) - 0.4 * std::pow(x, 5) + 0.5 * x * x; };
    CHECK(integrate_window(f, w, 5) == doctest::Approx(F(2.0) - F(-1.5)).epsilon(1e-13));
}

TEST_CASE("2d tensor quadrature factorizes products") {
    Vec lo{}, hi{};
    hi[0] = 2.0;
    hi[1] = 3.0;
    Window w(2, lo, hi);
    auto f = [](const Vec& x) { return std::sin(x[0]) * std::exp(-x[1]); };
    double expected = (1.0 - std::cos(2.0)) * (1.0 - std::exp(-3.0));
    CHECK(integrate_window(f, w, 24) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("bump integrals converge at the default order") {
    TorusDomain dom(2, 4.0);
    Vec c{};
    c[0] = 2.0;
    c[1] = 2.0;
    ScalarField bump = ScalarField::bump(dom, c, 1.2, -0.8);
    Window box = Window::whole_box(dom);
    auto f = [&](const Vec& x) { return std::expm1(bump.value(x)); };
    QuadResult r = integrate_window_checked(f, box, 32, 48, 1e-8);
    double reference = integrate_window(f, box, 48, 10);
    CHECK(r.value == doctest::Approx(reference).epsilon(1e-9));
    CHECK(r.error < 1e-8 * std::abs(r.value));

    // an integrand the low orders visibly disagree on trips the check
    auto wiggle = [](const Vec& x) { return std::cos(7.0 * x[0] * x[1]); };
    CHECK_THROWS_AS(integrate_window_checked(wiggle, box, 4, 6, 1e-8, 1), QuadratureError);
}

TEST_CASE("snapshot round trip is bit exact") {
    TorusDomain dom(3, 6.75);
    Rng rng(8, 0);
    Configuration g(dom);
    Window box = Window::whole_box(dom);
    for (int i = 0; i < 25; ++i) g.push_back_unchecked(rng.uniform_in(box));

    std::stringstream ss;
    write_snapshot(ss, g);
    Configuration back = read_snapshot(ss);
    CHECK(back.domain().d == 3);
    CHECK(back.domain().L == 6.75);
    REQUIRE(back.size() == g.size());
    for (size_t i = 0; i < g.size(); ++i) CHECK(back.point(i) == g.point(i));
}

TEST_CASE("sample set and trajectory round trips") {
    TorusDomain dom(2, 4.0);
    Rng rng(9, 0);
    Window box = Window::whole_box(dom);
    std::vector<Configuration> samples;
    for (int s = 0; s < 5; ++s) {
        Configuration g(dom);
        for (int i = 0; i < s + 1; ++i) g.push_back_unchecked(rng.uniform_in(box));
        samples.push_back(g);
    }
    std::stringstream ss;
    write_sample_set(ss, "confsim sample-set v1 z=2 seed=9", samples);
    std::string manifest;
    auto back = read_sample_set(ss, &manifest);
    CHECK(manifest.find("z=2") != std::string::npos);
    REQUIRE(back.size() == samples.size());
    for (size_t s = 0; s < samples.size(); ++s) CHECK(multiset_equal(back[s], samples[s]));

    Trajectory traj;
    traj.frames.emplace_back(0.0, samples[0]);
    traj.frames.emplace_back(0.125, samples[1]);
    std::stringstream ts;
    write_trajectory(ts, "confsim trajectory v1 seed=9", traj);
    Trajectory traj_back = read_trajectory(ts);
    REQUIRE(traj_back.frames.size() == 2);
    CHECK(traj_back.frames[1].first == 0.125);
    CHECK(multiset_equal(traj_back.frames[1].second, samples[1]));
}

TEST_CASE("config parsing with diagnostics") {
    std::stringstream ss(R"([domain]
d = 2
L = 4.0

[intensity]
kind = uniform
z = 1.5

[mixing]
atom = 1.0 0.5
atom = 3.0 0.5

[run]
seed = 777
)");
    RunConfig rc = RunConfig::from_config(ConfigFile::parse(ss));
    CHECK(rc.dom.d == 2);
    CHECK(rc.dom.L == 4.0);
    CHECK(rc.z == 1.5);
    CHECK(rc.seed == 777);
    REQUIRE(rc.mixing.has_value());
    CHECK(rc.mixing->atoms.size() == 2);
    CHECK(rc.window.volume() == doctest::Approx(16.0));
    CHECK_FALSE(rc.config_hash.empty());

    std::stringstream bad1("[domain\nd = 2\n");
    CHECK_THROWS_WITH_AS(static_cast<void>(ConfigFile::parse(bad1)),
                         doctest::Contains("line 1"), ConfigError);
    std::stringstream bad2("[domain]\nd 2\n");
    CHECK_THROWS_WITH_AS(static_cast<void>(ConfigFile::parse(bad2)),
                         doctest::Contains("line 2"), ConfigError);
    std::stringstream bad3("[intensity]\nkind = density\nbump = 1 2\n");
    CHECK_THROWS_AS(static_cast<void>(RunConfig::from_config(ConfigFile::parse(bad3))), ConfigError);
}

TEST_CASE("json and csv emission carry the record fields") {
    IdentityRecord rec;
    rec.test = "poisson-mean-2.18";
    rec.params = "d=2 L=4 z=2";
    rec.seed = 42;
    rec.n = 1000;
    rec.mean = 31.9;
    rec.std_error = 0.05;
    rec.target = 32.0;
    rec.z = -2.0;
    rec.finalize();
    CHECK(rec.pass);

    std::string json = records_to_json({rec});
    for (const char* needle : {"poisson-mean-2.18", "params_hash", "\"seed\": 42", "\"pass\": true"})
        CHECK(json.find(needle) != std::string::npos);

    std::string csv = records_to_csv({rec});
    CHECK(csv.find("test,params_hash") == 0);
    CHECK(csv.find("poisson-mean-2.18") != std::string::npos);
}

TEST_CASE("format_double round trips exactly") {
    Rng rng(10, 0);
    for (int i = 0; i < 1000; ++i) {
        double v = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-12, 12));
        CHECK(std::stod(format_double(v)) == v);
    }
}
