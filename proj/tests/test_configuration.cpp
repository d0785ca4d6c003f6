#include <doctest.h>

#include <cmath>

#include "confsim/configuration.hpp"
#include "confsim/fields.hpp"
#include "confsim/rng.hpp"

using namespace confsim;

namespace {

Configuration random_config(const TorusDomain& dom, size_t n, Rng& rng) {
    Configuration g(dom);
    Window box = Window::whole_box(dom);
    for (size_t i = 0; i < n; ++i) g.push_back_unchecked(rng.uniform_in(box));
    return g;
}

}  // namespace

TEST_CASE("pair_sum examples") {
    TorusDomain dom(2, 5.0);
    Configuration empty(dom);
    auto f = [](const Vec& x) { return x[0] + 2.0 * x[1]; };
    CHECK(pair_sum(f, empty) == 0.0);

    Configuration single(dom);
    Vec p{};
    p[0] = 1.5;
    p[1] = 2.0;
    single.push_back_unchecked(p);
    CHECK(pair_sum(f, single) == doctest::Approx(5.5));

    // three explicit points against an explicit bump, direct 3-term oracle
    Vec c{};
    c[0] = 2.5;
    c[1] = 2.5;
    ScalarField bump = ScalarField::bump(dom, c, 1.5, 2.0);
    Configuration three(dom);
    Vec a{}, b{}, d{};
    a[0] = 2.0; a[1] = 2.0;
    b[0] = 3.0; b[1] = 2.8;
    d[0] = 0.5; d[1] = 0.5;
    three.push_back_unchecked(a);
    three.push_back_unchecked(b);
    three.push_back_unchecked(d);
    double oracle = bump.value(a) + bump.value(b) + bump.value(d);
    CHECK(pair_sum([&](const Vec& x) { return bump.value(x); }, three) == doctest::Approx(oracle));

    CHECK_THROWS_AS(pair_sum([](const Vec&) { return INFINITY; }, single), std::invalid_argument);
}

TEST_CASE("pair_sum is linear") {
    TorusDomain dom(2, 5.0);
    Rng rng(3, 0);
    Configuration g = random_config(dom, 17, rng);
    auto f = [](const Vec& x) { return std::sin(x[0]); };
    auto h = [](const Vec& x) { return x[1] * x[1]; };
    double lhs = pair_sum([&](const Vec& x) { return f(x) + 3.0 * h(x); }, g);
    CHECK(lhs == doctest::Approx(pair_sum(f, g) + 3.0 * pair_sum(h, g)).epsilon(1e-12));
}

TEST_CASE("count and restrict against a scan oracle") {
    TorusDomain dom(2, 4.0);
    Rng rng(11, 0);
    Window box = Window::whole_box(dom);
    Configuration empty(dom);
    CHECK(count_in(box, empty) == 0);

    Configuration g = random_config(dom, 40, rng);
    CHECK(count_in(box, g) == 40);

    Vec lo{}, hi{};
    lo[0] = 0.7; lo[1] = 1.1; hi[0] = 2.9; hi[1] = 3.3;
    Window w(2, lo, hi);
    size_t scan = 0;
    for (size_t i = 0; i < g.size(); ++i)
        if (w.contains(g.point(i))) ++scan;
    CHECK(count_in(w, g) == scan);

    Configuration r = restrict_to(g, w);
    CHECK(r.size() == scan);
    CHECK(count_in(w, r) == scan);
    CHECK(multiset_equal(restrict_to(g, box), g));

    // restriction composes as window intersection
    Vec lo2{}, hi2{};
    lo2[0] = 1.5; lo2[1] = 0.5; hi2[0] = 3.5; hi2[1] = 2.5;
    Window w2(2, lo2, hi2);
    CHECK(multiset_equal(restrict_to(restrict_to(g, w), w2), restrict_to(g, w.intersect(w2))));

    // disjoint window
    Vec lo3{}, hi3{};
    lo3[0] = 3.5; lo3[1] = 3.5; hi3[0] = 3.9; hi3[1] = 3.9;
    Configuration far(dom);
    Vec p{};
    p[0] = 1.0; p[1] = 1.0;
    far.push_back_unchecked(p);
    CHECK(restrict_to(far, Window(2, lo3, hi3)).empty());
}

TEST_CASE("count is additive over disjoint windows") {
    TorusDomain dom(1, 8.0);
    Rng rng(5, 0);
    Configuration g = random_config(dom, 60, rng);
    Vec a{}, b{}, c{}, d{};
    a[0] = 0.0; b[0] = 3.0; c[0] = 3.0; d[0] = 8.0;
    Window w1(1, a, b), w2(1, c, d);
    CHECK(count_in(w1, g) + count_in(w2, g) == g.size());
}

TEST_CASE("add and remove points keep multiset semantics") {
    TorusDomain dom(2, 4.0);
    Rng rng(21, 0);
    Configuration g = random_config(dom, 9, rng);
    Vec x{};
    x[0] = 1.25;
    x[1] = 3.75;

    Configuration grown = add_point(g, x);
    CHECK(grown.size() == 10);
    CHECK(multiset_equal(remove_point(grown, grown.size() - 1), g));

    Configuration single = add_point(Configuration(dom), x);
    CHECK(single.size() == 1);
    CHECK(single.point(0) == x);

    Vec lo{}, hi{};
    lo[0] = 1.0; lo[1] = 3.0; hi[0] = 2.0; hi[1] = 4.0;
    Window w(2, lo, hi);
    CHECK(count_in(w, grown) == count_in(w, g) + 1);

    CHECK_THROWS_AS(remove_point(g, 99), std::out_of_range);

    // add wraps out-of-box coordinates
    Vec raw{};
    raw[0] = 5.0;
    raw[1] = -1.0;
    Configuration wrapped = add_point(Configuration(dom), raw);
    CHECK(wrapped.point(0)[0] == doctest::Approx(1.0));
    CHECK(wrapped.point(0)[1] == doctest::Approx(3.0));
}

TEST_CASE("simplicity and exact multiset equality") {
    TorusDomain dom(1, 4.0);
    Configuration g(dom);
    Vec p{}, q{};
    p[0] = 1.0;
    q[0] = 2.0;
    g.push_back_unchecked(p);
    g.push_back_unchecked(q);
    CHECK(is_simple(g));

    Configuration dup = add_point(g, p);
    CHECK_FALSE(is_simple(dup));

    Configuration reordered(dom);
    reordered.push_back_unchecked(q);
    reordered.push_back_unchecked(p);
    CHECK(multiset_equal(g, reordered));

    Configuration nudged(dom);
    Vec p2{};
    p2[0] = std::nextafter(1.0, 2.0);
    nudged.push_back_unchecked(p2);
    nudged.push_back_unchecked(q);
    CHECK_FALSE(multiset_equal(g, nudged));  // bit-exact comparison
}
