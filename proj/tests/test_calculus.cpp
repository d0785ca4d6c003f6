#include <doctest.h>

#include <cmath>

#include "confsim/calculus.hpp"
#include "confsim/rng.hpp"

using namespace confsim;

namespace {

const TorusDomain kDom(2, 6.0);

Vec at(double x, double y) {
    Vec v{};
    v[0] = x;
    v[1] = y;
    return v;
}

Configuration random_config(size_t n, Rng& rng) {
    Configuration g(kDom);
    Window box = Window::whole_box(kDom);
    for (size_t i = 0; i < n; ++i) g.push_back_unchecked(rng.uniform_in(box));
    return g;
}

ScalarField bump(double cx, double cy, double radius, double amp) {
    return ScalarField::bump(kDom, at(cx, cy), radius, amp);
}

VectorFieldV0 sample_field() {
    VectorFieldV0 v(kDom);
    v.add_axis_component(0, bump(3.0, 3.0, 1.6, 0.8));
    v.add_axis_component(1, bump(2.0, 4.0, 1.3, -0.5));
    v.add_gradient_term(bump(4.0, 2.0, 1.4, 0.6));
    return v;
}

CylinderFunction sample_cyl() {
    // tanh(p0 * p1 + 0.5 p2) over three bumps
    Expr g = tanh(Expr::var(0) * Expr::var(1) + 0.5 * Expr::var(2));
    return CylinderFunction(g, {bump(2.5, 2.5, 1.5, 1.0), bump(3.5, 3.0, 1.2, -0.8),
                                bump(1.5, 4.0, 1.1, 0.7)});
}

}  // namespace

TEST_CASE("bump derivatives match finite differences") {
    ScalarField f = bump(3.0, 3.0, 1.4, 1.3);
    Rng rng(41, 0);
    const double h = 1e-6;
    for (int k = 0; k < 200; ++k) {
        Vec x = at(rng.uniform(0, 6), rng.uniform(0, 6));
        Vec g = f.gradient(x);
        double lap = 0;
        for (int a = 0; a < 2; ++a) {
            Vec xp = x, xm = x;
            xp[a] += h;
            xm[a] -= h;
            double fp = f.value(xp), fm = f.value(xm), f0 = f.value(x);
            CHECK(g[a] == doctest::Approx((fp - fm) / (2 * h)).epsilon(2e-5));
            lap += (fp - 2 * f0 + fm) / (h * h);
        }
        if (std::abs(lap) > 1e-3 || std::abs(f.laplacian(x)) > 1e-3)
            CHECK(f.laplacian(x) == doctest::Approx(lap).epsilon(1e-3));
    }
    // support ends at the radius
    CHECK(f.value(at(4.5, 3.0)) == 0.0);
    CHECK(norm(f.gradient(at(4.41, 3.0))) == 0.0);
}

TEST_CASE("outer expression algebra differentiates exactly") {
    Expr g = tanh(Expr::var(0) * Expr::var(1)) + 2.0 * pow_int(Expr::var(0), 3);
    std::vector<double> args{0.7, -0.4};
    double v = g.eval(args);
    CHECK(v == doctest::Approx(std::tanh(-0.28) + 2.0 * 0.343).epsilon(1e-14));

    double t = std::tanh(0.7 * -0.4);
    double d0 = (1 - t * t) * -0.4 + 6.0 * 0.49;
    double d1 = (1 - t * t) * 0.7;
    CHECK(g.diff(0).eval(args) == doctest::Approx(d0).epsilon(1e-14));
    CHECK(g.diff(1).eval(args) == doctest::Approx(d1).epsilon(1e-14));

    // second derivative of tanh(x0 x1) in x0: -2 t (1-t^2) x1^2
    double d00 = -2 * t * (1 - t * t) * 0.16 + 12.0 * 0.7;
    CHECK(g.diff(0).diff(0).eval(args) == doctest::Approx(d00).epsilon(1e-13));
}

TEST_CASE("eval_cyl examples") {
    CylinderFunction F = sample_cyl();
    Configuration empty(kDom);
    CHECK(eval_cyl(F, empty) == doctest::Approx(std::tanh(0.0)));

    ScalarField f = bump(2.5, 2.5, 1.5, 1.0);
    CylinderFunction identity = CylinderFunction::pairing(f);
    Rng rng(42, 0);
    Configuration g = random_config(7, rng);
    CHECK(eval_cyl(identity, g) ==
          doctest::Approx(pair_sum([&](const Vec& x) { return f.value(x); }, g)).epsilon(1e-13));

    // direct recomposition oracle
    double p0 = 0, p1 = 0, p2 = 0;
    for (size_t i = 0; i < g.size(); ++i) {
        p0 += F.inner()[0].value(g.point(i));
        p1 += F.inner()[1].value(g.point(i));
        p2 += F.inner()[2].value(g.point(i));
    }
    CHECK(eval_cyl(F, g) == doctest::Approx(std::tanh(p0 * p1 + 0.5 * p2)).epsilon(1e-13));
}

TEST_CASE("grad_gamma basics") {
    Configuration empty(kDom);
    CylinderFunction c = CylinderFunction::constant(kDom, 3.0);
    Rng rng(43, 0);
    Configuration g = random_config(9, rng);
    TangentVector zero = grad_gamma(c, g);
    for (const auto& v : zero.at) CHECK(norm(v) == 0.0);

    ScalarField f = bump(2.5, 2.5, 1.5, 1.0);
    CylinderFunction identity = CylinderFunction::pairing(f);
    TangentVector grad = grad_gamma(identity, g);
    REQUIRE(grad.at.size() == g.size());
    for (size_t i = 0; i < g.size(); ++i) {
        Vec expect = f.gradient(g.point(i));
        CHECK(norm(grad.at[i] - expect) < 1e-14);
    }
}

TEST_CASE("lift_flow basics and group property") {
    Rng rng(44, 0);
    Configuration g = random_config(8, rng);
    VectorFieldV0 v = sample_field();

    CHECK(multiset_equal(lift_flow(v, 0.0, g), g));
    VectorFieldV0 zero(kDom);
    CHECK(multiset_equal(lift_flow(zero, 0.7, g), g));

    // psi_{t+s} = psi_t o psi_s
    Configuration one_leg = lift_flow(v, 0.35, g);
    Configuration two_leg = lift_flow(v, 0.15, lift_flow(v, 0.2, g));
    REQUIRE(one_leg.size() == two_leg.size());
    for (size_t i = 0; i < one_leg.size(); ++i)
        CHECK(kDom.distance(one_leg.point(i), two_leg.point(i)) < 1e-8);

    // points outside the support stay fixed
    Configuration far(kDom);
    far.push_back_unchecked(at(0.2, 0.2));
    CHECK(multiset_equal(lift_flow(v, 0.5, far), far));
}

TEST_CASE("directional derivative equals the flow derivative") {
    Rng rng(45, 0);
    CylinderFunction F = sample_cyl();
    VectorFieldV0 v = sample_field();

    Configuration empty(kDom);
    CHECK(directional_derivative(CylinderFunction::constant(kDom, 2.0), v, empty) == 0.0);

    // identity outer: sum over points of <grad f, v>
    ScalarField f = bump(2.5, 2.5, 1.5, 1.0);
    CylinderFunction identity = CylinderFunction::pairing(f);
    Configuration g = random_config(10, rng);
    double direct = 0;
    for (size_t i = 0; i < g.size(); ++i)
        direct += dot(f.gradient(g.point(i)), v.value(g.point(i)));
    CHECK(directional_derivative(identity, v, g) == doctest::Approx(direct).epsilon(1e-13));

    // central flow difference over 100 random cases
    const double t = 1e-4;
    for (int k = 0; k < 100; ++k) {
        Configuration gk = random_config(2 + k % 9, rng);
        double analytic = directional_derivative(F, v, gk);
        double fd =
            (eval_cyl(F, lift_flow(v, t, gk)) - eval_cyl(F, lift_flow(v, -t, gk))) / (2 * t);
        CHECK(analytic == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("div_gamma basics and representation independence") {
    Rng rng(46, 0);
    VectorFieldV0 v = sample_field();
    Configuration g = random_config(11, rng);

    // constant coefficient: div of the plain field, paired with gamma
    CylinderFunction onefun = CylinderFunction::constant(kDom, 1.0);
    double div_pairing = 0;
    for (size_t i = 0; i < g.size(); ++i) div_pairing += v.divergence(g.point(i));
    CHECK(div_gamma({{onefun, v}}, g) == doctest::Approx(div_pairing).epsilon(1e-13));

    Configuration empty(kDom);
    CHECK(div_gamma({{sample_cyl(), v}}, empty) == 0.0);

    // same V written three ways
    CylinderFunction F = sample_cyl();
    CylinderFunction G = CylinderFunction::pairing(bump(3.2, 2.2, 1.3, 0.9));
    std::vector<VfcTerm> rep1 = {{F, v}, {G, v}};
    // F + G as one cylinder function: outer sum over concatenated inner fields
    std::vector<ScalarField> inner = F.inner();
    for (const auto& fld : G.inner()) inner.push_back(fld);
    Expr shifted_g = G.outer().compose({Expr::var(3)});
    CylinderFunction sumFG(F.outer() + shifted_g, inner);
    std::vector<VfcTerm> rep2 = {{sumFG, v}};
    std::vector<VfcTerm> rep3 = {{F, v.scaled(0.5)}, {F, v.scaled(0.5)}, {G, v}};

    double d1 = div_gamma(rep1, g);
    double d2 = div_gamma(rep2, g);
    double d3 = div_gamma(rep3, g);
    CHECK(d1 == doctest::Approx(d2).epsilon(1e-10));
    CHECK(d1 == doctest::Approx(d3).epsilon(1e-10));
}

TEST_CASE("laplacian formulas agree") {
    Rng rng(47, 0);
    ScalarField f = bump(2.5, 2.5, 1.5, 1.0);

    // identity outer: only the <Lap f, gamma> term survives
    CylinderFunction identity = CylinderFunction::pairing(f);
    Configuration g = random_config(9, rng);
    double pairing = 0;
    for (size_t i = 0; i < g.size(); ++i) pairing += f.laplacian(g.point(i));
    CHECK(laplacian_gamma(identity, g) == doctest::Approx(pairing).epsilon(1e-12));

    // F = <f,.>^2: 2<|grad f|^2,gamma> + 2<f,gamma><Lap f,gamma>
    CylinderFunction square(pow_int(Expr::var(0), 2), {f});
    double grad2 = 0, fsum = 0;
    for (size_t i = 0; i < g.size(); ++i) {
        grad2 += norm2(f.gradient(g.point(i)));
        fsum += f.value(g.point(i));
    }
    CHECK(laplacian_gamma(square, g) ==
          doctest::Approx(2 * grad2 + 2 * fsum * pairing).epsilon(1e-12));

    // eq (2.24) equals div (2.13) applied to the gradient representation
    CylinderFunction F = sample_cyl();
    for (int k = 0; k < 40; ++k) {
        Configuration gk = random_config(1 + k % 12, rng);
        double direct = laplacian_gamma(F, gk);
        double via_div = div_gamma(grad_representation(F), gk);
        CHECK(direct == doctest::Approx(via_div).epsilon(1e-10));
    }
}

TEST_CASE("product and chain rules hold to 1e-10") {
    Rng rng(48, 0);
    CylinderFunction F = sample_cyl();
    CylinderFunction G = CylinderFunction::pairing(bump(3.2, 2.2, 1.3, 0.9));
    VectorFieldV0 v = sample_field();

    for (int k = 0; k < 50; ++k) {
        Configuration g = random_config(1 + k % 10, rng);
        CylinderFunction FG = CylinderFunction::product(F, G);
        double lhs = directional_derivative(FG, v, g);
        double rhs = eval_cyl(F, g) * directional_derivative(G, v, g) +
                     eval_cyl(G, g) * directional_derivative(F, v, g);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));

        // chain rule with chi = tanh
        CylinderFunction chiF = CylinderFunction::compose_scalar(tanh(Expr::var(0)), F);
        double f_val = eval_cyl(F, g);
        double chi_prime = 1.0 - std::tanh(f_val) * std::tanh(f_val);
        CHECK(directional_derivative(chiF, v, g) ==
              doctest::Approx(chi_prime * directional_derivative(F, v, g)).epsilon(1e-10));
    }
}

TEST_CASE("L_v_phi equals the naive double loop") {
    PairPotential lj = PairPotential::lennard_jones(1.0, 1.0, 2.5, 0.5);
    VectorFieldV0 v = sample_field();
    Rng rng(49, 0);

    Configuration empty(kDom);
    CHECK(L_v_phi(lj, v, empty) == 0.0);
    Configuration single(kDom);
    single.push_back_unchecked(at(2.0, 2.0));
    CHECK(L_v_phi(lj, v, single) == 0.0);

    Configuration two(kDom);
    two.push_back_unchecked(at(2.0, 2.0));
    two.push_back_unchecked(at(3.1, 2.4));
    Vec disp = kDom.displacement(two.point(0), two.point(1));
    double expected = -dot(lj.grad(disp), v.value(two.point(0)) - v.value(two.point(1)));
    CHECK(L_v_phi(lj, v, two) == doctest::Approx(expected).epsilon(1e-13));

    for (int trial = 0; trial < 5; ++trial) {
        Configuration g(kDom);
        Window box = Window::whole_box(kDom);
        while (g.size() < 100) {
            Vec x = rng.uniform_in(box);
            bool ok = true;
            for (size_t i = 0; i < g.size() && ok; ++i)
                if (kDom.distance(x, g.point(i)) < 0.8) ok = false;
            if (ok) g.push_back_unchecked(x);
        }
        double naive = 0;
        for (size_t i = 0; i < g.size(); ++i)
            for (size_t j = i + 1; j < g.size(); ++j) {
                Vec d = kDom.displacement(g.point(i), g.point(j));
                if (norm(d) < lj.r_cut())
                    naive -= dot(lj.grad(d), v.value(g.point(i)) - v.value(g.point(j)));
            }
        CHECK(L_v_phi(lj, v, g) == doctest::Approx(naive).epsilon(1e-12));
    }

    PairPotential hc = PairPotential::hard_core(1.0);
    Configuration contact(kDom);
    contact.push_back_unchecked(at(2.0, 2.0));
    contact.push_back_unchecked(at(2.5, 2.0));
    CHECK_THROWS_AS(L_v_phi(hc, v, contact), std::domain_error);
}

TEST_CASE("B_v_phi composes the two terms") {
    VectorFieldV0 v = sample_field();
    Rng rng(50, 0);
    Configuration g = random_config(12, rng);

    double div_pairing = 0;
    for (size_t i = 0; i < g.size(); ++i) div_pairing += v.divergence(g.point(i));
    CHECK(B_v_phi(PairPotential::zero(), v, g) == doctest::Approx(div_pairing).epsilon(1e-13));

    Configuration empty(kDom);
    CHECK(B_v_phi(PairPotential::zero(), v, empty) == 0.0);

    PairPotential lj = PairPotential::lennard_jones(1.0, 1.0, 2.5, 0.5);
    CHECK(B_v_phi(lj, v, g) ==
          doctest::Approx(L_v_phi(lj, v, g) + div_pairing).epsilon(1e-12));
}

TEST_CASE("generator reduces to the laplacian and matches the drift form") {
    Rng rng(51, 0);
    CylinderFunction F = sample_cyl();
    PairPotential lj = PairPotential::lennard_jones(1.0, 1.0, 2.5, 0.5);

    Configuration g = random_config(10, rng);
    CHECK(generator_apply(PairPotential::zero(), F, g) ==
          doctest::Approx(laplacian_gamma(F, g)).epsilon(1e-13));

    Configuration single(kDom);
    single.push_back_unchecked(at(2.5, 2.5));
    CHECK(generator_apply(lj, F, single) ==
          doctest::Approx(laplacian_gamma(F, single)).epsilon(1e-13));

    // LF = Lap F + sum_x <b(x), (grad F)(x)> with b from the dynamics drift
    for (int k = 0; k < 10; ++k) {
        Configuration gk(kDom);
        Window box = Window::whole_box(kDom);
        while (gk.size() < 14) {
            Vec x = rng.uniform_in(box);
            bool ok = true;
            for (size_t i = 0; i < gk.size() && ok; ++i)
                if (kDom.distance(x, gk.point(i)) < 0.8) ok = false;
            if (ok) gk.push_back_unchecked(x);
        }
        auto drift = drift_field(lj, kDom, config_points(gk));
        TangentVector grad = grad_gamma(F, gk);
        double expected = laplacian_gamma(F, gk);
        for (size_t i = 0; i < gk.size(); ++i) expected += dot(drift[i], grad.at[i]);
        CHECK(generator_apply(lj, F, gk) == doctest::Approx(expected).epsilon(1e-11));
    }
}
