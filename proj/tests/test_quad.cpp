#include <doctest.h>

#include <cmath>
#include <random>

#include "meroconv/geometry.hpp"
#include "meroconv/proj_map.hpp"

using namespace mero;

namespace {

SparsePoly mono1(std::vector<long> exps, GaussianRational c = GaussianRational(1)) {
    ExponentVector e(exps.begin(), exps.end());
    return SparsePoly::monomial(static_cast<int>(exps.size()), e, c);
}

LiftEvaluator lift_1_z() {
    // F = (1, z)
    return LiftEvaluator::from_tuple(
        PolyTuple({SparsePoly::constant(1, GaussianRational(1)), SparsePoly::variable(1, 0)}));
}

LiftEvaluator lift_z_z2() {
    // F = (z, z^2), the non-reduced lift of [1:z]
    return LiftEvaluator::from_tuple(PolyTuple({mono1({1}), mono1({2})}));
}

}  // namespace

TEST_CASE("gauss-legendre integrates polynomials exactly") {
    auto r = gauss_legendre_on(8, 0.0, 2.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i)
        acc += r.weights[i] * std::pow(r.nodes[i], 7);
    CHECK(acc == doctest::Approx(std::pow(2.0, 8) / 8.0).epsilon(1e-13));
}

TEST_CASE("argument principle: z^k on |z| = 1/2 counts k, k = 1..12") {
    for (int k = 1; k <= 12; ++k) {
        auto cp = ComplexPoly::from_univariate(mono1({k}), 0);
        ContourSpec c;
        c.radius = 0.5;
        auto rep = zero_count_contour(cp.handle(), c);
        REQUIRE(rep.ok);
        CHECK(rep.count == k);
        CHECK(rep.residual < 1e-6);
    }
}

TEST_CASE("argument principle: nonvanishing constant counts 0") {
    ScalarFunction h;
    h.f = [](std::complex<double>) { return std::complex<double>(2.5, -1.0); };
    ContourSpec c;
    auto rep = zero_count_contour(h, c);
    REQUIRE(rep.ok);
    CHECK(rep.count == 0);
    CHECK(rep.residual < 1e-9);
}

TEST_CASE("argument principle: P(z, z - 1/k) bounded by deg P") {
    // P(a, b) = a^2 - 2 b^2 + a b; h_k(z) = P(z, z - 1/k)
    for (int k : {2, 5, 20, 200}) {
        double t = 1.0 / k;
        ComplexPoly h;  // (z^2 - 2(z-t)^2 + z(z-t)) expanded: coefficient form
        // z^2 - 2(z^2 - 2tz + t^2) + z^2 - tz = -2t^2 + (4t - t) z + 0 z^2
        h.coeffs = {std::complex<double>(-2.0 * t * t, 0.0), std::complex<double>(3.0 * t, 0.0),
                    std::complex<double>(0.0, 0.0)};
        ContourSpec c;
        c.radius = 0.5;
        auto rep = zero_count_contour(h.handle(), c);
        REQUIRE(rep.ok);
        CHECK(rep.count <= 2);
        CHECK(rep.count >= 0);
    }
}

TEST_CASE("argument principle invariant under nonvanishing multiplier") {
    std::mt19937_64 rng(789);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int it = 0; it < 10; ++it) {
        int k = 1 + it % 4;
        // q(z) = prod (z - w_i) with |w_i| > 1.5: nonvanishing on the closed disk
        ComplexPoly q;
        q.coeffs = {1.0};
        for (int j = 0; j < 2; ++j) {
            std::complex<double> w = std::polar(1.6 + 0.5 * std::abs(U(rng)), M_PI * U(rng));
            ComplexPoly next;
            next.coeffs.assign(q.coeffs.size() + 1, 0.0);
            for (std::size_t i = 0; i < q.coeffs.size(); ++i) {
                next.coeffs[i + 1] += q.coeffs[i];
                next.coeffs[i] -= w * q.coeffs[i];
            }
            q = next;
        }
        // h(z) = z^k * q(z) on |z| = 1
        ComplexPoly h;
        h.coeffs.assign(q.coeffs.size() + k, 0.0);
        for (std::size_t i = 0; i < q.coeffs.size(); ++i) h.coeffs[i + k] = q.coeffs[i];
        ContourSpec c;
        c.radius = 1.0;
        auto base = zero_count_contour(ComplexPoly{{std::complex<double>(0, 0), 1.0}}.handle(), c);
        (void)base;
        auto rep = zero_count_contour(h.handle(), c);
        REQUIRE(rep.ok);
        CHECK(rep.count == k);
    }
}

TEST_CASE("argument principle: near-vanishing on contour is an error") {
    auto cp = ComplexPoly::from_univariate(mono1({1}) - SparsePoly::constant(1, GaussianRational(1, 2)),
                                           0);
    ContourSpec c;
    c.radius = 0.5;  // zero at 0.5 sits on the contour
    auto rep = zero_count_contour(cp.handle(), c);
    CHECK(!rep.ok);
}

TEST_CASE("FS area interior: [1:z] matches r^2/(1+r^2)") {
    auto lift = lift_1_z();
    for (double r : {0.5, 1.0, 2.0}) {
        ContourSpec d;
        d.radius = r;
        auto rep = fs_area_interior(lift, d);
        CHECK(rep.value == doctest::Approx(r * r / (1 + r * r)).epsilon(1e-8));
    }
}

TEST_CASE("FS area interior: constant map has zero area") {
    auto lift = LiftEvaluator::from_tuple(PolyTuple(
        {SparsePoly::constant(1, GaussianRational(2)), SparsePoly::constant(1, GaussianRational(3))}));
    ContourSpec d;
    d.radius = 1.0;
    auto rep = fs_area_interior(lift, d);
    CHECK(std::abs(rep.value) < 1e-12);
}

TEST_CASE("FS area interior: [1:z^2] matches the radial closed form 2r^4/(1+r^4)") {
    auto lift = LiftEvaluator::from_tuple(
        PolyTuple({SparsePoly::constant(1, GaussianRational(1)), mono1({2})}));
    for (double r : {0.6, 1.0, 1.7}) {
        ContourSpec d;
        d.radius = r;
        auto rep = fs_area_interior(lift, d);
        double oracle = 2.0 * std::pow(r, 4) / (1 + std::pow(r, 4));
        CHECK(rep.value == doctest::Approx(oracle).epsilon(1e-8));
    }
}

TEST_CASE("FS area normalization: whole line has area 1") {
    auto lift = lift_1_z();
    ContourSpec d;
    d.radius = 100.0;
    auto rep = fs_area_interior(lift, d);
    CHECK(std::abs(rep.value - 1.0) < 1e-3);
}

TEST_CASE("FS area boundary matches interior for [1:z]") {
    auto lift = lift_1_z();
    for (double r : {0.5, 1.0, 2.0}) {
        ContourSpec c;
        c.radius = r;
        auto rep = fs_area_boundary(lift, c);
        REQUIRE(rep.ok);
        CHECK(rep.lift_zero_count == 0);
        CHECK(rep.value == doctest::Approx(r * r / (1 + r * r)).epsilon(1e-9));
    }
}

TEST_CASE("FS area boundary: non-reduced lift (z, z^2) subtracts N_F = 1") {
    auto lift = lift_z_z2();
    for (double r : {0.5, 1.0, 2.0}) {
        ContourSpec c;
        c.radius = r;
        auto rep = fs_area_boundary(lift, c);
        REQUIRE(rep.ok);
        CHECK(rep.lift_zero_count == 1);
        CHECK(rep.value == doctest::Approx(r * r / (1 + r * r)).epsilon(1e-9));
        // the z factor adds exactly 1 to the boundary integral
        CHECK(rep.boundary_integral ==
              doctest::Approx(1.0 + r * r / (1 + r * r)).epsilon(1e-9));
    }
}

TEST_CASE("FS area boundary: nonvanishing constant lift has zero area") {
    auto lift = LiftEvaluator::from_tuple(PolyTuple(
        {SparsePoly::constant(1, GaussianRational(1)), SparsePoly::constant(1, GaussianRational(5, 3))}));
    ContourSpec c;
    c.radius = 1.0;
    auto rep = fs_area_boundary(lift, c);
    REQUIRE(rep.ok);
    CHECK(std::abs(rep.value) < 1e-10);
    CHECK(rep.lift_zero_count == 0);
}

TEST_CASE("FS area boundary: black-box lift goes through generic combinations") {
    auto poly = lift_1_z();
    auto bb = LiftEvaluator::black_box(1, 2, [](const VectorXcd& z) {
        VectorXcd F(2);
        F(0) = 1.0;
        F(1) = z(0);
        return F;
    });
    ContourSpec c;
    c.radius = 0.5;
    auto rep = fs_area_boundary(bb, c);
    REQUIRE(rep.ok);
    CHECK(rep.lift_zero_count == 0);
    CHECK(rep.value == doctest::Approx(0.25 / 1.25).epsilon(1e-6));
}

TEST_CASE("mixed MA mass: log ||z||^2 in C^2 has no order-2 mass off the origin") {
    auto lift = LiftEvaluator::from_tuple(PolyTuple({mono1({1, 0}), mono1({0, 1})}));
    LogNormPotential u(lift);
    BallSpec ball;
    ball.center = {0.0, 0.0};
    ball.radius = 0.8;
    ball.eps = 0.02;
    ball.exclusion.points.push_back({0.0, 0.0});
    auto rep = mixed_ma_mass(u, ball, 2, MassOptions{true, 3});
    CHECK(std::abs(rep.value) < 1e-10);
    CHECK(rep.min_density > -1e-8);
}

TEST_CASE("mixed MA mass: order-1 mass of log ||z||^2 in C^2 is pi r^2") {
    auto lift = LiftEvaluator::from_tuple(PolyTuple({mono1({1, 0}), mono1({0, 1})}));
    LogNormPotential u(lift);
    for (double r : {0.5, 0.9}) {
        BallSpec ball;
        ball.center = {0.0, 0.0};
        ball.radius = r;
        ball.eps = 0.01;
        ball.exclusion.points.push_back({0.0, 0.0});
        ball.radial_nodes = 24;
        ball.angular_nodes = 12;
        auto rep = mixed_ma_mass(u, ball, 1, MassOptions{true, 3});
        CHECK(rep.value == doctest::Approx(M_PI * r * r).epsilon(2e-3));
    }
}

TEST_CASE("mixed MA mass: constant lift vanishes at every order") {
    auto lift = LiftEvaluator::from_tuple(PolyTuple(
        {SparsePoly::constant(2, GaussianRational(1)), SparsePoly::constant(2, GaussianRational(2))}));
    PolydiskSpec dom;
    dom.center = {0.0, 0.0};
    dom.radii = {1.0, 1.0};
    for (int p : {1, 2}) {
        auto rep = mixed_ma_mass(lift, dom, p);
        CHECK(std::abs(rep.value) < 1e-12);
    }
}

TEST_CASE("mixed MA mass scale invariance (20 seeded cases, 1%)") {
    std::mt19937_64 rng(20240818);
    std::uniform_int_distribution<long> co(-3, 3);
    std::uniform_int_distribution<long> ex(0, 2);
    for (int it = 0; it < 20; ++it) {
        // random 3-component lift in C^2 with no zeros near the polydisk:
        // constant term forced nonzero
        std::vector<SparsePoly> comps;
        for (int j = 0; j < 3; ++j) {
            SparsePoly p(2);
            p.add_term(ExponentVector{0, 0}, GaussianRational(2 + (j == 0 ? 1 : 0)));
            for (int t = 0; t < 2; ++t) {
                long a = co(rng), b = co(rng);
                p.add_term(ExponentVector{ex(rng), ex(rng)}, GaussianRational(BigRat(a), BigRat(b)));
            }
            comps.push_back(p);
        }
        PolyTuple F(comps);
        PolyTuple F3;
        for (const auto& c : F.comps) F3.comps.push_back(c.scaled(GaussianRational(-3, 1)));
        PolydiskSpec dom;
        dom.center = {0.0, 0.0};
        dom.radii = {0.6, 0.6};
        dom.radial_nodes = 8;
        dom.angular_nodes = 8;
        int p = 1 + it % 2;
        auto m1 = mixed_ma_mass(LiftEvaluator::from_tuple(F), dom, p);
        auto m2 = mixed_ma_mass(LiftEvaluator::from_tuple(F3), dom, p);
        double scale = std::max({1e-9, std::abs(m1.value), std::abs(m2.value)});
        CHECK(std::abs(m1.value - m2.value) / scale < 0.01);
    }
}

TEST_CASE("graph volume: constant map on the unit polydisk is the Euclidean term") {
    auto lift = LiftEvaluator::from_tuple(PolyTuple(
        {SparsePoly::constant(2, GaussianRational(1)), SparsePoly::constant(2, GaussianRational(1, 2))}));
    PolydiskSpec dom;
    dom.center = {0.0, 0.0};
    dom.radii = {1.0, 1.0};
    auto rep = graph_volume(lift, dom);
    // int omega_e^2 over the unit polydisk = 2 * pi^2 (omega_e^n = n! dV)
    CHECK(rep.value == doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-6));
}

TEST_CASE("graph volume: [1:z] over the unit disk is Euclidean area + 1/2") {
    auto lift = lift_1_z();
    PolydiskSpec dom;
    dom.center = {0.0};
    dom.radii = {1.0};
    dom.radial_nodes = 32;
    dom.angular_nodes = 32;
    auto rep = graph_volume(lift, dom);
    CHECK(rep.value == doctest::Approx(M_PI + 0.5).epsilon(1e-6));
}

TEST_CASE("king residue: identity lift has atom 1 at both radii") {
    auto lift = LiftEvaluator::from_tuple(PolyTuple({mono1({1, 0}), mono1({0, 1})}));
    for (double r : {0.3, 0.7}) {
        auto rep = king_residue_check(lift, 0.0, 0.0, r);
        REQUIRE(rep.ok);
        CHECK(std::abs(rep.atom - 1.0) < 1e-3);
    }
}

TEST_CASE("king residue: (z1^2, z2^2) has atom 4") {
    auto lift = LiftEvaluator::from_tuple(PolyTuple({mono1({2, 0}), mono1({0, 2})}));
    auto rep = king_residue_check(lift, 0.0, 0.0, 0.4);
    REQUIRE(rep.ok);
    CHECK(std::abs(rep.atom - 4.0) < 5e-3);
}

TEST_CASE("king residue: nonvanishing lift has atom 0") {
    auto lift = LiftEvaluator::from_tuple(PolyTuple(
        {SparsePoly::constant(2, GaussianRational(1)), mono1({1, 0})}));
    auto rep = king_residue_check(lift, 0.0, 0.0, 0.5);
    CHECK(std::abs(rep.atom) < 1e-3);
}

TEST_CASE("rashkovskii: exact atoms k/2 for even k") {
    BallSpec dom;
    dom.center = {0.0, 0.0, 0.0};
    dom.radius = 0.5;
    dom.samples = 2000;  // atom path only
    for (int k : {2, 4, 6}) {
        auto rep = rashkovskii_mass(k, 0.0, dom);
        REQUIRE(rep.exact_atom.has_value());
        CHECK(*rep.exact_atom == BigRat(k, 2));
    }
}

TEST_CASE("rashkovskii: smoke Monte Carlo mass at eps = 0.1, k = 2") {
    BallSpec dom;
    dom.center = {0.0, 0.0, 0.0};
    dom.radius = 0.5;
    dom.samples = 400000;
    dom.seed = 777;
    dom.workers = 2;
    auto rep = rashkovskii_mass(2, 0.1, dom);
    // mass approaches the atom value 1 as eps -> 0; at eps = 0.1 expect order 1
    CHECK(rep.mc.value > 0.4);
    CHECK(rep.mc.value < 1.8);
    CHECK(rep.mc.est_error < 0.2 * rep.mc.value);
}

TEST_CASE("monte carlo determinism and volume sanity") {
    auto one = [](const std::vector<std::complex<double>>&) { return 1.0; };
    std::vector<std::complex<double>> c = {0.0, 0.0, 0.0};
    auto a = mc_ball_integral(one, c, 0.5, 100000, 42, 2);
    auto b = mc_ball_integral(one, c, 0.5, 100000, 42, 2);
    CHECK(a.value == b.value);
    double v6 = std::pow(M_PI, 3) / 6.0 * std::pow(0.5, 6);
    CHECK(a.value == doctest::Approx(v6).epsilon(1e-12));
}

TEST_CASE("wedge machinery is consistent with the mass engine") {
    // euclid ^ euclid = 2 dV
    PolydiskSpec dom;
    dom.center = {0.0, 0.0};
    dom.radii = {0.8, 0.5};
    dom.radial_nodes = 10;
    dom.angular_nodes = 10;
    double ee = wedge_mass_2d(euclidean_form2(), euclidean_form2(), dom);
    double leb = M_PI * 0.64 * M_PI * 0.25;
    CHECK(ee == doctest::Approx(2.0 * leb).epsilon(1e-10));

    // euclid ^ fs-pullback = order-1 mixed mass
    PolyTuple F({SparsePoly::constant(2, GaussianRational(1)), mono1({1, 0}),
                 mono1({0, 1}, GaussianRational(1, 2))});
    auto u = std::make_shared<LogNormPotential>(LiftEvaluator::from_tuple(F));
    double w = wedge_mass_2d(euclidean_form2(), fs_pullback_form2(u), dom);
    auto m = mixed_ma_mass(LiftEvaluator::from_tuple(F), dom, 1);
    CHECK(w == doctest::Approx(m.value).epsilon(1e-6));
}

TEST_CASE("lift evaluators: derivative validation invariant") {
    PolyTuple F({SparsePoly::constant(2, GaussianRational(1)), mono1({2, 1}),
                 mono1({0, 3}, GaussianRational(1, 3))});
    auto ev = LiftEvaluator::from_tuple(F);
    CHECK(ev.validate_derivatives(404, 20) < 1e-8);

    auto bb = LiftEvaluator::black_box(2, 2, [](const VectorXcd& z) {
        VectorXcd F2(2);
        F2(0) = std::exp(z(0)) + z(1);
        F2(1) = z(0) * z(1) + 1.0;
        return F2;
    });
    CHECK(bb.validate_derivatives(405, 20) < 1e-6);
}

TEST_CASE("roots via companion matrix") {
    // z^3 - 1: three cube roots of unity
    ComplexPoly p;
    p.coeffs = {-1.0, 0.0, 0.0, 1.0};
    auto rs = p.roots();
    REQUIRE(rs.size() == 3);
    for (auto r : rs) CHECK(std::abs(std::pow(r, 3) - 1.0) < 1e-10);
}
