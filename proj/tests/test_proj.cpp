#include <doctest.h>

#include <random>

#include "meroconv/proj_map.hpp"

using namespace mero;

namespace {

SparsePoly mono(int nvars, std::vector<long> exps, GaussianRational c = GaussianRational(1)) {
    ExponentVector e(exps.begin(), exps.end());
    return SparsePoly::monomial(nvars, e, c);
}

// f : [z0:z1:z2] -> [z0^2 z1 : z1^3 : z0^2 z2]
HomogRep deg2_map() {
    return HomogRep(PolyTuple({mono(3, {2, 1, 0}), mono(3, {0, 3, 0}), mono(3, {2, 0, 1})}), true);
}

// f : [z0:z1:z2] -> [z0^d z1 : z1^(d+1) : z0^d z2]
HomogRep degd_map(long d) {
    return HomogRep(PolyTuple({mono(3, {d, 1, 0}), mono(3, {0, d + 1, 0}), mono(3, {d, 0, 1})}), true);
}

// closed-form iterate [z0^(2^k) z1^(2^k-1) : z1^(2^(k+1)-1) : z0^(2^(k+1)-2) z2]
HomogRep deg2_iterate_closed_form(int k) {
    BigInt p = BigInt(1) << k, q = BigInt(1) << (k + 1);
    return HomogRep(PolyTuple({SparsePoly::monomial(3, {p, p - 1, 0}, GaussianRational(1)),
                               SparsePoly::monomial(3, {0, q - 1, 0}, GaussianRational(1)),
                               SparsePoly::monomial(3, {q - 2, 0, 1}, GaussianRational(1))}),
                    true);
}

HomogRep cremona_map() {
    return HomogRep(PolyTuple({mono(3, {0, 1, 1}), mono(3, {1, 0, 1}), mono(3, {1, 1, 0})}), true);
}

bool proj_equal(const HomogRep& a, const HomogRep& b) {
    if (a.tuple.size() != b.tuple.size()) return false;
    // reduced reps of the same map differ by one overall scalar
    GaussianRational lambda(0);
    for (int i = 0; i < a.tuple.size(); ++i) {
        const auto& pa = a.tuple.comps[i];
        const auto& pb = b.tuple.comps[i];
        if (pa.is_zero() != pb.is_zero()) return false;
        if (pa.is_zero()) continue;
        if (lambda.is_zero()) lambda = pa.leading_coeff_lex() / pb.leading_coeff_lex();
        if (pa != pb.scaled(lambda)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("reduce_rep strips the content") {
    // [z1 z0 : z1^2 : z1 z2] -> identity
    HomogRep raw(PolyTuple({mono(3, {1, 1, 0}), mono(3, {0, 2, 0}), mono(3, {0, 1, 1})}));
    auto red = reduce_rep(raw);
    CHECK(red.reduced);
    CHECK(proj_equal(red, HomogRep::identity(2)));

    // raw f.f (degree 9) reduces to the closed-form second iterate (degree 7)
    HomogRep rawff(PolyTuple({mono(3, {4, 5, 0}), mono(3, {0, 9, 0}), mono(3, {6, 2, 1})}));
    CHECK(proj_equal(reduce_rep(rawff), deg2_iterate_closed_form(2)));

    // [z1 : z1 - 1/8 z0 : z2 : z3^k] is already reduced (k = 4)
    HomogRep rash(PolyTuple({mono(4, {0, 1, 0, 0}).mul_monomial(ExponentVector{3, 0, 0, 0}, GaussianRational(1)),
                             (mono(4, {0, 1, 0, 0}) - mono(4, {1, 0, 0, 0}, GaussianRational(1, 8)))
                                 .mul_monomial(ExponentVector{3, 0, 0, 0}, GaussianRational(1)),
                             mono(4, {3, 0, 1, 0}),
                             mono(4, {0, 0, 0, 4})}));
    auto rred = reduce_rep(rash);
    CHECK(rred.tuple == rash.tuple);
}

TEST_CASE("indeterminacy of the degree-2 map is {p, q}") {
    auto rep = deg2_map();
    auto ind = indeterminacy_exact(rep);
    CHECK(ind.method == "exact-monomial");
    CHECK(ind.complete);
    REQUIRE(ind.exact_points.size() == 2);
    CHECK(ind.components.empty());
    // points [0:0:1] and [1:0:0] in some order
    auto is_q = [](const ProjectivePoint& p) {
        return p.coords[0].is_zero() && p.coords[1].is_zero() && !p.coords[2].is_zero();
    };
    auto is_p = [](const ProjectivePoint& p) {
        return !p.coords[0].is_zero() && p.coords[1].is_zero() && p.coords[2].is_zero();
    };
    CHECK(((is_q(ind.exact_points[0]) && is_p(ind.exact_points[1])) ||
           (is_p(ind.exact_points[0]) && is_q(ind.exact_points[1]))));
}

TEST_CASE("indeterminacy: identity map has none") {
    auto ind = indeterminacy_exact(HomogRep::identity(2));
    CHECK(ind.exact_points.empty());
    CHECK(ind.components.empty());
}

TEST_CASE("indeterminacy of the weak limit [z1:z1:z2:0]") {
    HomogRep lim(PolyTuple({mono(4, {0, 1, 0, 0}), mono(4, {0, 1, 0, 0}), mono(4, {0, 0, 1, 0}),
                            SparsePoly(4)}),
                 true);
    auto ind = indeterminacy_exact(lim);
    REQUIRE(ind.components.size() == 1);
    CHECK(ind.components[0].zero_vars == std::vector<int>{1, 2});
    CHECK(ind.exact_points.empty());
}

TEST_CASE("sampled indeterminacy finds the common zero of a non-monomial map") {
    // [z0^2 : z1^2 - z0^2 : z1 z2] has an indeterminacy point at [0:0:1]
    HomogRep rep(PolyTuple({mono(3, {2, 0, 0}), mono(3, {0, 2, 0}) - mono(3, {2, 0, 0}),
                            mono(3, {0, 1, 1})}),
                 true);
    SampledGridSpec grid;
    grid.chart = 2;
    grid.resolution = 12;
    grid.box_radius = 1.2;
    grid.tol = 1e-5;
    auto ind = indeterminacy_sampled(rep, grid);
    bool found = false;
    for (const auto& cell : ind.sampled_cells) {
        if (cell.inconclusive) continue;
        if (std::abs(cell.point[0]) < 1e-4 && std::abs(cell.point[1]) < 1e-4) found = true;
    }
    CHECK(found);
}

TEST_CASE("compose_reduce reproduces the closed-form second iterate") {
    auto f = deg2_map();
    CHECK(proj_equal(compose_reduce(f, f), deg2_iterate_closed_form(2)));
}

TEST_CASE("cremona is an involution") {
    auto c = cremona_map();
    CHECK(proj_equal(compose_reduce(c, c), HomogRep::identity(2)));
}

TEST_CASE("identity is neutral for composition") {
    auto f = deg2_map();
    CHECK(proj_equal(compose_reduce(HomogRep::identity(2), f), f));
    CHECK(proj_equal(compose_reduce(f, HomogRep::identity(2)), f));
}

TEST_CASE("iterate_closed matches the paper closed form for k=1..6") {
    auto f = deg2_map();
    for (int k = 1; k <= 6; ++k) {
        auto it = iterate_closed(f, k);
        CHECK(proj_equal(it, deg2_iterate_closed_form(k)));
        CHECK(it.reduced);
    }
}

TEST_CASE("iterate_closed k=1 is f itself") {
    auto f = deg2_map();
    CHECK(proj_equal(iterate_closed(f, 1), f));
}

TEST_CASE("iterate of the degree-3 analogue matches two explicit compositions") {
    auto f = degd_map(3);
    auto oracle = compose_reduce(f, f);
    CHECK(proj_equal(iterate_closed(f, 2), oracle));
    auto oracle3 = compose_reduce(oracle, f);
    CHECK(proj_equal(iterate_closed(f, 3), oracle3));
}

TEST_CASE("iterate additivity up to scalar") {
    auto f = deg2_map();
    for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b) {
            auto lhs = iterate_closed(f, a + b);
            auto rhs = compose_reduce(iterate_closed(f, a), iterate_closed(f, b));
            CHECK(proj_equal(lhs, rhs));
        }
    auto c = cremona_map();
    CHECK(proj_equal(iterate_closed(c, 4), compose_reduce(iterate_closed(c, 2), iterate_closed(c, 2))));
}

TEST_CASE("topological degree from the exponent matrix") {
    auto mm = MonomialMap::from_homog(deg2_map(), 0);
    // affine matrix [[2,0],[-1,1]]
    CHECK(mm.exponents.m[0][0] == 2);
    CHECK(mm.exponents.m[0][1] == 0);
    CHECK(mm.exponents.m[1][0] == -1);
    CHECK(mm.exponents.m[1][1] == 1);
    CHECK(topological_degree(mm) == 2);

    CHECK(topological_degree(MonomialMap::from_homog(HomogRep::identity(2), 0)) == 1);

    for (long d = 2; d <= 5; ++d)
        CHECK(topological_degree(MonomialMap::from_homog(degd_map(d), 0)) == d);

    // cremona in a chart is (1/u1, 1/u2): degree 1
    CHECK(topological_degree(MonomialMap::from_homog(cremona_map(), 0)) == 1);

    // degenerate: [z0 : z1 : z0] has a singular exponent matrix... build one
    HomogRep degen(PolyTuple({mono(3, {1, 1, 0}), mono(3, {1, 1, 0}).scaled(GaussianRational(2)),
                              mono(3, {2, 0, 0})}));
    CHECK_THROWS(topological_degree(MonomialMap::from_homog(degen, 0)));
}

TEST_CASE("monomial iterate equals symbolic iterate exponent-for-exponent") {
    auto f = deg2_map();
    auto mm = MonomialMap::from_homog(f, 0);
    for (int k = 1; k <= 10; ++k) {
        auto viaMatrix = mm.iterate(k);
        auto viaSymbols = MonomialMap::from_homog(iterate_closed(f, k), 0);
        CHECK(viaMatrix.exponents == viaSymbols.exponents);
        CHECK(mm.exponents.pow(k) == viaMatrix.exponents);
    }
}

TEST_CASE("restrict_chart reproduces the affine forms") {
    auto f = deg2_map();
    auto aff = restrict_chart(f, 0);
    // (u1^2, u2/u1) as exact pairs; variables are (dead z0, z1, z2)
    REQUIRE(aff.coords.size() == 2);
    CHECK(aff.coords[0].first == mono(3, {0, 2, 0}));
    CHECK(aff.coords[0].second == SparsePoly::constant(3, GaussianRational(1)));
    CHECK(aff.coords[1].first == mono(3, {0, 0, 1}));
    CHECK(aff.coords[1].second == mono(3, {0, 1, 0}));

    auto id = restrict_chart(HomogRep::identity(2), 0);
    CHECK(id.coords[0].first == mono(3, {0, 1, 0}));
    CHECK(id.coords[0].second == SparsePoly::constant(3, GaussianRational(1)));

    // iterate k=3 in chart U_2: (w2^(2^k-1)/w1^(2^k-2), w2^(2^(k+1)-1)/w1^(2^(k+1)-2))
    auto it3 = deg2_iterate_closed_form(3);
    auto w = restrict_chart(it3, 2);
    CHECK(w.coords[0].first == mono(3, {0, 7, 0}));
    CHECK(w.coords[0].second == mono(3, {6, 0, 0}));
    CHECK(w.coords[1].first == mono(3, {0, 15, 0}));
    CHECK(w.coords[1].second == mono(3, {14, 0, 0}));
}

TEST_CASE("restrict_chart: zero coordinate yields the zero function") {
    HomogRep lim(PolyTuple({mono(3, {0, 1, 0}), mono(3, {0, 1, 0}), SparsePoly(3)}), true);
    auto aff = restrict_chart(lim, 0);
    CHECK(aff.coords[1].first.is_zero());
}

TEST_CASE("contracted curves of the degree-2 map") {
    auto cc = contracted_curves(deg2_map());
    // l1 = {z1=0} -> q = [0:0:1]; l0 = {z0=0} -> r = [0:1:0]; l2 not contracted
    REQUIRE(cc.size() == 2);
    bool l0_to_r = false, l1_to_q = false;
    for (const auto& c : cc) {
        if (c.line_var == 0)
            l0_to_r = c.image.coords[0].is_zero() && !c.image.coords[1].is_zero() &&
                      c.image.coords[2].is_zero();
        if (c.line_var == 1)
            l1_to_q = c.image.coords[0].is_zero() && c.image.coords[1].is_zero() &&
                      !c.image.coords[2].is_zero();
    }
    CHECK(l0_to_r);
    CHECK(l1_to_q);

    CHECK(contracted_curves(HomogRep::identity(2)).empty());

    // closed-form iterate still contracts l0 to r
    auto cck = contracted_curves(deg2_iterate_closed_form(4));
    bool found = false;
    for (const auto& c : cck)
        if (c.line_var == 0)
            found = c.image.coords[0].is_zero() && !c.image.coords[1].is_zero() &&
                    c.image.coords[2].is_zero();
    CHECK(found);
}

TEST_CASE("reduce_rep is idempotent (seeded property)") {
    std::mt19937_64 rng(77123);
    std::uniform_int_distribution<long> e(0, 3), c(-3, 3);
    for (int it = 0; it < 50; ++it) {
        // random monomial triple times a random common monomial
        auto rnd_mono = [&](long extra0, long extra1, long extra2) {
            long a = c(rng);
            if (a == 0) a = 1;
            return mono(3, {e(rng) + extra0, e(rng) + extra1, e(rng) + extra2}, GaussianRational(a));
        };
        long g0 = e(rng), g1 = e(rng), g2 = e(rng);
        // make components homogeneous by padding with z0 powers
        SparsePoly p0 = rnd_mono(g0, g1, g2), p1 = rnd_mono(g0, g1, g2), p2 = rnd_mono(g0, g1, g2);
        BigInt d = std::max({p0.total_degree(), p1.total_degree(), p2.total_degree()});
        auto pad = [&](const SparsePoly& p) {
            ExponentVector shift{d - p.total_degree(), 0, 0};
            return p.mul_monomial(shift, GaussianRational(1));
        };
        HomogRep rep(PolyTuple({pad(p0), pad(p1), pad(p2)}));
        auto r1 = reduce_rep(rep);
        auto r2 = reduce_rep(r1);
        CHECK(r1.tuple == r2.tuple);
        CHECK(tuple_content(r1.tuple).is_constant());
    }
}

TEST_CASE("serialization round trip is bit-exact") {
    auto f = deg2_map();
    auto text = f.serialize();
    auto back = HomogRep::deserialize(text);
    CHECK(back.tuple == f.tuple);
    CHECK(back.source_dim == f.source_dim);
    CHECK(back.reduced == f.reduced);

    // a tuple with Gaussian rational coefficients and a zero component
    SparsePoly p(3);
    p.add_term(ExponentVector{1, 1, 0}, GaussianRational(BigRat(-3, 7), BigRat(22, 5)));
    p.add_term(ExponentVector{0, 0, 2}, GaussianRational(BigRat(1, 9)));
    HomogRep g(PolyTuple({p, mono(3, {0, 2, 0}, GaussianRational(BigRat(0), BigRat(-1))), SparsePoly(3)}));
    auto t2 = g.serialize();
    CHECK(HomogRep::deserialize(t2).tuple == g.tuple);
    CHECK(HomogRep::deserialize(t2).serialize() == t2);
}
