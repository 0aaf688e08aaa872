#include "meroconv/registry.hpp"

namespace mero {

namespace {

SparsePoly mono(int nvars, std::vector<long> exps, GaussianRational c = GaussianRational(1)) {
    ExponentVector e(exps.begin(), exps.end());
    return SparsePoly::monomial(nvars, e, c);
}

GaussianRational inv_factorial(int j) {
    BigInt f = 1;
    for (int i = 2; i <= j; ++i) f *= i;
    return GaussianRational(BigRat(BigInt(1), f));
}

// truncated exponential sums: f_k = [z^k : z^k + z^{k-1}/1! + ... + 1/k!]
MapFamily exp_family() {
    MapFamily fam;
    fam.name = "exp";
    fam.k_min = 1;
    fam.k_max = 16;
    fam.generator = [](int k) {
        SparsePoly f0(2), f1(2);
        f0.add_term(ExponentVector{0, BigInt(k)}, GaussianRational(1));
        for (int j = 0; j <= k; ++j)
            f1.add_term(ExponentVector{BigInt(j), BigInt(k - j)}, inv_factorial(j));
        return HomogRep(PolyTuple({f0, f1}), true);
    };
    return fam;
}

MapFamily expb_family() {
    MapFamily fam;
    fam.name = "exp-b";
    fam.k_min = 1;
    fam.k_max = 40;
    fam.generator = [](int k) {
        // [z : z - 1/k] homogenized on the line
        SparsePoly f0 = mono(2, {0, 1});
        SparsePoly f1 = mono(2, {0, 1}) + mono(2, {1, 0}, GaussianRational(-1, k));
        return HomogRep(PolyTuple({f0, f1}), true);
    };
    fam.limit_candidate = HomogRep(PolyTuple({mono(2, {0, 1}), mono(2, {0, 1})}), false);
    return fam;
}

MapFamily rutish_family() {
    MapFamily fam;
    fam.name = "rutish";
    fam.k_min = 1;
    fam.k_max = 24;
    fam.generator = [](int k) {
        // [z1 : 2^-k z2^k] on the bidisk, homogenized to degree k
        SparsePoly f0(3), f1(3);
        f0.add_term(ExponentVector{BigInt(k - 1), 1, 0}, GaussianRational(1));
        f1.add_term(ExponentVector{0, 0, BigInt(k)},
                    GaussianRational(BigRat(BigInt(1), BigInt(1) << k)));
        return HomogRep(PolyTuple({f0, f1}), true);
    };
    fam.limit_candidate = HomogRep(PolyTuple({mono(3, {0, 1, 0}), SparsePoly(3)}), false);
    return fam;
}

MapFamily rash_family() {
    MapFamily fam;
    fam.name = "rash";
    fam.k_min = 1;
    fam.k_max = 12;
    fam.generator = [](int k) {
        // [z1 : z1 - eps_k : z2 : z3^k], eps_k = 2^-(k+2), homogenized
        GaussianRational eps(BigRat(BigInt(1), BigInt(1) << (k + 2)));
        SparsePoly f0(4), f1(4), f2(4), f3(4);
        f0.add_term(ExponentVector{BigInt(k - 1), 1, 0, 0}, GaussianRational(1));
        f1.add_term(ExponentVector{BigInt(k - 1), 1, 0, 0}, GaussianRational(1));
        f1.add_term(ExponentVector{BigInt(k), 0, 0, 0}, -eps);
        f2.add_term(ExponentVector{BigInt(k - 1), 0, 1, 0}, GaussianRational(1));
        f3.add_term(ExponentVector{0, 0, 0, BigInt(k)}, GaussianRational(1));
        return HomogRep(PolyTuple({f0, f1, f2, f3}), true);
    };
    fam.limit_candidate = HomogRep(
        PolyTuple({mono(4, {0, 1, 0, 0}), mono(4, {0, 1, 0, 0}), mono(4, {0, 0, 1, 0}), SparsePoly(4)}),
        false);
    return fam;
}

MapFamily cremona_family() {
    MapFamily fam;
    fam.name = "cremona";
    fam.k_min = 1;
    fam.k_max = 12;
    fam.generator = [](int) { return cremona_map(); };
    fam.limit_candidate = cremona_map();
    return fam;
}

MapFamily deg2_iterate_family() {
    MapFamily fam;
    fam.name = "deg2-iterates";
    fam.k_min = 1;
    fam.k_max = 8;
    fam.generator = [](int k) { return iterate_closed(deg2_map(), k); };
    return fam;
}

ClassifyConfig disk_config(double radius) {
    ClassifyConfig cfg;
    cfg.domain.center = {0.0};
    cfg.domain.radii = {radius};
    return cfg;
}

}  // namespace

HomogRep deg2_map() {
    return HomogRep(PolyTuple({mono(3, {2, 1, 0}), mono(3, {0, 3, 0}), mono(3, {2, 0, 1})}), true);
}

HomogRep degd_map(int d) {
    if (d < 1) throw std::invalid_argument("degd_map: d >= 1");
    return HomogRep(PolyTuple({mono(3, {d, 1, 0}), mono(3, {0, d + 1, 0}), mono(3, {d, 0, 1})}), true);
}

HomogRep cremona_map() {
    return HomogRep(PolyTuple({mono(3, {0, 1, 1}), mono(3, {1, 0, 1}), mono(3, {1, 1, 0})}), true);
}

HomogRep deg2_iterate_closed_form(int k) {
    BigInt p = BigInt(1) << k, q = BigInt(1) << (k + 1);
    return HomogRep(PolyTuple({SparsePoly::monomial(3, {p, p - 1, 0}, GaussianRational(1)),
                               SparsePoly::monomial(3, {0, q - 1, 0}, GaussianRational(1)),
                               SparsePoly::monomial(3, {q - 2, 0, 1}, GaussianRational(1))}),
                    true);
}

const std::vector<ExampleRegistryEntry>& example_registry() {
    static const std::vector<ExampleRegistryEntry> reg = [] {
        std::vector<ExampleRegistryEntry> r;

        r.push_back({"exp",
                     "truncated exponential sums [z^k : z^k + ... + 1/k!] on the disk; the "
                     "hyperplane Z0 pulls back to k[0]",
                     exp_family,
                     nullptr,
                     [] { return disk_config(0.75); },
                     "Divergent"});

        r.push_back({"exp-b",
                     "[z : z - 1/k] on the disk; converges to the constant [1:1] off 0 with "
                     "common divisor z in the limit representation",
                     expb_family,
                     nullptr,
                     [] { return disk_config(0.75); },
                     "Gamma"});

        r.push_back({"rutish",
                     "[z1 : 2^-k z2^k] on the bidisk; coefficients converge but a coordinate "
                     "hyperplane pulls back with multiplicity k",
                     rutish_family,
                     nullptr,
                     [] {
                         ClassifyConfig cfg;
                         cfg.domain.center = {0.0, 0.0};
                         cfg.domain.radii = {0.75, 0.75};
                         return cfg;
                     },
                     "Divergent"});

        r.push_back({"rash",
                     "[z1 : z1 - eps_k : z2 : z3^k] on the ball; weak limit [z1:z1:z2:0] with "
                     "order-3 Monge-Ampere masses growing linearly in k",
                     rash_family,
                     nullptr,
                     [] {
                         ClassifyConfig cfg;
                         cfg.domain.center = {0.0, 0.0, 0.0};
                         cfg.domain.radii = {0.5, 0.5, 0.5};
                         cfg.mass_domain_is_ball = true;
                         cfg.ball_radius = 0.5;
                         cfg.mc_samples = 400000;
                         cfg.importance_centers = {{0.0, 0.0, 0.0}};
                         cfg.rash_importance_scales = {0.3};
                         return cfg;
                     },
                     "Weak"});

        r.push_back({"cremona",
                     "constant family of the Cremona involution [z1 z2 : z0 z2 : z0 z1]",
                     cremona_family,
                     nullptr,
                     [] {
                         ClassifyConfig cfg;
                         cfg.domain.center = {0.0, 0.0};
                         cfg.domain.radii = {0.6, 0.6};
                         return cfg;
                     },
                     "Strong"});

        r.push_back({"deg2",
                     "degree-2 self-map [z0^2 z1 : z1^3 : z0^2 z2] with Levi-flat Julia cone "
                     "|z0| = |z1|",
                     deg2_iterate_family,
                     [](int) { return deg2_map(); },
                     [] {
                         ClassifyConfig cfg;
                         cfg.domain.center = {0.5, 0.5};
                         cfg.domain.radii = {0.1, 0.1};
                         return cfg;
                     },
                     ""});

        r.push_back({"deg-d",
                     "degree-d analogue [z0^d z1 : z1^(d+1) : z0^d z2]",
                     nullptr,
                     [](int d) { return degd_map(d <= 0 ? 2 : d); },
                     nullptr,
                     ""});
        return r;
    }();
    return reg;
}

const ExampleRegistryEntry* find_example(const std::string& name) {
    for (const auto& e : example_registry())
        if (e.name == name) return &e;
    return nullptr;
}

}  // namespace mero
