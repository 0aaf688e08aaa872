#pragma once

#include <optional>
#include <string>
#include <vector>

#include "meroconv/sparse_poly.hpp"

namespace mero {

/// Square matrix over BigInt; used for affine exponent matrices of monomial
/// maps, whose powers give closed-form iterates.
struct BigIntMatrix {
    std::vector<std::vector<BigInt>> m;

    static BigIntMatrix identity(int n);
    int dim() const { return static_cast<int>(m.size()); }
    BigIntMatrix operator*(const BigIntMatrix& o) const;
    BigIntMatrix pow(const BigInt& k) const;
    BigInt det() const;  // fraction-free (Bareiss)
    std::vector<BigRat> apply(const std::vector<BigRat>& v) const;
    bool operator==(const BigIntMatrix& o) const { return m == o.m; }
};

/// Homogeneous-tuple representation of a rational map P^n -> P^N.
struct HomogRep {
    PolyTuple tuple;     // n+1 variables, N+1 components, homogeneous
    int source_dim = 0;  // n
    int target_dim = 0;  // N
    bool reduced = false;

    HomogRep() = default;
    HomogRep(PolyTuple t, bool reduced_flag = false);

    BigInt algebraic_degree() const { return tuple.common_degree(); }
    bool is_monomial() const;  // every component a single monomial
    bool is_self_map() const { return source_dim == target_dim; }

    static HomogRep identity(int n);

    std::string serialize() const;
    static HomogRep deserialize(const std::string& text);
};

/// Divide out the tuple content and set the reduced flag. Same projective map
/// off the removed divisor.
HomogRep reduce_rep(const HomogRep& r);

/// Monomial self-map in a chosen affine chart: image coordinate i is
/// coeff[i] * u^(row i of exponents). Entries may be negative (Laurent).
struct MonomialMap {
    HomogRep base;
    int chart = 0;
    BigIntMatrix exponents;                 // n x n
    std::vector<GaussianRational> coeffs;   // length n

    static MonomialMap from_homog(const HomogRep& rep, int chart = 0);

    /// Exact composition via exponent-matrix product and coefficient cocycle.
    MonomialMap compose(const MonomialMap& inner) const;
    MonomialMap iterate(const BigInt& k) const;

    /// Rebuild the homogeneous representation (always reduced).
    HomogRep to_homog() const;
};

/// |det| of the affine exponent matrix; errors on a singular matrix.
BigInt topological_degree(const MonomialMap& m);

struct ProjectivePoint {
    std::vector<GaussianRational> coords;
    std::string str() const;
};

struct CoordinateSubspace {
    std::vector<int> zero_vars;  // indices i with z_i = 0
    int proj_dim = 0;            // n - |zero_vars|
};

struct SampledIndetCell {
    std::vector<std::complex<double>> point;
    double max_component_mod = 0.0;
    bool inconclusive = false;
};

struct IndeterminacyReport {
    std::vector<ProjectivePoint> exact_points;
    std::vector<CoordinateSubspace> components;  // positive-dimensional
    std::vector<SampledIndetCell> sampled_cells;
    std::string method;  // "exact-monomial" or "sampled"
    bool complete = false;
};

struct SampledGridSpec {
    int chart = 0;
    double box_radius = 1.5;
    int resolution = 24;
    double tol = 1e-6;
};

IndeterminacyReport indeterminacy_exact(const HomogRep& r);
IndeterminacyReport indeterminacy_sampled(const HomogRep& r, const SampledGridSpec& grid);

/// g after f, componentwise substitution followed by reduce_rep.
HomogRep compose_reduce(const HomogRep& g, const HomogRep& f);

/// k-fold compose_reduce; exact exponent-matrix powering for monomial maps.
HomogRep iterate_closed(const HomogRep& f, const BigInt& k);

/// Affine restriction to chart j (source and target): coordinates as exact
/// numerator/denominator pairs with common factors cancelled.
struct AffineRationalMap {
    int chart = 0;
    std::vector<std::pair<SparsePoly, SparsePoly>> coords;  // (num, den), den nonzero
};

AffineRationalMap restrict_chart(const HomogRep& r, int chart);

struct ContractedCurve {
    int line_var = 0;  // the coordinate line {z_i = 0}
    ProjectivePoint image;
};

std::vector<ContractedCurve> contracted_curves(const MonomialMap& m);
std::vector<ContractedCurve> contracted_curves(const HomogRep& monomial_rep);

}  // namespace mero
