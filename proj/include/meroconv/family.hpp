#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "meroconv/proj_map.hpp"

namespace mero {

/// Polydisk in chart coordinates; doubles as the weight system for the
/// coefficient metric (each variable weighted by its sup modulus on the
/// domain).
struct ChartDomain {
    std::vector<std::complex<double>> center;  // length n (chart variable removed)
    std::vector<double> radii;

    int n() const { return static_cast<int>(center.size()); }
};

/// A one-complex-dimensional slice in a chart: a circle in variable `var`
/// with the remaining variables frozen at exact rational values.
struct SliceSpec {
    int var = 0;                             // index among the n chart variables
    std::vector<GaussianRational> base;      // length n; base[var] is the circle center
    double radius = 0.5;
};

/// A parametrized sequence {f_k} given by an exact generator, with an
/// optional closed-form limit candidate (not necessarily reduced).
struct MapFamily {
    std::string name;
    std::function<HomogRep(int)> generator;  // exact homogeneous rep of f_k
    int k_min = 1;
    int k_max = 24;
    std::optional<HomogRep> limit_candidate;
    std::vector<int> charts = {0};

    /// Reduced affine tuple of f_k in the chart, with the chart variable
    /// eliminated (n variables, N+1 components).
    PolyTuple chart_tuple(int k, int chart) const;

    /// Chart tuple of the limit candidate, not reduced (Gamma-limits may
    /// carry a common divisor; that divisor is evidence).
    std::optional<PolyTuple> candidate_chart_tuple(int chart) const;
};

/// Eliminate a variable that occurs with exponent 0 in every term.
SparsePoly drop_variable(const SparsePoly& p, int var);
PolyTuple drop_variable(const PolyTuple& t, int var);

/// Dehomogenize: substitute z_chart = 1 and remove the variable.
PolyTuple dehomogenize(const PolyTuple& t, int chart);

/// Exact dyadic conversion of a double (doubles are dyadic rationals).
BigRat exact_rational(double x);
GaussianRational exact_gaussian(std::complex<double> z);

}  // namespace mero
