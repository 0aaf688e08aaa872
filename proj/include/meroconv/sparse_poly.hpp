#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "meroconv/rational.hpp"

namespace mero {

/// Per-variable exponents, arbitrary precision. Length equals the ambient
/// variable count. Entries are nonnegative for stored polynomials; iterate
/// exponents reach 2^(k+1) for k up to 64 and beyond, hence BigInt.
using ExponentVector = std::vector<BigInt>;

bool lex_less(const ExponentVector& a, const ExponentVector& b);

struct ExponentLexLess {
    bool operator()(const ExponentVector& a, const ExponentVector& b) const { return lex_less(a, b); }
};

/// One coordinate of a point given in log-polar form: |z| = exp(log_mod),
/// arg z = phase. Allows exact handling of moduli like |z|^(2^65).
struct LogPolar {
    double log_mod = 0.0;
    double phase = 0.0;
};

/// Result of evaluating one tuple component in log coordinates.
struct LogEval {
    double log_mod = 0.0;   // -inf means exact zero
    double phase = 0.0;
    bool exact = false;     // true for single-monomial components
    double err_bound = 0.0; // absolute bound on log_mod error for summed components
};

/// Sparse multivariate polynomial over Q(i) with canonical (lex-ordered)
/// term map. Equality is structural. No zero coefficients are stored.
class SparsePoly {
public:
    using TermMap = std::map<ExponentVector, GaussianRational, ExponentLexLess>;

    SparsePoly() = default;
    explicit SparsePoly(int nvars) : nvars_(nvars) {}

    static SparsePoly constant(int nvars, GaussianRational c);
    static SparsePoly variable(int nvars, int index);
    static SparsePoly monomial(int nvars, ExponentVector e, GaussianRational c);

    int nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    bool is_monomial() const { return terms_.size() == 1; }
    std::size_t term_count() const { return terms_.size(); }

    BigInt total_degree() const;       // -1 for zero polynomial
    BigInt degree_in(int var) const;   // -1 for zero polynomial
    bool is_homogeneous() const;

    void add_term(const ExponentVector& e, const GaussianRational& c);

    SparsePoly operator-() const;
    SparsePoly operator+(const SparsePoly& o) const;
    SparsePoly operator-(const SparsePoly& o) const;
    SparsePoly operator*(const SparsePoly& o) const;
    SparsePoly scaled(const GaussianRational& c) const;
    SparsePoly mul_monomial(const ExponentVector& e, const GaussianRational& c) const;
    SparsePoly pow(const BigInt& k) const;
    bool operator==(const SparsePoly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }
    bool operator!=(const SparsePoly& o) const { return !(*this == o); }

    /// Exact division; nullopt when o does not divide this exactly.
    std::optional<SparsePoly> divide_exact(const SparsePoly& o) const;

    /// Elementwise min of exponent vectors over all terms (monomial content
    /// exponent). Zero polynomial yields empty optional.
    std::optional<ExponentVector> monomial_content_exponent() const;

    /// Divide out z^e; requires every term divisible.
    SparsePoly shift_down(const ExponentVector& e) const;

    SparsePoly derivative(int var) const;

    /// Substitute each variable by the given polynomial (all in the same
    /// target ring).
    SparsePoly substitute(const std::vector<SparsePoly>& subs) const;

    /// Set variable `var` to an exact constant, producing a polynomial in the
    /// same ring (exponent of `var` collapsed into the coefficient).
    SparsePoly substitute_value(int var, const GaussianRational& v) const;

    std::complex<double> eval(const std::vector<std::complex<double>>& z) const;

    /// Divide by the coefficient of the lexicographically greatest term.
    SparsePoly monic_lex() const;

    /// Divide by a max-|coeff| coefficient (ties broken by lex-greatest
    /// exponent), so the largest coefficient modulus becomes 1 with the
    /// deterministic phase of that coefficient removed.
    SparsePoly unit_max_modulus() const;

    const GaussianRational& leading_coeff_lex() const;

    std::string str(const std::vector<std::string>& var_names = {}) const;

private:
    int nvars_ = 0;
    TermMap terms_;
};

SparsePoly poly_add(const SparsePoly& a, const SparsePoly& b);
SparsePoly poly_mul(const SparsePoly& a, const SparsePoly& b);

/// GCD over Q(i)[z_1..z_n], unique up to a nonzero scalar; output is
/// monic with respect to the lex-greatest term. Monomial content is split
/// off first; remaining content is handled by recursive subresultant PRS.
SparsePoly poly_gcd(const SparsePoly& a, const SparsePoly& b);

/// Ordered tuple (f^0..f^N) of polynomials in a common variable set.
struct PolyTuple {
    std::vector<SparsePoly> comps;

    PolyTuple() = default;
    explicit PolyTuple(std::vector<SparsePoly> c);

    int nvars() const { return comps.empty() ? 0 : comps.front().nvars(); }
    int size() const { return static_cast<int>(comps.size()); }
    bool all_zero() const;
    bool is_homogeneous() const;  // all components homogeneous of one common degree
    BigInt common_degree() const; // valid when is_homogeneous()

    bool operator==(const PolyTuple& o) const { return comps == o.comps; }

    std::vector<std::complex<double>> eval(const std::vector<std::complex<double>>& z) const;
    std::vector<LogEval> eval_log(const std::vector<LogPolar>& point) const;
};

/// GCD of all components, scalar-normalized so the largest coefficient
/// modulus is 1 (phase fixed by the chosen coefficient). The tuple must not
/// be identically zero.
SparsePoly tuple_content(const PolyTuple& t);

/// Normalized homogeneous coordinates [t(z)] via log-scaled evaluation
/// (robust for closed-form iterates whose direct values under/overflow).
/// Empty result when every component vanishes at z.
std::vector<std::complex<double>> proj_eval_log(const PolyTuple& t,
                                                const std::vector<std::complex<double>>& z);

/// Divide every component exactly by d.
PolyTuple tuple_divide(const PolyTuple& t, const SparsePoly& d);

std::string default_var_name(int nvars, int i);

}  // namespace mero
