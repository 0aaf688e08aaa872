#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "meroconv/lift.hpp"
#include "meroconv/quadrature.hpp"

namespace mero {

// ---------------------------------------------------------------------------
// Normalization convention, used throughout:
//   d^c = (i/(4*pi)) (dbar - d), so dd^c ln|z|^2 is the unit Dirac mass at 0
//   and a projective line has Fubini-Study area 1.  The Euclidean factor in
//   mixed masses is the standard form omega_e = (i/2) sum dz_j ^ dz̄_j.
// Under this convention
//   omega_e^{n-p} ^ (dd^c u)^p = p!(n-p)!/pi^p * e_p(Hess u) dV.
// ---------------------------------------------------------------------------

/// One-complex-variable circle |z - center| = radius with quadrature budget.
struct ContourSpec {
    std::complex<double> center{0.0, 0.0};
    double radius = 1.0;
    int start_nodes = 64;
    int max_nodes = 1 << 15;
    double residual_tol = 0.1;
    double min_modulus_rel = 1e-9;  // relative near-vanishing threshold
};

/// Exclusion set for non-pluripolar integrals: points, coordinate subspaces
/// {z_i = 0 : i in vars}, or a custom distance function.
struct ZeroSetSpec {
    std::vector<std::vector<std::complex<double>>> points;
    std::vector<std::vector<int>> subspaces;
    std::function<double(const VectorXcd&)> custom;

    bool empty() const { return points.empty() && subspaces.empty() && !custom; }
    double distance(const VectorXcd& z) const;
};

struct PolydiskSpec {
    std::vector<std::complex<double>> center;
    std::vector<double> radii;
    int radial_nodes = 12;
    int angular_nodes = 16;
    int radial_panels = 2;
    double eps = 0.0;        // exclusion radius around the zero set
    ZeroSetSpec exclusion;

    int n() const { return static_cast<int>(center.size()); }
};

struct BallSpec {
    std::vector<std::complex<double>> center;
    double radius = 0.5;
    std::int64_t samples = 200000;
    std::uint64_t seed = 20240901;
    int workers = 2;
    double eps = 0.0;
    ZeroSetSpec exclusion;
    std::vector<ImportanceBall> importance;
    // for n = 2 quadrature fallback
    int radial_nodes = 16;
    int angular_nodes = 16;

    int n() const { return static_cast<int>(center.size()); }
};

struct AreaReport {
    double value = 0.0;
    double est_error = 0.0;
    double boundary_integral = 0.0;  // boundary route only
    long lift_zero_count = 0;        // N_F, boundary route only
    bool ok = true;
    std::string note;
};

struct MassReport {
    double value = 0.0;
    double est_error = 0.0;
    int order = 0;
    double eps_used = 0.0;
    bool extrapolated = false;
    std::int64_t samples = 0;
    double min_density = 0.0;  // most negative density sampled (psh check)
    bool ok = true;
    std::string note;
};

/// Scalar holomorphic function handle, with an optional analytic derivative.
struct ScalarFunction {
    std::function<std::complex<double>(std::complex<double>)> f;
    std::function<std::complex<double>(std::complex<double>)> df;  // may be null: FD fallback
};

/// Dense univariate polynomial over complex doubles (exact coefficients cast
/// once); used for slice restrictions and root finding.
struct ComplexPoly {
    std::vector<std::complex<double>> coeffs;  // coeffs[i] * z^i

    static ComplexPoly from_univariate(const SparsePoly& p, int var);
    std::complex<double> eval(std::complex<double> z) const;
    ComplexPoly derivative() const;
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    /// All roots via the companion matrix (Eigen eigenvalues).
    std::vector<std::complex<double>> roots() const;
    ScalarFunction handle() const;
    bool near_zero() const;
};

struct CountReport {
    long count = 0;
    double residual = 0.0;
    double min_modulus = 1.0;  // relative to max modulus on the contour
    int nodes_used = 0;
    bool ok = true;
    std::string error;
};

/// Argument-principle zero count (1/2*pi*i) \oint h'/h dz, rounded to the
/// nearest integer; fails when h nearly vanishes on the contour or the
/// integral is not near an integer.
CountReport zero_count_contour(const ScalarFunction& h, const ContourSpec& c);

/// Fubini-Study area of f(disk) by interior quadrature of the pullback
/// density; a projective line has total area 1.
AreaReport fs_area_interior(const LiftEvaluator& lift, const ContourSpec& disk,
                            int radial_nodes = 24, int radial_panels = 4, int angular_nodes = 32,
                            double target_tol = 1e-9);

/// Boundary route: \oint d^c ln||F||^2 - N_F. N_F comes from the exact
/// content for polynomial lifts, otherwise from generic linear combinations
/// of components (several seeded draws; disagreement is an error).
AreaReport fs_area_boundary(const LiftEvaluator& lift, const ContourSpec& circle,
                            std::uint64_t seed = 4242);

struct MassOptions {
    bool extrapolate = true;  // Richardson over eps, eps/2, eps/4
    int schedule = 3;
};

/// Non-pluripolar mixed Monge-Ampere mass of order p over the domain minus
/// the eps-tube around the zero set.
MassReport mixed_ma_mass(const PshPotential& u, const PolydiskSpec& dom, int p,
                         const MassOptions& opts = {});
MassReport mixed_ma_mass(const PshPotential& u, const BallSpec& dom, int p,
                         const MassOptions& opts = {});
MassReport mixed_ma_mass(const LiftEvaluator& lift, const PolydiskSpec& dom, int p,
                         const MassOptions& opts = {});

/// Graph volume sum_p C(n,p) * (order-p mass with Euclidean complement).
MassReport graph_volume(const LiftEvaluator& lift, const PolydiskSpec& dom,
                        const MassOptions& opts = {});

struct KingReport {
    double boundary_mass = 0.0;
    double interior_mass = 0.0;  // non-pluripolar order-2 mass
    double atom = 0.0;
    long atom_int = 0;
    double atom_residual = 0.0;
    bool ok = true;
    std::string note;
};

/// Boundary integral of d^c u ^ dd^c u over the 3-sphere of radius r minus
/// the interior non-pluripolar mass; the difference is the Lelong-type atom
/// at the central indeterminacy point (equals the local mapping degree).
KingReport king_residue_check(const LiftEvaluator& lift_c2, std::complex<double> c1,
                              std::complex<double> c2, double r, int eta_nodes = 48,
                              int angle_nodes = 48);

struct RashkovskiiReport {
    MassReport mc;              // Monte Carlo order-3 mass of u_{eps,k}
    std::optional<BigRat> exact_atom;  // k/2 for eps = 0 and even k (local degree)
    int k = 0;
    double eps = 0.0;
};

/// Order-3 Monge-Ampere mass of ln(|z1|^2+|z1-eps|^2+|z2|^2+|z3|^k) over the
/// ball; for eps = 0 and even k also the exact atom via the local-degree
/// oracle for G = (sqrt(2) z1, z2, z3^{k/2}).
RashkovskiiReport rashkovskii_mass(int k, double eps, const BallSpec& dom);

// ---------------------------------------------------------------------------
// General wedge machinery on a 2-dimensional chart, for cross-checking the
// closed-form graph-volume series: a (1,1)-form is encoded by its Hermitian
// coefficient matrix M in the basis (i/2) du_a ^ dū_b, and
//   form_A ^ form_B = (tr A tr B - tr(A B)) dV.
// ---------------------------------------------------------------------------

using FormCoeff2 = std::function<Eigen::Matrix2cd(const Eigen::Vector2cd&)>;

FormCoeff2 euclidean_form2();
/// Pullback of the unit-line Fubini-Study form by the lift: H/pi.
FormCoeff2 fs_pullback_form2(std::shared_ptr<LogNormPotential> u);
/// Pullback of the Euclidean form by a holomorphic scalar h: Gram of grad h.
FormCoeff2 holo_gram_form2(std::function<Eigen::Vector2cd(const Eigen::Vector2cd&)> grad_h);

double wedge_mass_2d(const FormCoeff2& A, const FormCoeff2& B, const PolydiskSpec& dom);

}  // namespace mero
