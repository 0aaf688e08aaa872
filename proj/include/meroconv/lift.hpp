#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>

#include "meroconv/sparse_poly.hpp"

namespace mero {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

/// Lift F = (f^0..f^N) : C^n -> C^{N+1} with first and second complex
/// derivatives. Polynomial lifts use exact symbolic derivatives evaluated in
/// floating point; black-box lifts fall back to sixth-order central finite
/// differences with a fixed relative step.
class LiftEvaluator {
public:
    using ValueFn = std::function<VectorXcd(const VectorXcd&)>;

    static LiftEvaluator from_tuple(const PolyTuple& t);
    static LiftEvaluator black_box(int n, int ncomp, ValueFn f, double rel_step = 1e-3);

    int n() const { return n_; }
    int ncomp() const { return ncomp_; }

    VectorXcd value(const VectorXcd& z) const { return value_(z); }
    /// (N+1) x n matrix of d f^j / d z_a.
    MatrixXcd jacobian(const VectorXcd& z) const { return jacobian_(z); }
    /// Per-component n x n matrices of d^2 f^j / d z_a d z_b.
    std::vector<MatrixXcd> second(const VectorXcd& z) const { return second_(z); }

    /// Max relative disagreement between the derivative evaluator and central
    /// finite differences of the value at seeded probe points.
    double validate_derivatives(std::uint64_t seed, int npoints, double box_radius = 0.8) const;

    double stored_error_bound() const { return deriv_err_bound_; }

    const PolyTuple* tuple() const { return tuple_ ? tuple_.get() : nullptr; }

private:
    int n_ = 0, ncomp_ = 0;
    ValueFn value_;
    std::function<MatrixXcd(const VectorXcd&)> jacobian_;
    std::function<std::vector<MatrixXcd>(const VectorXcd&)> second_;
    double deriv_err_bound_ = 0.0;
    std::shared_ptr<PolyTuple> tuple_;  // kept for exact paths (content, zero sets)
};

/// Evaluation record for a plurisubharmonic potential u at a point:
/// value, holomorphic gradient du/dz_a, complex Hessian d^2u/dz_a dz̄_b.
struct PotentialEval {
    double u = 0.0;
    VectorXcd grad;
    MatrixXcd hess;  // Hermitian PSD up to roundoff
    bool singular = false;  // evaluation too close to the singular locus
};

/// Interface for potentials fed to the Monge-Ampere quadratures.
class PshPotential {
public:
    virtual ~PshPotential() = default;
    virtual int n() const = 0;
    virtual PotentialEval eval(const VectorXcd& z) const = 0;
};

/// u = ln ||F||^2 for a lift F. The complex Hessian needs only first
/// derivatives of F thanks to the Gram structure.
class LogNormPotential : public PshPotential {
public:
    explicit LogNormPotential(LiftEvaluator lift) : lift_(std::move(lift)) {}
    int n() const override { return lift_.n(); }
    PotentialEval eval(const VectorXcd& z) const override;
    const LiftEvaluator& lift() const { return lift_; }

private:
    LiftEvaluator lift_;
};

/// u(z) = ln(|z1|^2 + |z1 - eps|^2 + |z2|^2 + |z3|^k) on C^3, the potential
/// of the unbounded-mass experiment. Closed-form gradient and Hessian.
class RashkovskiiPotential : public PshPotential {
public:
    RashkovskiiPotential(int k, double eps) : k_(k), eps_(eps) {}
    int n() const override { return 3; }
    PotentialEval eval(const VectorXcd& z) const override;
    int k() const { return k_; }
    double eps() const { return eps_; }

private:
    int k_;
    double eps_;
};

/// Elementary symmetric functions of the eigenvalues of a Hermitian matrix,
/// via sums of principal minors (no eigensolver needed).
double hermitian_ep(const MatrixXcd& H, int p);

}  // namespace mero
