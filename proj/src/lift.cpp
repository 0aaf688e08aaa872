#include "meroconv/lift.hpp"

#include <cmath>
#include <stdexcept>

#include "meroconv/quadrature.hpp"

namespace mero {

namespace {

std::vector<std::complex<double>> to_std(const VectorXcd& z) {
    return {z.data(), z.data() + z.size()};
}

}  // namespace

LiftEvaluator LiftEvaluator::from_tuple(const PolyTuple& t) {
    LiftEvaluator ev;
    ev.n_ = t.nvars();
    ev.ncomp_ = t.size();
    ev.tuple_ = std::make_shared<PolyTuple>(t);
    ev.deriv_err_bound_ = 1e-10;

    auto tp = ev.tuple_;
    int n = ev.n_, m = ev.ncomp_;

    auto d1 = std::make_shared<std::vector<std::vector<SparsePoly>>>();
    auto d2 = std::make_shared<std::vector<std::vector<std::vector<SparsePoly>>>>();
    d1->resize(m);
    d2->resize(m);
    for (int j = 0; j < m; ++j) {
        (*d1)[j].reserve(n);
        for (int a = 0; a < n; ++a) (*d1)[j].push_back(tp->comps[j].derivative(a));
        (*d2)[j].resize(n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) (*d2)[j][a].push_back((*d1)[j][a].derivative(b));
    }

    ev.value_ = [tp, m](const VectorXcd& z) {
        auto v = tp->eval(to_std(z));
        VectorXcd out(m);
        for (int j = 0; j < m; ++j) out(j) = v[j];
        return out;
    };
    ev.jacobian_ = [d1, n, m](const VectorXcd& z) {
        auto zz = to_std(z);
        MatrixXcd J(m, n);
        for (int j = 0; j < m; ++j)
            for (int a = 0; a < n; ++a) J(j, a) = (*d1)[j][a].eval(zz);
        return J;
    };
    ev.second_ = [d2, n, m](const VectorXcd& z) {
        auto zz = to_std(z);
        std::vector<MatrixXcd> out(m, MatrixXcd(n, n));
        for (int j = 0; j < m; ++j)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) out[j](a, b) = (*d2)[j][a][b].eval(zz);
        return out;
    };
    return ev;
}

LiftEvaluator LiftEvaluator::black_box(int n, int ncomp, ValueFn f, double rel_step) {
    LiftEvaluator ev;
    ev.n_ = n;
    ev.ncomp_ = ncomp;
    ev.value_ = f;
    // sixth-order central differences: error ~ C * step^6 + roundoff/step
    ev.deriv_err_bound_ = 1e-8;

    auto step_for = [rel_step](const VectorXcd& z) {
        double scale = std::max(1.0, z.norm());
        return rel_step * scale;
    };

    ev.jacobian_ = [f, n, ncomp, step_for](const VectorXcd& z) {
        MatrixXcd J(ncomp, n);
        double h = step_for(z);
        static const double c[3] = {3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0};
        for (int a = 0; a < n; ++a) {
            VectorXcd acc = VectorXcd::Zero(ncomp);
            for (int s = 1; s <= 3; ++s) {
                VectorXcd zp = z, zm = z;
                zp(a) += s * h;
                zm(a) -= s * h;
                acc += c[s - 1] * (f(zp) - f(zm));
            }
            J.col(a) = acc / h;
        }
        return J;
    };
    auto jac = ev.jacobian_;
    ev.second_ = [jac, n, ncomp, step_for](const VectorXcd& z) {
        double h = step_for(z) * 4.0;
        std::vector<MatrixXcd> out(ncomp, MatrixXcd(n, n));
        for (int b = 0; b < n; ++b) {
            VectorXcd zp = z, zm = z;
            zp(b) += h;
            zm(b) -= h;
            MatrixXcd Jp = jac(zp), Jm = jac(zm);
            MatrixXcd D = (Jp - Jm) / (2.0 * h);
            for (int j = 0; j < ncomp; ++j)
                for (int a = 0; a < n; ++a) out[j](a, b) = D(j, a);
        }
        return out;
    };
    return ev;
}

double LiftEvaluator::validate_derivatives(std::uint64_t seed, int npoints, double box_radius) const {
    auto rng = substream(seed, 7);
    std::uniform_real_distribution<double> U(-box_radius, box_radius);
    double worst = 0.0;
    for (int it = 0; it < npoints; ++it) {
        VectorXcd z(n_);
        for (int i = 0; i < n_; ++i) z(i) = std::complex<double>(U(rng), U(rng));
        MatrixXcd J = jacobian(z);
        double h = 1e-5 * std::max(1.0, z.norm());
        for (int a = 0; a < n_; ++a) {
            VectorXcd zp = z, zm = z;
            zp(a) += h;
            zm(a) -= h;
            VectorXcd fd = (value(zp) - value(zm)) / (2.0 * h);
            double scale = std::max(1.0, J.col(a).norm());
            worst = std::max(worst, (fd - J.col(a)).norm() / scale);
        }
    }
    return worst;
}

PotentialEval LogNormPotential::eval(const VectorXcd& z) const {
    PotentialEval out;
    int n = lift_.n();
    VectorXcd F = lift_.value(z);
    double mx = F.cwiseAbs().maxCoeff();
    if (!(mx > 1e-280) || !std::isfinite(mx)) {
        out.singular = true;
        out.u = -std::numeric_limits<double>::infinity();
        out.grad = VectorXcd::Zero(n);
        out.hess = MatrixXcd::Zero(n, n);
        return out;
    }
    // normalize pointwise: a constant scalar shifts u but leaves the
    // gradient/Hessian formulas unchanged, and keeps closed-form iterates
    // with extreme component scales out of the subnormal range
    double true_log = 2.0 * std::log(mx);
    VectorXcd Fn = F / mx;
    MatrixXcd J = lift_.jacobian(z) / mx;
    double S = Fn.squaredNorm();
    out.u = std::log(S) + true_log;
    // v_a = sum_j (d_a f^j) conj(f^j)
    VectorXcd v = J.transpose() * Fn.conjugate();
    out.grad = v / S;
    // H_ab = sum_j (d_a f^j) conj(d_b f^j)/S - v_a conj(v_b)/S^2
    MatrixXcd A = J.transpose() * J.conjugate();
    out.hess = A / S - (v * v.adjoint()) / (S * S);
    return out;
}

PotentialEval RashkovskiiPotential::eval(const VectorXcd& z) const {
    PotentialEval out;
    std::complex<double> z1 = z(0), z2 = z(1), z3 = z(2);
    double a3 = std::abs(z3);
    double T = std::norm(z1) + std::norm(z1 - eps_) + std::norm(z2) + std::pow(a3, k_);
    if (T <= 1e-280) {
        out.singular = true;
        out.u = -std::numeric_limits<double>::infinity();
        out.grad = VectorXcd::Zero(3);
        out.hess = MatrixXcd::Zero(3, 3);
        return out;
    }
    out.u = std::log(T);
    VectorXcd Tz(3);
    Tz(0) = std::conj(z1) + std::conj(z1 - eps_);
    Tz(1) = std::conj(z2);
    // d|z3|^k/dz3 = (k/2)|z3|^(k-2) conj(z3)
    double pk2 = (a3 > 0.0) ? std::pow(a3, k_ - 2) : (k_ >= 2 ? (k_ == 2 ? 1.0 : 0.0) : 0.0);
    if (a3 == 0.0 && k_ < 2) out.singular = true;
    Tz(2) = 0.5 * k_ * pk2 * std::conj(z3);
    MatrixXcd Th = MatrixXcd::Zero(3, 3);
    Th(0, 0) = 2.0;
    Th(1, 1) = 1.0;
    Th(2, 2) = 0.25 * k_ * k_ * pk2;
    out.grad = Tz / T;
    out.hess = Th / T - (Tz * Tz.adjoint()) / (T * T);
    return out;
}

double hermitian_ep(const MatrixXcd& H, int p) {
    int n = static_cast<int>(H.rows());
    if (p == 0) return 1.0;
    if (p == 1) return H.trace().real();
    if (p > n) throw std::invalid_argument("hermitian_ep: order out of range");
    // scale entries to O(1) first: explicit minor formulas on raw entries of
    // magnitude ~1e-300 underflow pairwise products (and LU pivot scores)
    double t = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            t = std::max(t, std::max(std::abs(H(i, j).real()), std::abs(H(i, j).imag())));
    if (t == 0.0 || !std::isfinite(t)) return 0.0;
    MatrixXcd A = H / t;
    double result = 0.0;
    if (p == 2) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                result += (A(i, i) * A(j, j)).real() - std::norm(A(i, j));
    } else if (p == 3 && n == 3) {
        std::complex<double> det =
            A(0, 0) * (A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1)) -
            A(0, 1) * (A(1, 0) * A(2, 2) - A(1, 2) * A(2, 0)) +
            A(0, 2) * (A(1, 0) * A(2, 1) - A(1, 1) * A(2, 0));
        result = det.real();
    } else {
        throw std::invalid_argument("hermitian_ep: unsupported order");
    }
    if (result == 0.0) return 0.0;
    double scale_log = p * std::log(t);
    if (scale_log < -700.0) return 0.0;
    if (scale_log > 700.0)
        return result > 0 ? std::numeric_limits<double>::infinity()
                          : -std::numeric_limits<double>::infinity();
    return result * std::exp(scale_log);
}

}  // namespace mero
