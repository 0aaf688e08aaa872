#include "meroconv/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <mutex>

#include "meroconv/proj_map.hpp"

namespace mero {

namespace {

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// c_{n,p} in  omega_e^{n-p} ^ (dd^c u)^p = c_{n,p} e_p(H) dV
double mass_constant(int n, int p) { return factorial(p) * factorial(n - p) / std::pow(M_PI, p); }

}  // namespace

double ZeroSetSpec::distance(const VectorXcd& z) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& pt : points) {
        double d2 = 0.0;
        for (int i = 0; i < z.size(); ++i) d2 += std::norm(z(i) - pt[i]);
        best = std::min(best, std::sqrt(d2));
    }
    for (const auto& sub : subspaces) {
        double d2 = 0.0;
        for (int v : sub) d2 += std::norm(z(v));
        best = std::min(best, std::sqrt(d2));
    }
    if (custom) best = std::min(best, custom(z));
    return best;
}

// ---------------------------------------------------------------------------
// ComplexPoly
// ---------------------------------------------------------------------------

ComplexPoly ComplexPoly::from_univariate(const SparsePoly& p, int var) {
    ComplexPoly out;
    for (const auto& [e, c] : p.terms()) {
        for (int i = 0; i < p.nvars(); ++i)
            if (i != var && e[i] != 0)
                throw std::invalid_argument("ComplexPoly: polynomial not univariate in the slice variable");
        std::size_t k = e[var].convert_to<std::size_t>();
        if (out.coeffs.size() <= k) out.coeffs.resize(k + 1, {0.0, 0.0});
        out.coeffs[k] += c.to_complex();
    }
    if (out.coeffs.empty()) out.coeffs.push_back({0.0, 0.0});
    return out;
}

std::complex<double> ComplexPoly::eval(std::complex<double> z) const {
    std::complex<double> acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
    return acc;
}

ComplexPoly ComplexPoly::derivative() const {
    ComplexPoly d;
    if (coeffs.size() <= 1) {
        d.coeffs.push_back({0.0, 0.0});
        return d;
    }
    d.coeffs.resize(coeffs.size() - 1);
    for (std::size_t i = 1; i < coeffs.size(); ++i) d.coeffs[i - 1] = coeffs[i] * double(i);
    return d;
}

bool ComplexPoly::near_zero() const {
    for (const auto& c : coeffs)
        if (std::abs(c) > 1e-300) return false;
    return true;
}

std::vector<std::complex<double>> ComplexPoly::roots() const {
    // strip leading/trailing negligible coefficients relative to the largest
    double scale = 0.0;
    for (const auto& c : coeffs) scale = std::max(scale, std::abs(c));
    if (scale == 0.0) return {};
    int deg = static_cast<int>(coeffs.size()) - 1;
    while (deg > 0 && std::abs(coeffs[deg]) < 1e-14 * scale) --deg;
    if (deg == 0) return {};
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 0; i < deg; ++i) {
        comp(i, deg - 1) = -coeffs[i] / coeffs[deg];
        if (i + 1 < deg) comp(i + 1, i) = 1.0;
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    std::vector<std::complex<double>> out(deg);
    for (int i = 0; i < deg; ++i) out[i] = es.eigenvalues()(i);
    return out;
}

ScalarFunction ComplexPoly::handle() const {
    auto self = std::make_shared<ComplexPoly>(*this);
    auto d = std::make_shared<ComplexPoly>(derivative());
    ScalarFunction s;
    s.f = [self](std::complex<double> z) { return self->eval(z); };
    s.df = [d](std::complex<double> z) { return d->eval(z); };
    return s;
}

// ---------------------------------------------------------------------------
// zero_count_contour
// ---------------------------------------------------------------------------

CountReport zero_count_contour(const ScalarFunction& h, const ContourSpec& c) {
    CountReport rep;
    auto df = h.df;
    if (!df) {
        double delta = 1e-6 * c.radius;
        auto f = h.f;
        df = [f, delta](std::complex<double> z) {
            return (-f(z + 2.0 * delta) + 8.0 * f(z + delta) - 8.0 * f(z - delta) +
                    f(z - 2.0 * delta)) /
                   (12.0 * delta);
        };
    }
    std::complex<double> prev = 0.0;
    bool have_prev = false;
    for (int nodes = c.start_nodes; nodes <= c.max_nodes; nodes *= 2) {
        std::complex<double> acc = 0.0;
        double min_mod = std::numeric_limits<double>::infinity();
        double max_mod = 0.0;
        for (int i = 0; i < nodes; ++i) {
            double th = 2.0 * M_PI * i / nodes;
            std::complex<double> e = std::polar(1.0, th);
            std::complex<double> z = c.center + c.radius * e;
            std::complex<double> hz = h.f(z);
            double m = std::abs(hz);
            min_mod = std::min(min_mod, m);
            max_mod = std::max(max_mod, m);
            acc += df(z) / hz * (c.radius * e);
        }
        acc /= static_cast<double>(nodes);  // (1/2pi i) * dz = (1/nodes) * i R e^{i th} / i
        rep.nodes_used = nodes;
        rep.min_modulus = (max_mod > 0) ? min_mod / max_mod : 0.0;
        if (max_mod == 0.0 || rep.min_modulus < c.min_modulus_rel) {
            rep.ok = false;
            rep.error = "near-vanishing on contour";
            return rep;
        }
        double rounded = std::round(acc.real());
        rep.count = static_cast<long>(rounded);
        rep.residual = std::abs(acc - std::complex<double>(rounded, 0.0));
        if (have_prev && std::abs(acc - prev) < 1e-9 && rep.residual < c.residual_tol) {
            rep.ok = true;
            return rep;
        }
        prev = acc;
        have_prev = true;
    }
    if (rep.residual >= c.residual_tol) {
        rep.ok = false;
        rep.error = "residual too large: quadrature budget insufficient";
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Fubini-Study areas
// ---------------------------------------------------------------------------

namespace {

// FS pullback density at a 1-variable point: (1/pi) e_1(H) with H the 1x1
// complex Hessian of ln||F||^2.
double fs_density_1d(const LogNormPotential& u, std::complex<double> z) {
    VectorXcd zz(1);
    zz(0) = z;
    auto ev = u.eval(zz);
    if (ev.singular) return 0.0;
    return ev.hess(0, 0).real() / M_PI;
}

}  // namespace

AreaReport fs_area_interior(const LiftEvaluator& lift, const ContourSpec& disk, int radial_nodes,
                            int radial_panels, int angular_nodes, double target_tol) {
    AreaReport rep;
    if (lift.n() != 1) throw std::invalid_argument("fs_area_interior: one-variable lift required");
    LogNormPotential u(lift);
    double R = disk.radius;
    // panels refine toward 0 so large disks still resolve the unit-scale bump
    double bias = (R > 4.0) ? 3.0 : 1.0;
    int panels = (R > 4.0) ? std::max(radial_panels, 6) : radial_panels;

    auto level_value = [&](int rn, int an) {
        auto radial = [&](double rho) {
            auto ang = [&](double th) {
                return fs_density_1d(u, disk.center + std::polar(rho, th));
            };
            return rho * integrate_periodic(ang, an);
        };
        return integrate_panels(radial, 0.0, R, rn, panels, bias);
    };

    double prev = level_value(radial_nodes, angular_nodes);
    double err = std::numeric_limits<double>::infinity();
    for (int level = 1; level <= 3; ++level) {
        double cur = level_value(radial_nodes * (1 << level), angular_nodes * (1 << level));
        err = std::abs(cur - prev);
        prev = cur;
        if (err < target_tol * std::max(1.0, std::abs(cur))) break;
    }
    rep.value = prev;
    rep.est_error = err;
    return rep;
}

namespace {

// boundary pullback of d^c ln||F||^2 on |z - c| = R: (R/2pi) Re(u_z e^{i th})
double dc_boundary_integral(const LogNormPotential& u, std::complex<double> center, double R,
                            int start_nodes, double* est_err) {
    double prev = 0.0;
    bool have = false;
    double result = 0.0, err = 0.0;
    for (int nodes = start_nodes; nodes <= (1 << 16); nodes *= 2) {
        double acc = 0.0;
        for (int i = 0; i < nodes; ++i) {
            double th = 2.0 * M_PI * i / nodes;
            std::complex<double> e = std::polar(1.0, th);
            VectorXcd z(1);
            z(0) = center + R * e;
            auto ev = u.eval(z);
            acc += (ev.grad(0) * e).real();
        }
        result = acc * R / nodes;  // (R/2pi) * (2pi/nodes) * sum
        if (have) {
            err = std::abs(result - prev);
            if (err < 1e-11 * std::max(1.0, std::abs(result))) break;
        }
        prev = result;
        have = true;
    }
    if (est_err) *est_err = err;
    return result;
}

}  // namespace

AreaReport fs_area_boundary(const LiftEvaluator& lift, const ContourSpec& circle, std::uint64_t seed) {
    AreaReport rep;
    if (lift.n() != 1) throw std::invalid_argument("fs_area_boundary: one-variable lift required");
    LogNormPotential u(lift);

    // precondition: F nonvanishing on the boundary circle
    double minS = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 512; ++i) {
        VectorXcd z(1);
        z(0) = circle.center + std::polar(circle.radius, 2.0 * M_PI * i / 512);
        minS = std::min(minS, lift.value(z).squaredNorm());
    }
    if (minS < 1e-24) {
        rep.ok = false;
        rep.note = "lift vanishes on the boundary circle";
        return rep;
    }

    double berr = 0.0;
    rep.boundary_integral = dc_boundary_integral(u, circle.center, circle.radius, 128, &berr);

    // N_F: exact content count for polynomial lifts
    long nf = 0;
    bool nf_ok = false;
    if (const PolyTuple* t = lift.tuple()) {
        SparsePoly content = tuple_content(*t);
        if (content.is_constant()) {
            nf = 0;
            nf_ok = true;
        } else {
            auto cp = ComplexPoly::from_univariate(content, 0);
            ContourSpec cc = circle;
            auto cr = zero_count_contour(cp.handle(), cc);
            if (cr.ok) {
                nf = cr.count;
                nf_ok = true;
            } else {
                rep.note = "content count failed: " + cr.error;
            }
        }
    }
    if (!nf_ok) {
        // generic linear combinations; extra zeros of a combination vary with
        // the draw while N_F is invariant, so take the minimum of agreeing draws
        auto rng = substream(seed, 3);
        std::uniform_real_distribution<double> U(0.0, 2.0 * M_PI);
        std::vector<long> counts;
        for (int draw = 0; draw < 4; ++draw) {
            std::vector<std::complex<double>> cvec(lift.ncomp());
            for (auto& c : cvec) c = std::polar(1.0, U(rng));
            ScalarFunction h;
            h.f = [&lift, cvec](std::complex<double> z) {
                VectorXcd zz(1);
                zz(0) = z;
                VectorXcd F = lift.value(zz);
                std::complex<double> acc = 0.0;
                for (int j = 0; j < F.size(); ++j) acc += cvec[j] * F(j);
                return acc;
            };
            h.df = [&lift, cvec](std::complex<double> z) {
                VectorXcd zz(1);
                zz(0) = z;
                MatrixXcd J = lift.jacobian(zz);
                std::complex<double> acc = 0.0;
                for (int j = 0; j < J.rows(); ++j) acc += cvec[j] * J(j, 0);
                return acc;
            };
            auto cr = zero_count_contour(h, circle);
            if (cr.ok) counts.push_back(cr.count);
        }
        if (counts.empty()) {
            rep.ok = false;
            rep.note = "no generic combination admitted a zero count";
            return rep;
        }
        long mn = *std::min_element(counts.begin(), counts.end());
        long agree = std::count(counts.begin(), counts.end(), mn);
        nf = mn;
        if (agree < 2 && counts.size() > 1) {
            rep.ok = false;
            rep.note = "N_F disagreement between generic combinations";
        }
    }
    rep.lift_zero_count = nf;
    rep.value = rep.boundary_integral - static_cast<double>(nf);
    rep.est_error = berr;
    return rep;
}

// ---------------------------------------------------------------------------
// Mixed Monge-Ampere masses
// ---------------------------------------------------------------------------

namespace {

struct DensityStats {
    double min_density = 0.0;
};

// integrate a pointwise density over the polydisk minus the eps-tube
double integrate_polydisk(const PshPotential& u, const PolydiskSpec& dom, int p, double eps,
                          int radial_nodes, int angular_nodes, DensityStats* stats) {
    int n = dom.n();
    double cnp = mass_constant(n, p);

    // per-variable radial rules; exact radial cut at eps for single-variable
    // subspace exclusions through the polydisk center
    std::vector<GaussRule> radial(n);
    std::vector<int> angles(n, angular_nodes);
    for (int i = 0; i < n; ++i) {
        double lo = 0.0;
        bool axis_cut = false;
        for (const auto& sub : dom.exclusion.subspaces)
            if (sub.size() == 1 && sub[0] == i && std::abs(dom.center[i]) < 1e-15) axis_cut = true;
        if (axis_cut) lo = std::min(eps, dom.radii[i]);
        GaussRule rule;
        int panels = dom.radial_panels;
        // geometric panels toward the inner edge resolve tube-boundary growth
        std::vector<double> cuts(panels + 1);
        double span = dom.radii[i] - lo;
        double w = 1.0, total = 0.0;
        std::vector<double> widths(panels);
        for (int q = panels - 1; q >= 0; --q) {
            widths[q] = w;
            total += w;
            w *= 2.0;
        }
        cuts[0] = lo;
        for (int q = 0; q < panels; ++q) cuts[q + 1] = cuts[q] + span * widths[q] / total;
        for (int q = 0; q < panels; ++q) {
            auto r = gauss_legendre_on(radial_nodes, cuts[q], cuts[q + 1]);
            rule.nodes.insert(rule.nodes.end(), r.nodes.begin(), r.nodes.end());
            rule.weights.insert(rule.weights.end(), r.weights.begin(), r.weights.end());
        }
        radial[i] = std::move(rule);
    }

    double acc = 0.0;
    VectorXcd z(n);
    std::function<void(int, double)> recurse = [&](int var, double weight) {
        if (var == n) {
            if (eps > 0.0 && !dom.exclusion.empty() && dom.exclusion.distance(z) < eps) return;
            auto ev = u.eval(z);
            if (ev.singular) return;
            double d = hermitian_ep(ev.hess, p);
            if (stats) stats->min_density = std::min(stats->min_density, d);
            acc += weight * cnp * d;
            return;
        }
        for (std::size_t ri = 0; ri < radial[var].nodes.size(); ++ri) {
            double rho = radial[var].nodes[ri];
            double wr = radial[var].weights[ri] * rho;
            for (int ai = 0; ai < angles[var]; ++ai) {
                double th = 2.0 * M_PI * ai / angles[var];
                z(var) = dom.center[var] + std::polar(rho, th);
                recurse(var + 1, weight * wr * (2.0 * M_PI / angles[var]));
            }
        }
    };
    recurse(0, 1.0);
    return acc;
}

double integrate_ball2(const PshPotential& u, const BallSpec& dom, int p, double eps,
                       int radial_nodes, int angular_nodes, DensityStats* stats) {
    double cnp = mass_constant(2, p);
    double R = dom.radius;
    double acc = 0.0;
    auto r1rule = gauss_legendre_on(radial_nodes, 0.0, R);
    VectorXcd z(2);
    for (std::size_t i1 = 0; i1 < r1rule.nodes.size(); ++i1) {
        double r1 = r1rule.nodes[i1];
        double bound = std::sqrt(std::max(0.0, R * R - r1 * r1));
        if (bound <= 0.0) continue;
        auto r2rule = gauss_legendre_on(radial_nodes, 0.0, bound);
        for (std::size_t i2 = 0; i2 < r2rule.nodes.size(); ++i2) {
            double r2 = r2rule.nodes[i2];
            for (int a1 = 0; a1 < angular_nodes; ++a1)
                for (int a2 = 0; a2 < angular_nodes; ++a2) {
                    z(0) = dom.center[0] + std::polar(r1, 2.0 * M_PI * a1 / angular_nodes);
                    z(1) = dom.center[1] + std::polar(r2, 2.0 * M_PI * a2 / angular_nodes);
                    if (eps > 0.0 && !dom.exclusion.empty() && dom.exclusion.distance(z) < eps)
                        continue;
                    auto ev = u.eval(z);
                    if (ev.singular) continue;
                    double d = hermitian_ep(ev.hess, p);
                    if (stats) stats->min_density = std::min(stats->min_density, d);
                    double w = r1rule.weights[i1] * r1 * r2rule.weights[i2] * r2 *
                               std::pow(2.0 * M_PI / angular_nodes, 2);
                    acc += w * cnp * d;
                }
        }
    }
    return acc;
}

MassReport schedule_and_report(const std::function<double(double, int, DensityStats*)>& value_at,
                               int p, double eps, const MassOptions& opts, bool has_exclusion) {
    MassReport rep;
    rep.order = p;
    DensityStats stats;
    if (eps <= 0.0 || !has_exclusion || !opts.extrapolate) {
        double v0 = value_at(eps, 0, &stats);
        double v1 = value_at(eps, 1, nullptr);
        rep.value = v1;
        rep.est_error = std::abs(v1 - v0);
        rep.eps_used = eps;
    } else {
        std::vector<double> ms;
        double e = eps;
        double quad_err = 0.0;
        for (int s = 0; s < opts.schedule; ++s) {
            double v0 = value_at(e, 0, s == 0 ? &stats : nullptr);
            double v1 = value_at(e, 1, nullptr);
            quad_err = std::max(quad_err, std::abs(v1 - v0));
            ms.push_back(v1);
            e /= 2.0;
        }
        rep.eps_used = e * 2.0;
        rep.value = ms.back();
        rep.est_error = quad_err;
        if (ms.size() >= 3) {
            double d1 = ms[ms.size() - 2] - ms[ms.size() - 3];
            double d2 = ms[ms.size() - 1] - ms[ms.size() - 2];
            if (std::abs(d2) < std::abs(d1) && std::abs(d1 - d2) > 1e-300) {
                double limit = ms.back() + d2 * d2 / (d1 - d2);
                rep.est_error += std::abs(limit - ms.back());
                rep.value = limit;
                rep.extrapolated = true;
            } else if (std::abs(d2) > 1e-9 * std::max(1.0, std::abs(ms.back()))) {
                rep.note = "eps schedule not stabilizing";
            }
        }
    }
    rep.min_density = stats.min_density;
    if (rep.min_density < -1e-8) {
        rep.ok = false;
        rep.note = "negative Monge-Ampere density beyond tolerance (derivative bug?)";
    }
    return rep;
}

}  // namespace

MassReport mixed_ma_mass(const PshPotential& u, const PolydiskSpec& dom, int p,
                         const MassOptions& opts) {
    int n = dom.n();
    if (p < 0 || p > n) throw std::invalid_argument("mixed_ma_mass: order out of range");
    auto value_at = [&](double eps, int level, DensityStats* stats) {
        int rn = dom.radial_nodes + level * (dom.radial_nodes / 2);
        int an = dom.angular_nodes + level * (dom.angular_nodes / 2);
        return integrate_polydisk(u, dom, p, eps, rn, an, stats);
    };
    auto rep = schedule_and_report(value_at, p, dom.eps, opts, !dom.exclusion.empty());
    return rep;
}

MassReport mixed_ma_mass(const PshPotential& u, const BallSpec& dom, int p, const MassOptions& opts) {
    int n = dom.n();
    if (p < 0 || p > n) throw std::invalid_argument("mixed_ma_mass: order out of range");
    if (n == 2) {
        auto value_at = [&](double eps, int level, DensityStats* stats) {
            int rn = dom.radial_nodes + level * (dom.radial_nodes / 2);
            int an = dom.angular_nodes + level * (dom.angular_nodes / 2);
            return integrate_ball2(u, dom, p, eps, rn, an, stats);
        };
        return schedule_and_report(value_at, p, dom.eps, opts, !dom.exclusion.empty());
    }
    if (n != 3) throw std::invalid_argument("mixed_ma_mass: ball domains support n = 2 or 3");

    MassReport rep;
    rep.order = p;
    double cnp = mass_constant(n, p);
    double min_density = 0.0;
    std::mutex mu;
    auto density = [&](const std::vector<std::complex<double>>& zz) {
        VectorXcd z(3);
        for (int i = 0; i < 3; ++i) z(i) = zz[i];
        if (dom.eps > 0.0 && !dom.exclusion.empty() && dom.exclusion.distance(z) < dom.eps)
            return 0.0;
        auto ev = u.eval(z);
        if (ev.singular) return 0.0;
        double d = hermitian_ep(ev.hess, p);
        if (d < -1e-6) {
            std::lock_guard<std::mutex> lock(mu);
            min_density = std::min(min_density, d);
        }
        return cnp * d;
    };
    McEstimate est = dom.importance.empty()
                         ? mc_ball_integral(density, dom.center, dom.radius, dom.samples, dom.seed,
                                            dom.workers)
                         : mc_ball_mixture(density, dom.center, dom.radius, dom.importance,
                                           dom.samples, dom.seed, dom.workers);
    rep.value = est.value;
    rep.est_error = est.std_error;
    rep.samples = est.samples;
    rep.eps_used = dom.eps;
    rep.min_density = min_density;
    if (min_density < -1e-8) {
        rep.ok = false;
        rep.note = "negative Monge-Ampere density beyond tolerance (derivative bug?)";
    }
    return rep;
}

MassReport mixed_ma_mass(const LiftEvaluator& lift, const PolydiskSpec& dom, int p,
                         const MassOptions& opts) {
    LogNormPotential u(lift);
    return mixed_ma_mass(u, dom, p, opts);
}

MassReport graph_volume(const LiftEvaluator& lift, const PolydiskSpec& dom, const MassOptions& opts) {
    int n = dom.n();
    LogNormPotential u(lift);
    MassReport total;
    total.order = -1;
    double binom = 1.0;
    for (int p = 0; p <= n; ++p) {
        MassReport mp = mixed_ma_mass(u, dom, p, opts);
        if (!mp.ok) {
            total.ok = false;
            total.note = mp.note;
        }
        total.value += binom * mp.value;
        total.est_error += binom * mp.est_error;
        total.min_density = std::min(total.min_density, mp.min_density);
        total.eps_used = mp.eps_used;
        total.extrapolated = total.extrapolated || mp.extrapolated;
        binom = binom * (n - p) / (p + 1);
    }
    return total;
}

// ---------------------------------------------------------------------------
// King residue
// ---------------------------------------------------------------------------

namespace {

// integral of d^c u ^ dd^c u over the sphere |z - c| = r in C^2 using Hopf
// coordinates z1 = c1 + r cos(eta) e^{i xi1}, z2 = c2 + r sin(eta) e^{i xi2}.
// The (eta, xi1, xi2) frame is inward-oriented, hence the leading minus.
double king_boundary(const PshPotential& u, std::complex<double> c1, std::complex<double> c2,
                     double r, int eta_nodes, int angle_nodes) {
    auto rule = gauss_legendre_on(eta_nodes, 0.0, M_PI / 2.0);
    double acc = 0.0;
    for (int ie = 0; ie < eta_nodes; ++ie) {
        double eta = rule.nodes[ie];
        double ce = std::cos(eta), se = std::sin(eta);
        double inner = 0.0;
        for (int i1 = 0; i1 < angle_nodes; ++i1) {
            double x1 = 2.0 * M_PI * i1 / angle_nodes;
            std::complex<double> e1 = std::polar(1.0, x1);
            for (int i2 = 0; i2 < angle_nodes; ++i2) {
                double x2 = 2.0 * M_PI * i2 / angle_nodes;
                std::complex<double> e2 = std::polar(1.0, x2);
                VectorXcd z(2);
                z(0) = c1 + r * ce * e1;
                z(1) = c2 + r * se * e2;
                auto ev = u.eval(z);
                if (ev.singular) continue;
                // P(j, t): d z_j / d t, t = (eta, xi1, xi2)
                Eigen::Matrix<std::complex<double>, 2, 3> P;
                P(0, 0) = -r * se * e1;
                P(0, 1) = std::complex<double>(0, 1) * r * ce * e1;
                P(0, 2) = 0.0;
                P(1, 0) = r * ce * e2;
                P(1, 1) = 0.0;
                P(1, 2) = std::complex<double>(0, 1) * r * se * e2;
                Eigen::Matrix<std::complex<double>, 2, 3> Q = P.conjugate();

                // a = pullback of d^c u = (i/4pi)(conj(g_j) dz̄_j - g_j dz_j)
                std::complex<double> I(0, 1);
                Eigen::Vector3cd a;
                for (int t = 0; t < 3; ++t) {
                    std::complex<double> s = 0.0;
                    for (int j = 0; j < 2; ++j)
                        s += std::conj(ev.grad(j)) * Q(j, t) - ev.grad(j) * P(j, t);
                    a(t) = I / (4.0 * M_PI) * s;
                }
                // b = pullback of dd^c u = (i/2pi) H_jk dz_j ^ dz̄_k
                auto bcomp = [&](int t1, int t2) {
                    std::complex<double> s = 0.0;
                    for (int j = 0; j < 2; ++j)
                        for (int k = 0; k < 2; ++k)
                            s += ev.hess(j, k) * (P(j, t1) * Q(k, t2) - P(j, t2) * Q(k, t1));
                    return I / (2.0 * M_PI) * s;
                };
                std::complex<double> wedge = a(0) * bcomp(1, 2) - a(1) * bcomp(0, 2) +
                                             a(2) * bcomp(0, 1);
                inner += wedge.real();
            }
        }
        acc += rule.weights[ie] * inner * std::pow(2.0 * M_PI / angle_nodes, 2);
    }
    return -acc;
}

}  // namespace

KingReport king_residue_check(const LiftEvaluator& lift_c2, std::complex<double> c1,
                              std::complex<double> c2, double r, int eta_nodes, int angle_nodes) {
    if (lift_c2.n() != 2) throw std::invalid_argument("king_residue_check: C^2 lift required");
    KingReport rep;
    LogNormPotential u(lift_c2);
    double b0 = king_boundary(u, c1, c2, r, eta_nodes, angle_nodes);
    double b1 = king_boundary(u, c1, c2, r, eta_nodes + eta_nodes / 2, angle_nodes + angle_nodes / 2);
    rep.boundary_mass = b1;

    BallSpec ball;
    ball.center = {c1, c2};
    ball.radius = r;
    ball.eps = r * 0.04;
    ball.exclusion.points.push_back({c1, c2});
    ball.radial_nodes = 20;
    ball.angular_nodes = 20;
    MassOptions opts;
    opts.extrapolate = true;
    auto interior = mixed_ma_mass(u, ball, 2, opts);
    rep.interior_mass = interior.value;

    rep.atom = rep.boundary_mass - rep.interior_mass;
    rep.atom_int = std::lround(rep.atom);
    rep.atom_residual = std::abs(rep.atom - rep.atom_int) + std::abs(b1 - b0) + interior.est_error;
    if (rep.atom_residual > 0.05) {
        rep.ok = false;
        rep.note = "atom residual above tolerance";
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Rashkovskii experiment
// ---------------------------------------------------------------------------

RashkovskiiReport rashkovskii_mass(int k, double eps, const BallSpec& dom) {
    if (k < 1) throw std::invalid_argument("rashkovskii_mass: k >= 1");
    RashkovskiiReport rep;
    rep.k = k;
    rep.eps = eps;
    RashkovskiiPotential u(k, eps);

    BallSpec ball = dom;
    if (eps > 0.0 && ball.importance.empty()) {
        // density concentrates at scale eps near the two near-zero centers
        ImportanceBall b1, b2;
        b1.center = {std::complex<double>(0, 0), 0.0, 0.0};
        b2.center = {std::complex<double>(eps, 0), 0.0, 0.0};
        b1.scale = b2.scale = std::min(8.0 * eps, 0.9 * dom.radius);
        b1.weight = b2.weight = 0.2;
        ball.importance = {b1, b2};
    }
    if (eps == 0.0) {
        ball.eps = std::max(ball.eps, 1e-6);
        ball.exclusion.points.push_back({0.0, 0.0, 0.0});
    }
    rep.mc = mixed_ma_mass(u, ball, 3, MassOptions{false, 1});

    if (eps == 0.0 && k % 2 == 0) {
        // local mapping degree of G = (sqrt(2) z1, z2, z3^{k/2}) at 0: the
        // diagonal exponent matrix has |det| = k/2
        BigIntMatrix M;
        M.m = {{1, 0, 0}, {0, 1, 0}, {0, 0, BigInt(k / 2)}};
        rep.exact_atom = BigRat(M.det());
    }
    return rep;
}

// ---------------------------------------------------------------------------
// 2d wedge machinery
// ---------------------------------------------------------------------------

FormCoeff2 euclidean_form2() {
    return [](const Eigen::Vector2cd&) { return Eigen::Matrix2cd::Identity(); };
}

FormCoeff2 fs_pullback_form2(std::shared_ptr<LogNormPotential> u) {
    return [u](const Eigen::Vector2cd& z) -> Eigen::Matrix2cd {
        VectorXcd zz(2);
        zz(0) = z(0);
        zz(1) = z(1);
        auto ev = u->eval(zz);
        if (ev.singular) return Eigen::Matrix2cd::Zero();
        return ev.hess / M_PI;
    };
}

FormCoeff2 holo_gram_form2(std::function<Eigen::Vector2cd(const Eigen::Vector2cd&)> grad_h) {
    return [g = std::move(grad_h)](const Eigen::Vector2cd& z) -> Eigen::Matrix2cd {
        Eigen::Vector2cd d = g(z);
        return d * d.adjoint();
    };
}

double wedge_mass_2d(const FormCoeff2& A, const FormCoeff2& B, const PolydiskSpec& dom) {
    if (dom.n() != 2) throw std::invalid_argument("wedge_mass_2d: two variables required");
    auto rad0 = gauss_legendre_on(dom.radial_nodes * dom.radial_panels, 0.0, dom.radii[0]);
    auto rad1 = gauss_legendre_on(dom.radial_nodes * dom.radial_panels, 0.0, dom.radii[1]);
    double acc = 0.0;
    for (std::size_t i0 = 0; i0 < rad0.nodes.size(); ++i0)
        for (int a0 = 0; a0 < dom.angular_nodes; ++a0)
            for (std::size_t i1 = 0; i1 < rad1.nodes.size(); ++i1)
                for (int a1 = 0; a1 < dom.angular_nodes; ++a1) {
                    Eigen::Vector2cd z;
                    z(0) = dom.center[0] + std::polar(rad0.nodes[i0], 2.0 * M_PI * a0 / dom.angular_nodes);
                    z(1) = dom.center[1] + std::polar(rad1.nodes[i1], 2.0 * M_PI * a1 / dom.angular_nodes);
                    VectorXcd zfull(2);
                    zfull(0) = z(0);
                    zfull(1) = z(1);
                    if (dom.eps > 0.0 && !dom.exclusion.empty() &&
                        dom.exclusion.distance(zfull) < dom.eps)
                        continue;
                    Eigen::Matrix2cd MA = A(z), MB = B(z);
                    double integrand =
                        (MA.trace() * MB.trace() - (MA * MB).trace()).real();
                    double w = rad0.weights[i0] * rad0.nodes[i0] * rad1.weights[i1] * rad1.nodes[i1] *
                               std::pow(2.0 * M_PI / dom.angular_nodes, 2);
                    acc += w * integrand;
                }
    return acc;
}

}  // namespace mero
