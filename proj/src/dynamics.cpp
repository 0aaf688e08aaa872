#include "meroconv/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "meroconv/geometry.hpp"

namespace mero {

namespace {

struct HomogLog {
    bool neg_inf = false;
    BigRat value = 0;
};

// log-modulus forms of the homogeneous components at a chart point with
// log-moduli lam (chart coordinate has log-modulus 0)
std::vector<HomogLog> homog_log_values(const HomogRep& rep, int chart,
                                       const std::vector<ExtLog>& lam) {
    int nv = rep.tuple.nvars();
    std::vector<HomogLog> out;
    out.reserve(rep.tuple.comps.size());
    for (const auto& p : rep.tuple.comps) {
        HomogLog h;
        if (p.is_zero()) {
            h.neg_inf = true;
            out.push_back(h);
            continue;
        }
        const auto& [e, c] = *p.terms().begin();
        (void)c;
        BigRat acc = 0;
        int li = 0;
        for (int i = 0; i < nv; ++i) {
            if (i == chart) continue;
            if (e[i] != 0) {
                if (lam[li].neg_inf) {
                    h.neg_inf = true;
                    break;
                }
                acc += BigRat(e[i]) * lam[li].value;
            }
            ++li;
        }
        if (!h.neg_inf) h.value = acc;
        out.push_back(h);
    }
    return out;
}

// argmax with exact ties; returns indices of the maximal finite entries
std::vector<int> argmax_set(const std::vector<HomogLog>& h) {
    std::vector<int> best;
    for (int i = 0; i < static_cast<int>(h.size()); ++i) {
        if (h[i].neg_inf) continue;
        if (best.empty() || h[i].value > h[best[0]].value) {
            best = {i};
        } else if (h[i].value == h[best[0]].value) {
            best.push_back(i);
        }
    }
    return best;
}

BigRat margin_of(const std::vector<HomogLog>& h, int lead) {
    BigRat second;
    bool have = false;
    for (int i = 0; i < static_cast<int>(h.size()); ++i) {
        if (i == lead || h[i].neg_inf) continue;
        if (!have || h[i].value > second) {
            second = h[i].value;
            have = true;
        }
    }
    if (!have) return BigRat(0);
    return h[lead].value - second;
}

}  // namespace

OrbitRecord log_orbit(const MonomialMap& m, const std::vector<ExtLog>& chart_log_moduli,
                      const BigInt& k) {
    OrbitRecord rec;
    int n = m.exponents.dim();
    if (static_cast<int>(chart_log_moduli.size()) != n)
        throw std::invalid_argument("log_orbit: log-coordinate arity mismatch");

    auto decide = [&](const BigInt& kk) {
        HomogRep rep = m.iterate(kk).to_homog();
        auto h = homog_log_values(rep, m.chart, chart_log_moduli);
        return std::make_pair(argmax_set(h), h);
    };
    auto [lead_k, h_k] = decide(k);
    auto [lead_k2, h_k2] = decide(k + 3);

    if (lead_k.size() >= 2 && lead_k2.size() >= 2) {
        rec.julia_tie = true;
        return rec;
    }
    if (lead_k.size() == 1 && lead_k2.size() == 1 && lead_k[0] == lead_k2[0]) {
        // a genuine limit needs the dominance margin to grow with k;
        // constant margins mean a non-collapsing (e.g. periodic or identity)
        // orbit with no coordinate-point limit
        BigRat mg = margin_of(h_k, lead_k[0]);
        BigRat mg2 = margin_of(h_k2, lead_k2[0]);
        if (mg2 > mg) {
            rec.limit_index = lead_k[0];
            rec.margin = mg.str();
            rec.margin_value = to_double(mg);
            std::vector<std::complex<double>> pt(h_k.size(), 0.0);
            pt[rec.limit_index] = 1.0;
            rec.limit_point = pt;
        }
    }
    return rec;
}

OrbitRecord numeric_orbit(const HomogRep& f, const std::vector<std::complex<double>>& homog_point,
                          const NumericOrbitConfig& cfg) {
    OrbitRecord rec;
    std::vector<std::complex<double>> x = homog_point;
    double mx = 0.0;
    for (const auto& c : x) mx = std::max(mx, std::abs(c));
    if (mx == 0.0) throw std::invalid_argument("numeric_orbit: zero point");
    for (auto& c : x) c /= mx;
    rec.iterates.push_back(x);

    int stable = 0;
    bool converged_early = false;
    if (f.is_monomial()) {
        // evaluate closed-form iterates at the original point; stepping
        // walks orbits that approach an indeterminacy point into the zero
        // tuple, the closed form never does
        MonomialMap base = MonomialMap::from_homog(f, 0);
        MonomialMap cur = base;
        for (int step = 1; step <= cfg.k_max; ++step) {
            auto y = proj_eval_log(cur.to_homog().tuple, x);
            if (y.empty()) {
                rec.indeterminacy_step = step;
                return rec;
            }
            double d = fs_distance(rec.iterates.back(), y);
            rec.iterates.push_back(std::move(y));
            stable = (d < 1e-13) ? stable + 1 : 0;
            if (stable >= 3) {
                converged_early = true;
                break;
            }
            if (step < cfg.k_max) cur = cur.compose(base);
        }
    } else {
        for (int step = 1; step <= cfg.k_max; ++step) {
            auto y = f.tuple.eval(x);
            double my = 0.0;
            for (const auto& c : y) my = std::max(my, std::abs(c));
            if (my < cfg.indeterminacy_tol) {
                rec.indeterminacy_step = step;
                return rec;
            }
            for (auto& c : y) c /= my;
            double d = fs_distance(x, y);
            x = y;
            rec.iterates.push_back(x);
            stable = (d < 1e-13) ? stable + 1 : 0;
            if (stable >= 3) {
                converged_early = true;
                break;
            }
        }
    }
    bool cauchy = converged_early;
    if (!cauchy) {
        int w = std::min<int>(cfg.tail_window, static_cast<int>(rec.iterates.size()) - 1);
        cauchy = true;
        for (int i = static_cast<int>(rec.iterates.size()) - w;
             i + 1 < static_cast<int>(rec.iterates.size()); ++i)
            if (fs_distance(rec.iterates[i], rec.iterates[i + 1]) > cfg.fs_tol) cauchy = false;
    }
    rec.limit_cauchy = cauchy;
    if (cauchy) {
        rec.limit_point = rec.iterates.back();
        // label a coordinate point when unambiguous
        int best = -1;
        double bm = 0.0;
        for (int i = 0; i < static_cast<int>(rec.limit_point.size()); ++i) {
            double a = std::abs(rec.limit_point[i]);
            if (a > bm) {
                bm = a;
                best = i;
            }
        }
        std::vector<std::complex<double>> e(rec.limit_point.size(), 0.0);
        e[best] = 1.0;
        if (fs_distance(rec.limit_point, e) < 1e-3) rec.limit_index = best;
    }
    return rec;
}

// ---------------------------------------------------------------------------
// Fatou scan
// ---------------------------------------------------------------------------

namespace {

std::string label_for(int limit_index, bool on_axis_m2) {
    if (limit_index == 1) return "Phi1_to_r";
    if (limit_index == 2) return "Phi2_to_q";
    if (limit_index == 0) return on_axis_m2 ? "DeltaStar_to_p" : "Indeterminate";
    if (limit_index == -1) return "Fatou_none";  // equicontinuous, constant-type orbit
    return "Indeterminate";
}

}  // namespace

std::string FatouScanGrid::csv() const {
    std::ostringstream os;
    os << "m1,m2,label,margin\n";
    char buf[160];
    for (const auto& c : cells) {
        std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%s,%.12g\n", c.m1, c.m2, c.label.c_str(),
                      c.margin);
        os << buf;
    }
    return os.str();
}

FatouScanGrid fatou_scan(const HomogRep& f, const FatouScanSpec& spec) {
    FatouScanGrid grid;
    grid.spec = spec;
    bool monomial = f.is_monomial();
    std::optional<MonomialMap> mm;
    std::optional<HomogRep> rep_k, rep_k2;  // cached iterates for the exact path
    if (monomial) {
        mm = MonomialMap::from_homog(f, spec.chart);
        rep_k = mm->iterate(BigInt(spec.k)).to_homog();
        rep_k2 = mm->iterate(BigInt(spec.k) + 3).to_homog();
    }
    // dominance decision against the cached iterate forms
    auto decide_cached = [&](const std::vector<ExtLog>& lam) {
        OrbitRecord rec;
        auto h1 = homog_log_values(*rep_k, spec.chart, lam);
        auto h2 = homog_log_values(*rep_k2, spec.chart, lam);
        auto a1 = argmax_set(h1);
        auto a2 = argmax_set(h2);
        if (a1.size() >= 2 && a2.size() >= 2) {
            rec.julia_tie = true;
            return rec;
        }
        if (a1.size() == 1 && a2.size() == 1 && a1[0] == a2[0]) {
            BigRat m1r = margin_of(h1, a1[0]);
            BigRat m2r = margin_of(h2, a2[0]);
            if (m2r > m1r) {
                rec.limit_index = a1[0];
                rec.margin_value = to_double(m1r);
            }
        }
        return rec;
    };

    auto coord = [](double lo, double hi, int n, int i, bool centers) {
        if (centers) return lo + (hi - lo) * (i + 0.5) / n;
        return n == 1 ? lo : lo + (hi - lo) * i / (n - 1.0);
    };

    for (int i1 = 0; i1 < spec.n1; ++i1) {
        double m1 = coord(spec.m1_min, spec.m1_max, spec.n1, i1, spec.cell_centers);
        for (int i2 = 0; i2 < spec.n2; ++i2) {
            double m2 = coord(spec.m2_min, spec.m2_max, spec.n2, i2, spec.cell_centers);
            FatouCell cell;
            cell.m1 = m1;
            cell.m2 = m2;
            cell.margin = (m1 > 0.0) ? std::abs(std::log(m1)) : std::numeric_limits<double>::infinity();
            if (m1 == 0.0) {
                // the line {u1 = 0} maps into the indeterminacy closure
                cell.label = "Indeterminate";
                grid.cells.push_back(cell);
                continue;
            }
            if (monomial) {
                auto lam_of = [&](double a, double b) {
                    std::vector<ExtLog> lam(2);
                    lam[0] = ExtLog::of(exact_rational(std::log(a)));
                    lam[1] = (b == 0.0) ? ExtLog::minus_infinity()
                                        : ExtLog::of(exact_rational(std::log(b)));
                    return lam;
                };
                bool exact_cone = (m1 == 1.0);
                if (!exact_cone && cell.margin < spec.margin_indeterminate) {
                    cell.label = "Indeterminate";
                    grid.cells.push_back(cell);
                    continue;
                }
                if (exact_cone) cell.margin = 0.0;
                // center + 4 in-stratum perturbed samples must agree on the
                // limit (an exact tie carries no limit and counts as none)
                auto run = [&](double a, double b) { return decide_cached(lam_of(a, b)); };
                auto rec = run(m1, m2);
                double d1 = spec.perturb * m1;
                double d2 = spec.perturb * std::max(m2, 0.0);
                std::vector<OrbitRecord> probes;
                probes.push_back(run(m1 + d1, m2));
                probes.push_back(run(std::max(1e-12, m1 - d1), m2));
                if (m2 > 0.0) {
                    probes.push_back(run(m1, m2 + d2));
                    probes.push_back(run(m1, std::max(1e-12, m2 - d2)));
                } else {
                    probes.push_back(run(m1 + 0.5 * d1, m2));
                    probes.push_back(run(std::max(1e-12, m1 - 0.5 * d1), m2));
                }
                bool agree = true;
                for (const auto& p : probes)
                    if (p.limit_index != rec.limit_index) agree = false;
                cell.label = agree ? label_for(rec.limit_index, m2 == 0.0) : "Julia";
                grid.cells.push_back(cell);
                continue;
            }
            // numeric fallback: fixed generic phases, equicontinuity proxy
            if (cell.margin < spec.margin_indeterminate) {
                cell.label = "Indeterminate";
                grid.cells.push_back(cell);
                continue;
            }
            auto orbit_at = [&](double a, double b) {
                std::vector<std::complex<double>> pt(3);
                pt[spec.chart] = 1.0;
                int li = 0;
                for (int i = 0; i < 3; ++i) {
                    if (i == spec.chart) continue;
                    double mod = (li == 0) ? a : b;
                    double ph = (li == 0) ? 0.3 : 0.7;
                    pt[i] = std::polar(mod, ph);
                    ++li;
                }
                NumericOrbitConfig oc;
                oc.k_max = spec.k;
                return numeric_orbit(f, pt, oc);
            };
            auto rec = orbit_at(m1, m2);
            double d1 = spec.perturb * m1;
            // limits shared up to the perturbation scale count as equicontinuous
            double shared_tol = std::max(1e-4, 5.0 * spec.perturb);
            bool agree = rec.limit_cauchy;
            for (auto [a, b] : {std::pair<double, double>{m1 + d1, m2},
                                {std::max(1e-12, m1 - d1), m2},
                                {m1, m2 * (1 + spec.perturb)},
                                {m1, std::max(0.0, m2 * (1 - spec.perturb))}}) {
                auto p = orbit_at(a, b);
                if (!p.limit_cauchy ||
                    fs_distance(p.limit_point, rec.limit_point) > shared_tol)
                    agree = false;
            }
            cell.label = agree ? label_for(rec.limit_index, m2 == 0.0) : "Julia";
            grid.cells.push_back(cell);
        }
    }
    return grid;
}

// ---------------------------------------------------------------------------
// gamma volume series
// ---------------------------------------------------------------------------

namespace {

// inner closed forms of the radial reduction over the eps-bidisk:
//   T1(a) = (1/2) [ log(1 + eps^2/a) + a/(a + eps^2) - 1 ]
//   T2(a) = eps^2 / (2 a (a + eps^2))       (appears as r^(m+1) T2)
double first_integral_radial(int k, double eps) {
    double m = std::pow(2.0, k + 1) - 2.0;
    double twok = std::pow(2.0, k);
    // Euclidean-target part: pi^2 2^k eps^(2^(k+1)+2)
    double euclid = M_PI * M_PI * twok * std::pow(eps, m + 4.0);
    auto integrand = [&](double r) {
        double lr = std::log(r);
        double a = ((m)*lr < -600) ? 0.0 : std::pow(r, m);
        double t1;
        if (a > 1e-280) {
            t1 = 0.5 * (std::log1p(eps * eps / a) + a / (a + eps * eps) - 1.0);
        } else {
            // log(1 + eps^2/a) ~ 2 log eps - m log r; the r^(m-1) factor kills it
            double lt = (m - 1.0) * lr;
            if (lt < -600) return 0.0 + r * eps * eps / (2.0 * (a + eps * eps));
            t1 = 0.5 * (2.0 * std::log(eps) - m * lr - 1.0);
        }
        double part1 = (twok - 1.0) * (twok - 1.0) *
                       ((m - 1.0) * lr < -600 ? 0.0 : std::pow(r, m - 1.0)) * t1;
        // r^(m+1) T2 = r eps^2 / (2 (r^m + eps^2))
        double part2 = r * eps * eps / (2.0 * (a + eps * eps));
        return part1 + part2;
    };
    double fs_part = 4.0 * M_PI * integrate_panels(integrand, 0.0, eps, 32, 6, 3.0);
    return euclid + fs_part;
}

double second_integral_radial(int k, double eps) {
    double m = std::pow(2.0, k + 1) - 2.0;
    double c = 4.0 * M_PI * std::pow(2.0, 2 * k) * eps * eps;
    auto integrand = [&](double r) {
        double lr = std::log(r);
        double a = (m * lr < -600) ? 0.0 : std::pow(r, m);
        double num = ((m + 1.0) * lr < -600) ? 0.0 : std::pow(r, m + 1.0);
        return num / (a + eps * eps);
    };
    return c * integrate_panels(integrand, 0.0, eps, 32, 6, 3.0);
}

}  // namespace

GammaVolumeSeries gamma_volume_series(int k_min, int k_max, double eps, bool cross_check) {
    if (eps <= 0.0 || eps >= 1.0) throw std::invalid_argument("gamma_volume_series: 0 < eps < 1");
    GammaVolumeSeries out;
    out.eps = eps;
    for (int k = k_min; k <= k_max; ++k) {
        out.ks.push_back(k);
        out.first_integral.push_back(first_integral_radial(k, eps));
        out.second_integral.push_back(second_integral_radial(k, eps));
        double m = std::pow(2.0, k + 1) - 2.0;
        out.second_bound.push_back(std::pow(2.0, 2 * k + 2) * std::pow(eps, m) / m);
    }
    if (cross_check) {
        for (int k = k_min; k <= std::min(k_max, 2); ++k) {
            // lift of the second chart coordinate of the iterate and the
            // holomorphic first coordinate u1^(2^k)
            long p2k = 1L << k;
            PolyTuple F({SparsePoly::monomial(2, ExponentVector{BigInt(p2k - 1), 0}, GaussianRational(1)),
                         SparsePoly::variable(2, 1)});
            auto u = std::make_shared<LogNormPotential>(LiftEvaluator::from_tuple(F));
            auto grad_g = [p2k](const Eigen::Vector2cd& z) {
                Eigen::Vector2cd d;
                d(0) = static_cast<double>(p2k) * std::pow(z(0), p2k - 1);
                d(1) = 0.0;
                return d;
            };
            PolydiskSpec dom;
            dom.center = {0.0, 0.0};
            dom.radii = {eps, eps};
            dom.radial_nodes = 22;
            dom.radial_panels = 3;
            dom.angular_nodes = 20;
            double i1 = wedge_mass_2d(holo_gram_form2(grad_g), euclidean_form2(), dom) +
                        wedge_mass_2d(fs_pullback_form2(u), euclidean_form2(), dom);
            double i2 = 2.0 * wedge_mass_2d(holo_gram_form2(grad_g), fs_pullback_form2(u), dom);
            out.cross_ks.push_back(k);
            out.first_general.push_back(i1);
            out.second_general.push_back(i2);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fatou inclusion report
// ---------------------------------------------------------------------------

namespace {

// closure of the preimage tree of I_f as a union of coordinate subspaces,
// for monomial maps (exact). Subspaces are var-index sets.
std::vector<std::vector<int>> indeterminacy_preimage_closure(const HomogRep& f, int max_iter = 8) {
    std::set<std::vector<int>> sets;
    auto ind = indeterminacy_exact(f);
    auto add_point_as_subspace = [&](const ProjectivePoint& p) {
        std::vector<int> J;
        for (int i = 0; i < static_cast<int>(p.coords.size()); ++i)
            if (p.coords[i].is_zero()) J.push_back(i);
        sets.insert(J);
    };
    for (const auto& p : ind.exact_points) add_point_as_subspace(p);
    for (const auto& c : ind.components) sets.insert(c.zero_vars);

    int nv = f.tuple.nvars();
    for (int it = 0; it < max_iter; ++it) {
        std::set<std::vector<int>> next = sets;
        for (const auto& J : sets) {
            // preimage of V({z_i = 0 : i in J}) = common zero locus of {f_i : i in J}
            std::vector<std::vector<int>> hits;
            for (unsigned mask = 1; mask < (1u << nv); ++mask) {
                if (mask == (1u << nv) - 1) continue;
                std::vector<int> K;
                for (int i = 0; i < nv; ++i)
                    if (mask & (1u << i)) K.push_back(i);
                bool vanish = true;
                for (int j : J) {
                    SparsePoly r = f.tuple.comps[j];
                    for (int v : K) r = r.substitute_value(v, GaussianRational(0));
                    if (!r.is_zero()) {
                        vanish = false;
                        break;
                    }
                }
                if (vanish) hits.push_back(K);
            }
            for (const auto& K : hits) {
                bool minimal = true;
                for (const auto& K2 : hits)
                    if (K2.size() < K.size() && std::includes(K.begin(), K.end(), K2.begin(), K2.end()))
                        minimal = false;
                if (minimal) next.insert(K);
            }
        }
        if (next == sets) break;
        sets = std::move(next);
    }
    return {sets.begin(), sets.end()};
}

MapFamily iterate_family(const HomogRep& f, int k_min, int k_max) {
    MapFamily fam;
    fam.name = "iterates";
    fam.k_min = k_min;
    fam.k_max = k_max;
    HomogRep base = f;
    fam.generator = [base](int k) { return iterate_closed(base, k); };
    return fam;
}

}  // namespace

std::vector<FatouMembership> fatou_inclusion_report(
    const HomogRep& f, const std::vector<std::vector<std::complex<double>>>& chart_points,
    const FatouInclusionConfig& cfg) {
    std::vector<FatouMembership> out;
    bool monomial = f.is_monomial();
    std::vector<std::vector<int>> closure;
    if (monomial) closure = indeterminacy_preimage_closure(f);

    int n = f.source_dim;
    for (const auto& pt : chart_points) {
        FatouMembership m;
        m.point = pt;

        // homogeneous coordinates of the point in the chart
        std::vector<std::complex<double>> homog(n + 1, 0.0);
        homog[cfg.chart] = 1.0;
        {
            int li = 0;
            for (int i = 0; i <= n; ++i) {
                if (i == cfg.chart) continue;
                homog[i] = pt[li++];
            }
        }

        if (monomial) {
            for (const auto& J : closure) {
                bool on = true;
                for (int v : J)
                    if (std::abs(homog[v]) > 0.0) on = false;
                if (on) m.on_indeterminacy_closure = true;
            }
        }

        // equicontinuity proxy: center + 4 perturbed numeric orbits agree
        NumericOrbitConfig oc = cfg.orbit;
        auto orbit_of = [&](const std::vector<std::complex<double>>& hp) {
            return numeric_orbit(f, hp, oc);
        };
        auto center_orbit = orbit_of(homog);
        bool equicont = center_orbit.limit_cauchy && center_orbit.indeterminacy_step < 0;
        double delta = 1e-3;
        for (int a = 0; a < 4 && equicont; ++a) {
            auto hp = homog;
            int var = (a % n);
            int li = 0;
            for (int i = 0; i <= n; ++i) {
                if (i == cfg.chart) continue;
                if (li == var)
                    hp[i] += std::polar(delta, a < 2 ? 0.0 : M_PI / 2);
                ++li;
            }
            auto p = orbit_of(hp);
            if (!p.limit_cauchy || p.indeterminacy_step >= 0 ||
                (!center_orbit.limit_point.empty() && !p.limit_point.empty() &&
                 fs_distance(center_orbit.limit_point, p.limit_point) > 10 * oc.fs_tol))
                equicont = false;
        }
        m.in_phi = equicont && !m.on_indeterminacy_closure;

        // strong/weak/Gamma via local classification of the iterate family
        MapFamily fam = iterate_family(f, cfg.k_min, cfg.k_max);
        ClassifyConfig cc;
        cc.seed = cfg.seed;
        cc.chart = cfg.chart;
        cc.domain.center = pt;
        cc.domain.radii.assign(n, cfg.neighborhood);
        cc.run_masses = true;
        auto verdict = classify(fam, cc);
        m.classify_level = verdict.level;
        m.in_phi_gamma = verdict.level == Level::Gamma || verdict.level == Level::Weak ||
                         verdict.level == Level::Strong;
        m.in_phi_w = verdict.level == Level::Weak || verdict.level == Level::Strong;
        m.in_phi_s = verdict.level == Level::Strong;
        m.note = verdict.narrative;
        out.push_back(std::move(m));
    }
    return out;
}

}  // namespace mero
