#include "meroconv/classify.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace mero {

std::string level_name(Level l) {
    switch (l) {
        case Level::Strong: return "Strong";
        case Level::Weak: return "Weak";
        case Level::Gamma: return "Gamma";
        case Level::Divergent: return "Divergent";
        case Level::Inconclusive: return "Inconclusive";
    }
    return "?";
}

double fs_distance(const std::vector<std::complex<double>>& a,
                   const std::vector<std::complex<double>>& b) {
    std::complex<double> dot = 0.0;
    double na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * std::conj(b[i]);
        na += std::norm(a[i]);
        nb += std::norm(b[i]);
    }
    if (na == 0.0 || nb == 0.0) return 1.0;
    double c2 = std::norm(dot) / (na * nb);
    return std::sqrt(std::max(0.0, 1.0 - std::min(1.0, c2)));
}

namespace {

// ---------------------------------------------------------------------------
// Weighted-majorant coefficient representation.
//
// Reduced representations are unique only up to units.  Coefficients are
// weighted by the sup of their monomial on the chart domain, the tuple is
// divided by its dominant monomial when that monomial is a unit on the
// domain (per-variable check), and the weighted vector is scaled so the
// dominant entry is exactly 1.  Convergence of this projectivized vector is
// the rep-convergence proxy.
// ---------------------------------------------------------------------------

struct WKey {
    int comp;
    ExponentVector e;
    bool operator<(const WKey& o) const {
        if (comp != o.comp) return comp < o.comp;
        return lex_less(e, o.e);
    }
};

struct WeightedRep {
    std::map<WKey, std::complex<double>> entries;
    WKey dominant{0, {}};
    ExponentVector residual_exponent;  // dominant exponent after unit division
};

double log_weight(const ChartDomain& dom, int var, const BigInt& m) {
    double wp = std::abs(dom.center[var]) + dom.radii[var];
    double wm = std::abs(dom.center[var]) - dom.radii[var];
    if (m >= 0) return to_double(m) * std::log(wp);
    return to_double(m) * std::log(wm);  // requires wm > 0; guarded by unit check
}

WeightedRep normalize_rep(const PolyTuple& t, const ChartDomain& dom) {
    WeightedRep rep;
    int n = dom.n();
    // locate the dominant weighted term
    double best = -std::numeric_limits<double>::infinity();
    WKey best_key{-1, {}};
    std::complex<double> best_coeff = 1.0;
    for (int j = 0; j < t.size(); ++j) {
        for (const auto& [e, c] : t.comps[j].terms()) {
            double lw = 0.0;
            for (int i = 0; i < n; ++i)
                if (e[i] != 0) lw += log_weight(dom, i, e[i]);
            double v = 0.5 * std::log(c.abs2_double()) + lw;
            WKey key{j, e};
            if (v > best || (v == best && key < best_key)) {
                best = v;
                best_key = key;
                best_coeff = c.to_complex();
            }
        }
    }
    rep.dominant = best_key;
    // unit shift: divide by z^s where s keeps only unit variables of the
    // dominant exponent
    ExponentVector shift(n, 0);
    for (int i = 0; i < n; ++i) {
        bool unit = std::abs(dom.center[i]) > dom.radii[i] + 1e-12;
        if (unit) shift[i] = best_key.e[i];
    }
    rep.residual_exponent = ExponentVector(n, 0);
    for (int i = 0; i < n; ++i) rep.residual_exponent[i] = best_key.e[i] - shift[i];
    // weighted magnitude of the dominant term after the shift: normalize so
    // the dominant entry is 1
    double dom_lw = 0.5 * std::log(std::norm(best_coeff));
    for (int i = 0; i < n; ++i) {
        BigInt m = best_key.e[i] - shift[i];
        if (m != 0) dom_lw += log_weight(dom, i, m);
    }
    for (int j = 0; j < t.size(); ++j) {
        for (const auto& [e, c] : t.comps[j].terms()) {
            ExponentVector ee(n);
            double lw = 0.5 * std::log(c.abs2_double());
            for (int i = 0; i < n; ++i) {
                ee[i] = e[i] - shift[i];
                if (ee[i] != 0) lw += log_weight(dom, i, ee[i]);
            }
            double mag = std::exp(lw - dom_lw);
            if (mag < 1e-300) continue;
            std::complex<double> phase =
                (c.to_complex() / std::abs(c.to_complex())) / (best_coeff / std::abs(best_coeff));
            rep.entries[WKey{j, ee}] = mag * phase;
        }
    }
    return rep;
}

double rep_distance(const WeightedRep& a, const WeightedRep& b) {
    double d = 0.0;
    for (const auto& [k, v] : a.entries) {
        auto it = b.entries.find(k);
        std::complex<double> w = (it == b.entries.end()) ? std::complex<double>(0.0) : it->second;
        d = std::max(d, std::abs(v - w));
    }
    for (const auto& [k, v] : b.entries) {
        if (a.entries.find(k) == a.entries.end()) d = std::max(d, std::abs(v));
    }
    return d;
}

bool tail_decayed(const std::vector<double>& ds, double tol, double decay) {
    if (ds.empty()) return false;
    std::size_t m = ds.size();
    std::size_t h = std::min<std::size_t>(3, m);
    double head = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < h; ++i) head = std::max(head, ds[i]);
    for (std::size_t i = m - h; i < m; ++i) tail = std::max(tail, ds[i]);
    if (!std::isfinite(tail)) return false;
    if (tail <= tol) return true;
    return std::isfinite(head) && head > 0.0 && tail <= decay * head;
}

}  // namespace

RepLimitResult rep_limit(const MapFamily& fam, const ClassifyConfig& cfg) {
    RepLimitResult res;
    int chart = cfg.chart;
    std::vector<WeightedRep> reps;
    for (int k = fam.k_min; k <= fam.k_max; ++k) {
        res.ks.push_back(k);
        reps.push_back(normalize_rep(fam.chart_tuple(k, chart), cfg.domain));
    }
    for (std::size_t i = 1; i < reps.size(); ++i)
        res.metric_series.push_back(rep_distance(reps[i - 1], reps[i]));
    res.cauchy = tail_decayed(res.metric_series, cfg.rep_tol, cfg.rep_decay);

    auto cand = fam.candidate_chart_tuple(chart);
    if (cand) {
        WeightedRep wc = normalize_rep(*cand, cfg.domain);
        for (const auto& r : reps) res.candidate_distance.push_back(rep_distance(r, wc));
        bool consistent = tail_decayed(res.candidate_distance, cfg.rep_tol, cfg.rep_decay);
        if (consistent && res.cauchy) {
            res.candidate_emitted = true;
            res.limit_tuple = *cand;
        } else if (res.cauchy) {
            res.note = "series Cauchy but supplied candidate not approached";
        }
    } else if (res.cauchy) {
        // emit an exact candidate when the tail rep is a single stable term
        const WeightedRep& last = reps.back();
        const WeightedRep& prev = reps[reps.size() - 2 < reps.size() ? reps.size() - 2 : 0];
        std::vector<std::pair<WKey, std::complex<double>>> stable;
        for (const auto& [k, v] : last.entries)
            if (std::abs(v) > 1e-6) stable.emplace_back(k, v);
        if (stable.size() == 1 && prev.entries.count(stable[0].first)) {
            // single dominant monomial: exact by construction
            int n = cfg.domain.n();
            std::vector<SparsePoly> comps(fam.chart_tuple(fam.k_max, chart).size(), SparsePoly(n));
            comps[stable[0].first.comp] =
                SparsePoly::monomial(n, stable[0].first.e, GaussianRational(1));
            res.limit_tuple = PolyTuple(std::move(comps));
            res.candidate_emitted = true;
            res.note = "monomial limit emitted from the stable dominant term";
        } else {
            res.note = "Cauchy but no exact candidate available (numeric limit only)";
        }
    }
    return res;
}

ReducednessReport reducedness_of_limit(const PolyTuple& t) {
    ReducednessReport rep;
    rep.common_divisor = tuple_content(t);
    rep.reduced = rep.common_divisor.is_constant();
    return rep;
}

// ---------------------------------------------------------------------------
// divisor_count_bound
// ---------------------------------------------------------------------------

namespace {

SparsePoly hyperplane_composition(const Hyperplane& H, const PolyTuple& tup) {
    SparsePoly acc(tup.nvars());
    for (int j = 0; j < tup.size(); ++j) {
        if (H.coeffs[j].is_zero() || tup.comps[j].is_zero()) continue;
        acc = acc + tup.comps[j].scaled(H.coeffs[j]);
    }
    return acc;
}

SparsePoly restrict_to_slice(const SparsePoly& p, const SliceSpec& slice) {
    SparsePoly r = p;
    for (int i = 0; i < p.nvars(); ++i)
        if (i != slice.var) r = r.substitute_value(i, slice.base[i]);
    return r;
}

std::vector<SliceSpec> default_slices(const ClassifyConfig& cfg) {
    if (!cfg.slices.empty()) return cfg.slices;
    std::vector<SliceSpec> out;
    int n = cfg.domain.n();
    for (int v = 0; v < n; ++v) {
        SliceSpec s;
        s.var = v;
        s.base.resize(n);
        for (int w = 0; w < n; ++w) {
            GaussianRational offset(BigRat(29, 100), BigRat(-13, 100));
            GaussianRational scale(BigRat((w + 2), (n + 2)));
            s.base[w] = exact_gaussian(cfg.domain.center[w]) +
                        offset * scale * GaussianRational(exact_rational(cfg.domain.radii[w]));
        }
        s.radius = 0.55 * cfg.domain.radii[v];
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

HyperplaneCountEvidence divisor_count_bound(const MapFamily& fam, const Hyperplane& H,
                                            const std::vector<SliceSpec>& slices,
                                            const ClassifyConfig& cfg,
                                            const std::optional<PolyTuple>& limit_for_skip) {
    HyperplaneCountEvidence ev;
    ev.hyperplane = H;
    if (limit_for_skip) {
        SparsePoly comp = hyperplane_composition(H, *limit_for_skip);
        if (comp.is_zero()) {
            ev.skipped = true;
            ev.skip_reason = "limit image lies inside the hyperplane (f(U) in H)";
            return ev;
        }
    }
    for (int k = fam.k_min; k <= fam.k_max; ++k) {
        ev.ks.push_back(k);
        PolyTuple tup = fam.chart_tuple(k, cfg.chart);
        SparsePoly comp = hyperplane_composition(H, tup);
        if (comp.is_zero()) {
            ev.notes.push_back("k=" + std::to_string(k) + ": composition identically zero");
            ev.counts.push_back(0);
            continue;
        }
        long total = 0;
        for (const auto& slice : slices) {
            SparsePoly rest = restrict_to_slice(comp, slice);
            if (rest.is_zero()) {
                ev.notes.push_back("k=" + std::to_string(k) + ": slice inside the pullback divisor");
                continue;
            }
            ComplexPoly cp = ComplexPoly::from_univariate(rest, slice.var);
            if (cp.near_zero()) continue;
            ContourSpec c;
            c.center = slice.base[slice.var].to_complex();
            c.radius = slice.radius;
            auto cr = zero_count_contour(cp.handle(), c);
            if (!cr.ok) {
                // contour through a zero: perturb the slice radius once, then skip
                c.radius *= 1.0703;
                cr = zero_count_contour(cp.handle(), c);
                if (!cr.ok) {
                    ev.notes.push_back("k=" + std::to_string(k) + " var=" +
                                       std::to_string(slice.var) + ": slice skipped (" + cr.error +
                                       ")");
                    continue;
                }
                ev.notes.push_back("k=" + std::to_string(k) + " var=" + std::to_string(slice.var) +
                                   ": slice perturbed");
            }
            total += cr.count;
        }
        ev.counts.push_back(total);
    }
    // bounded when the final quarter shows no growth
    std::size_t m = ev.counts.size();
    if (m >= 2) {
        std::size_t idx = m - 1 - std::max<std::size_t>(1, m / 4);
        ev.bounded = !(ev.counts[m - 1] > ev.counts[idx]);
    }
    return ev;
}

// ---------------------------------------------------------------------------
// mass_convergence
// ---------------------------------------------------------------------------

namespace {

// Scale the tuple by an exact power of two so its largest term majorant on
// the domain is O(1). A global scalar leaves the projective map (hence all
// masses) unchanged while keeping closed-form iterates with huge exponents
// inside double range.
PolyTuple rescale_dyadic(const PolyTuple& t, const std::vector<std::complex<double>>& center,
                         const std::vector<double>& radii) {
    double L = -std::numeric_limits<double>::infinity();
    int n = t.nvars();
    for (const auto& p : t.comps) {
        for (const auto& [e, c] : p.terms()) {
            double lw = 0.5 * std::log(c.abs2_double());
            for (int i = 0; i < n; ++i)
                if (e[i] != 0) lw += to_double(e[i]) * std::log(std::abs(center[i]) + radii[i]);
            L = std::max(L, lw);
        }
    }
    if (!std::isfinite(L) || std::abs(L) < 40.0) return t;
    long shift = std::lround(L / std::log(2.0));
    GaussianRational s(shift >= 0 ? BigRat(BigInt(1), BigInt(1) << shift)
                                  : BigRat(BigInt(1) << (-shift)));
    std::vector<SparsePoly> comps;
    comps.reserve(t.comps.size());
    for (const auto& p : t.comps) comps.push_back(p.scaled(s));
    return PolyTuple(std::move(comps));
}

// exact coordinate-subspace zero set of a chart tuple (complete for monomial
// tuples; used as the exclusion locus for non-pluripolar integrals)
ZeroSetSpec exact_zero_set(const PolyTuple& t) {
    ZeroSetSpec out;
    int n = t.nvars();
    if (n > 8) return out;
    std::vector<std::vector<int>> hits;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> J;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) J.push_back(i);
        bool vanish = true;
        for (const auto& p : t.comps) {
            SparsePoly r = p;
            for (int v : J) r = r.substitute_value(v, GaussianRational(0));
            if (!r.is_zero()) {
                vanish = false;
                break;
            }
        }
        if (vanish) hits.push_back(J);
    }
    for (const auto& J : hits) {
        bool minimal = true;
        for (const auto& K : hits)
            if (K.size() < J.size() && std::includes(J.begin(), J.end(), K.begin(), K.end()))
                minimal = false;
        if (!minimal) continue;
        if (static_cast<int>(J.size()) == n) {
            out.points.push_back(std::vector<std::complex<double>>(n, 0.0));
        } else {
            out.subspaces.push_back(J);
        }
    }
    return out;
}

std::string trend_of(const std::vector<double>& ms, const std::vector<double>& errs, double rel) {
    if (ms.size() < 3) return "inconclusive";
    std::size_t m = ms.size();
    double scale = 1e-12;
    for (double v : ms) scale = std::max(scale, std::abs(v));
    double err = 0.0;
    for (double e : errs) err = std::max(err, e);
    std::size_t third = std::max<std::size_t>(1, m / 3);
    double tail_min = ms[m - third], tail_max = ms[m - third];
    for (std::size_t i = m - third; i < m; ++i) {
        tail_min = std::min(tail_min, ms[i]);
        tail_max = std::max(tail_max, ms[i]);
    }
    std::size_t half = m / 2;
    bool increasing = true;
    for (std::size_t i = half + 1; i < m; ++i)
        if (ms[i] <= ms[i - 1]) increasing = false;
    double growth = ms[m - 1] - ms[half];
    if (increasing && growth > 3.0 * err + rel * scale) return "diverging";
    if (tail_max - tail_min <= std::max(rel * scale, 3.0 * err)) return "converging";
    return "inconclusive";
}

}  // namespace

std::vector<MassSeriesEvidence> mass_convergence(const MapFamily& fam, const ClassifyConfig& cfg,
                                                 const std::optional<PolyTuple>& limit_tuple) {
    int n = cfg.domain.n();
    std::vector<MassSeriesEvidence> out;
    // subsample k for cost: at most 6 values across the range
    std::vector<int> ks;
    int span = fam.k_max - fam.k_min;
    int step = std::max(1, span / 5);
    for (int k = fam.k_min; k <= fam.k_max; k += step) ks.push_back(k);

    MassOptions opts;
    opts.extrapolate = true;

    for (int p = 1; p <= n; ++p) {
        MassSeriesEvidence ev;
        ev.order = p;
        ev.ks = ks;
        for (int k : ks) {
            PolyTuple tup = rescale_dyadic(fam.chart_tuple(k, cfg.chart), cfg.domain.center,
                                           cfg.domain.radii);
            LiftEvaluator lift = LiftEvaluator::from_tuple(tup);
            LogNormPotential u(lift);
            ZeroSetSpec zs = exact_zero_set(tup);
            MassReport mr;
            if (cfg.mass_domain_is_ball && n == 3) {
                BallSpec ball;
                ball.center.assign(n, 0.0);
                for (int i = 0; i < n; ++i) ball.center[i] = cfg.domain.center[i];
                ball.radius = cfg.ball_radius;
                ball.samples = cfg.mc_samples;
                ball.seed = cfg.seed + 17 * k + p;
                ball.workers = cfg.workers;
                ball.exclusion = zs;
                ball.eps = zs.empty() ? 0.0 : 1e-4;
                for (std::size_t ci = 0; ci < cfg.importance_centers.size(); ++ci) {
                    ImportanceBall ib;
                    ib.center = cfg.importance_centers[ci];
                    ib.scale = cfg.rash_importance_scales.empty()
                                   ? 0.1
                                   : cfg.rash_importance_scales[std::min(
                                         ci, cfg.rash_importance_scales.size() - 1)];
                    ib.weight = 0.4 / cfg.importance_centers.size();
                    ball.importance.push_back(ib);
                }
                mr = mixed_ma_mass(u, ball, p, MassOptions{false, 1});
            } else {
                PolydiskSpec pd;
                pd.center = cfg.domain.center;
                pd.radii = cfg.domain.radii;
                pd.radial_nodes = 8;
                pd.angular_nodes = 8;
                pd.exclusion = zs;
                pd.eps = zs.empty() ? 0.0 : 0.05;
                mr = mixed_ma_mass(u, pd, p, opts);
            }
            ev.masses.push_back(mr.value);
            ev.errors.push_back(mr.est_error);
        }
        if (limit_tuple && !limit_tuple->all_zero()) {
            PolyTuple red = *limit_tuple;
            SparsePoly c = tuple_content(red);
            if (!c.is_constant()) red = tuple_divide(red, c);
            red = rescale_dyadic(red, cfg.domain.center, cfg.domain.radii);
            LiftEvaluator lift = LiftEvaluator::from_tuple(red);
            LogNormPotential u(lift);
            ZeroSetSpec zs = exact_zero_set(red);
            if (cfg.mass_domain_is_ball && n == 3) {
                BallSpec ball;
                ball.center = cfg.domain.center;
                ball.radius = cfg.ball_radius;
                ball.samples = cfg.mc_samples;
                ball.seed = cfg.seed + 999 + p;
                ball.workers = cfg.workers;
                ball.exclusion = zs;
                ball.eps = zs.empty() ? 0.0 : 1e-3;
                ev.reference = mixed_ma_mass(u, ball, p, MassOptions{false, 1}).value;
            } else {
                PolydiskSpec pd;
                pd.center = cfg.domain.center;
                pd.radii = cfg.domain.radii;
                pd.radial_nodes = 8;
                pd.angular_nodes = 8;
                pd.exclusion = zs;
                pd.eps = zs.empty() ? 0.0 : 0.05;
                ev.reference = mixed_ma_mass(u, pd, p, opts).value;
            }
            ev.has_reference = true;
        }
        ev.trend = trend_of(ev.masses, ev.errors, cfg.mass_trend_rel);
        out.push_back(std::move(ev));
    }
    return out;
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

namespace {

std::vector<Hyperplane> hyperplane_panel(int ncomp, const ClassifyConfig& cfg) {
    std::vector<Hyperplane> panel;
    for (int j = 0; j < ncomp; ++j) {
        Hyperplane H;
        H.name = "Z" + std::to_string(j) + "=0";
        H.coeffs.assign(ncomp, GaussianRational(0));
        H.coeffs[j] = GaussianRational(1);
        panel.push_back(std::move(H));
    }
    auto rng = substream(cfg.seed, 55);
    std::uniform_int_distribution<long> num(-9, 9);
    std::uniform_int_distribution<long> den(1, 9);
    for (int r = 0; r < cfg.random_hyperplanes; ++r) {
        Hyperplane H;
        H.name = "random-" + std::to_string(r);
        H.coeffs.reserve(ncomp);
        bool nonzero = false;
        for (int j = 0; j < ncomp; ++j) {
            long a = num(rng), b = num(rng);
            if (a == 0 && b == 0) a = 1;
            H.coeffs.push_back(GaussianRational(BigRat(a, den(rng)), BigRat(b, den(rng))));
            nonzero = true;
        }
        (void)nonzero;
        panel.push_back(std::move(H));
    }
    return panel;
}

// slice areas (Cor. on uniformly bounded disc areas): FS area of f_k
// restricted to each slice, sup over the panel
double slice_area_sup(const PolyTuple& tup, const std::vector<SliceSpec>& slices) {
    double sup = 0.0;
    for (const auto& slice : slices) {
        std::vector<SparsePoly> comps;
        bool degenerate = false;
        for (const auto& p : tup.comps) {
            SparsePoly r = restrict_to_slice(p, slice);
            comps.push_back(r);
        }
        PolyTuple rt(comps);
        if (rt.all_zero()) continue;
        // build a univariate tuple in the slice variable
        std::vector<SparsePoly> uni;
        for (const auto& p : rt.comps) {
            SparsePoly q(1);
            for (const auto& [e, c] : p.terms()) {
                ExponentVector ee{e[slice.var]};
                q.add_term(ee, c);
            }
            uni.push_back(q);
        }
        (void)degenerate;
        PolyTuple scaled = rescale_dyadic(PolyTuple(uni), {slice.base[slice.var].to_complex()},
                                          {slice.radius});
        LiftEvaluator lift = LiftEvaluator::from_tuple(scaled);
        ContourSpec d;
        d.center = slice.base[slice.var].to_complex();
        d.radius = slice.radius;
        auto rep = fs_area_interior(lift, d, 12, 2, 12, 1e-6);
        sup = std::max(sup, rep.value);
    }
    return sup;
}

}  // namespace

Verdict classify(const MapFamily& fam, const ClassifyConfig& cfg) {
    Verdict v;
    std::ostringstream story;

    // (1) rep convergence
    v.rep = rep_limit(fam, cfg);
    bool candidate = v.rep.limit_tuple.has_value();
    story << "rep series " << (v.rep.cauchy ? "Cauchy" : "not Cauchy") << "; candidate "
          << (candidate ? "emitted" : "absent") << ". ";

    // reducedness of the candidate (needed for the skip rule refinement)
    if (candidate) {
        v.limit_reducedness = reducedness_of_limit(*v.rep.limit_tuple);
        v.limit_reducedness_known = true;
    }

    // skip protection requires a reduced candidate: a non-reduced candidate
    // conflates content divisors with image degeneration, and the paper's
    // own examples (the 2^-k z2^k family) are decided by counting those
    // coordinate hyperplanes
    std::optional<PolyTuple> skip_candidate;
    if (candidate && v.limit_reducedness.reduced) skip_candidate = v.rep.limit_tuple;

    // (2) divisor counts over the hyperplane panel
    int ncomp = fam.chart_tuple(fam.k_min, cfg.chart).size();
    auto slices = default_slices(cfg);
    bool all_bounded = true;
    for (const auto& H : hyperplane_panel(ncomp, cfg)) {
        auto ev = divisor_count_bound(fam, H, slices, cfg, skip_candidate);
        if (!ev.skipped && !ev.bounded) all_bounded = false;
        v.divisor_counts.push_back(std::move(ev));
    }
    story << "divisor counts " << (all_bounded ? "bounded" : "unbounded") << ". ";

    if (!candidate || !all_bounded) {
        v.level = Level::Divergent;
        v.narrative = story.str();
        return v;
    }

    // (3) at least Gamma; record the slice-area diagnostic
    for (int k = fam.k_min; k <= fam.k_max; ++k)
        v.slice_area_series.push_back(slice_area_sup(fam.chart_tuple(k, cfg.chart), slices));

    if (!v.limit_reducedness.reduced) {
        v.level = Level::Gamma;
        story << "limit carries common divisor " << v.limit_reducedness.common_divisor.str()
              << ": Gamma only.";
        v.narrative = story.str();
        return v;
    }

    // (4) weak; (5) masses decide strong
    if (!cfg.run_masses) {
        v.level = Level::Weak;
        story << "limit reduced: Weak (mass stage disabled).";
        v.narrative = story.str();
        return v;
    }
    v.mass_series = mass_convergence(fam, cfg, v.rep.limit_tuple);
    bool any_diverging = false, any_inconclusive = false;
    for (const auto& ms : v.mass_series) {
        if (ms.trend == "diverging") any_diverging = true;
        if (ms.trend == "inconclusive") any_inconclusive = true;
    }
    if (any_diverging) {
        v.level = Level::Weak;
        story << "limit reduced; a mass order diverges: Weak, not Strong.";
    } else if (any_inconclusive) {
        v.level = Level::Inconclusive;
        story << "limit reduced; mass trend inconclusive.";
    } else {
        v.level = Level::Strong;
        story << "limit reduced; all mass orders converge: Strong.";
    }
    v.narrative = story.str();
    return v;
}

// ---------------------------------------------------------------------------
// uniform separation
// ---------------------------------------------------------------------------

SeparationReport uniform_separation(const MapFamily& fam, const Hyperplane& H0, const Hyperplane& H1,
                                    const ClassifyConfig& cfg) {
    SeparationReport rep;
    auto slices = default_slices(cfg);
    rep.slice_count = static_cast<int>(slices.size());
    rep.infimum = std::numeric_limits<double>::infinity();
    int n = cfg.domain.n();
    for (int k = fam.k_min; k <= fam.k_max; ++k) {
        rep.ks.push_back(k);
        PolyTuple tup = fam.chart_tuple(k, cfg.chart);
        auto cloud_of = [&](const Hyperplane& H) {
            std::vector<std::vector<std::complex<double>>> cloud;
            SparsePoly comp = hyperplane_composition(H, tup);
            if (comp.is_zero()) return cloud;
            for (const auto& slice : slices) {
                SparsePoly rest = restrict_to_slice(comp, slice);
                if (rest.is_zero()) continue;
                ComplexPoly cp = ComplexPoly::from_univariate(rest, slice.var);
                for (auto r : cp.roots()) {
                    if (std::abs(r - slice.base[slice.var].to_complex()) > slice.radius) continue;
                    std::vector<std::complex<double>> pt(n);
                    for (int w = 0; w < n; ++w) pt[w] = slice.base[w].to_complex();
                    pt[slice.var] = r;
                    cloud.push_back(std::move(pt));
                }
            }
            return cloud;
        };
        auto A = cloud_of(H0);
        auto B = cloud_of(H1);
        if (A.empty() || B.empty()) {
            rep.hausdorff.push_back(std::numeric_limits<double>::infinity());
            continue;
        }
        auto dist = [&](const std::vector<std::complex<double>>& x,
                        const std::vector<std::complex<double>>& y) {
            double d2 = 0.0;
            for (int i = 0; i < n; ++i) d2 += std::norm(x[i] - y[i]);
            return std::sqrt(d2);
        };
        double h = 0.0;
        for (const auto& x : A) {
            double dmin = std::numeric_limits<double>::infinity();
            for (const auto& y : B) dmin = std::min(dmin, dist(x, y));
            h = std::max(h, dmin);
        }
        for (const auto& y : B) {
            double dmin = std::numeric_limits<double>::infinity();
            for (const auto& x : A) dmin = std::min(dmin, dist(x, y));
            h = std::max(h, dmin);
        }
        rep.hausdorff.push_back(h);
        rep.infimum = std::min(rep.infimum, h);
    }
    rep.note = "sampled on " + std::to_string(rep.slice_count) + " slices";
    return rep;
}

// ---------------------------------------------------------------------------
// bubble probe
// ---------------------------------------------------------------------------

BubbleReport bubble_probe(const MapFamily& fam, const std::vector<std::complex<double>>& a,
                          const std::vector<double>& radii, const ClassifyConfig& cfg) {
    BubbleReport rep;
    rep.base_point = a;
    rep.radii = radii;
    int n = static_cast<int>(a.size());

    // local limit candidate: supplied closed form, else a local rep_limit
    std::optional<PolyTuple> cand = fam.candidate_chart_tuple(cfg.chart);
    if (!cand) {
        ClassifyConfig local = cfg;
        local.domain.center = a;
        local.domain.radii.assign(n, 0.05 * (1.0 + std::abs(a[0])));
        auto rl = rep_limit(fam, local);
        if (rl.limit_tuple) cand = rl.limit_tuple;
    }
    if (!cand) {
        rep.inconclusive = true;
        rep.note = "no limit candidate available around the base point";
        return rep;
    }

    // limit value cloud: candidate values on spheres at every probe radius
    // (the images at radius r must be compared against limit values at the
    // same scale, or a curved limit map would fake a bubble)
    std::vector<std::vector<std::complex<double>>> cloud;
    {
        auto rng = substream(cfg.seed, 91);
        std::normal_distribution<double> N(0.0, 1.0);
        auto at_radius = [&](double r) {
            for (int s = 0; s < 16; ++s) {
                std::vector<double> dir(2 * n);
                double norm2 = 0.0;
                for (auto& d : dir) {
                    d = N(rng);
                    norm2 += d * d;
                }
                double norm = std::sqrt(norm2);
                std::vector<std::complex<double>> x = a;
                for (int i = 0; i < n; ++i)
                    x[i] += std::complex<double>(dir[2 * i], dir[2 * i + 1]) * (r / norm);
                auto val = proj_eval_log(*cand, x);
                if (!val.empty()) cloud.push_back(std::move(val));
            }
        };
        for (double r : radii) at_radius(r);
        auto central = proj_eval_log(*cand, a);
        if (!central.empty()) cloud.push_back(std::move(central));
        if (cloud.empty()) {
            rep.inconclusive = true;
            rep.note = "limit candidate degenerate on the probe rings";
            return rep;
        }
    }

    for (int k = fam.k_min; k <= fam.k_max; ++k) rep.ks.push_back(k);

    struct Hit {
        std::vector<std::complex<double>> pt;
        int j, k;
        double dist_cloud;
    };
    std::vector<Hit> hits;
    auto rng = substream(cfg.seed, 92);
    std::normal_distribution<double> N(0.0, 1.0);
    for (std::size_t j = 0; j < radii.size(); ++j) {
        for (int k : rep.ks) {
            PolyTuple tup = fam.chart_tuple(k, cfg.chart);
            for (int s = 0; s < 32; ++s) {
                // uniform direction on the sphere of radius radii[j]
                std::vector<double> dir(2 * n);
                double norm2 = 0.0;
                for (auto& d : dir) {
                    d = N(rng);
                    norm2 += d * d;
                }
                double norm = std::sqrt(norm2);
                std::vector<std::complex<double>> x = a;
                for (int i = 0; i < n; ++i)
                    x[i] += std::complex<double>(dir[2 * i], dir[2 * i + 1]) * (radii[j] / norm);
                auto val = proj_eval_log(tup, x);
                if (val.empty()) continue;
                double dmin = std::numeric_limits<double>::infinity();
                // pointwise comparison against the limit value at x itself
                auto cand_val = proj_eval_log(*cand, x);
                if (!cand_val.empty()) dmin = fs_distance(val, cand_val);
                for (const auto& c : cloud) dmin = std::min(dmin, fs_distance(val, c));
                if (dmin >= cfg.cluster_sep)
                    hits.push_back(Hit{val, static_cast<int>(j), k, dmin});
            }
        }
    }

    // greedy clustering in FS distance
    for (const auto& h : hits) {
        bool placed = false;
        for (auto& cl : rep.clusters) {
            if (fs_distance(h.pt, cl.representative) < 0.1) {
                cl.hits += 1;
                cl.min_dist_to_limit_cloud = std::min(cl.min_dist_to_limit_cloud, h.dist_cloud);
                placed = true;
                break;
            }
        }
        if (!placed) {
            BubbleCluster cl;
            cl.representative = h.pt;
            cl.hits = 1;
            cl.min_dist_to_limit_cloud = h.dist_cloud;
            rep.clusters.push_back(std::move(cl));
        }
    }

    // persistence: deep radii must keep producing clusters, and the
    // witnessing iterates must reach into the upper half of the k-range
    if (!hits.empty()) {
        std::set<int> deep_ks;
        std::size_t half_j = radii.size() / 2;
        for (const auto& h : hits)
            if (static_cast<std::size_t>(h.j) >= half_j) deep_ks.insert(h.k);
        double mid_k = 0.5 * (fam.k_min + fam.k_max);
        rep.nonempty = deep_ks.size() >= 2 &&
                       !deep_ks.empty() && *deep_ks.rbegin() >= mid_k;
        if (!rep.nonempty) {
            rep.inconclusive = true;
            rep.note = "clusters found but not persistent across the schedule";
        }
    }
    return rep;
}

}  // namespace mero
