#include "meroconv/proj_map.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mero {

// ---------------------------------------------------------------------------
// BigIntMatrix
// ---------------------------------------------------------------------------

BigIntMatrix BigIntMatrix::identity(int n) {
    BigIntMatrix r;
    r.m.assign(n, std::vector<BigInt>(n, 0));
    for (int i = 0; i < n; ++i) r.m[i][i] = 1;
    return r;
}

BigIntMatrix BigIntMatrix::operator*(const BigIntMatrix& o) const {
    int n = dim();
    BigIntMatrix r;
    r.m.assign(n, std::vector<BigInt>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            if (m[i][k] != 0)
                for (int j = 0; j < n; ++j) r.m[i][j] += m[i][k] * o.m[k][j];
    return r;
}

BigIntMatrix BigIntMatrix::pow(const BigInt& k) const {
    if (k < 0) throw std::invalid_argument("BigIntMatrix::pow: negative power");
    BigIntMatrix acc = identity(dim());
    BigIntMatrix base = *this;
    BigInt n = k;
    while (n > 0) {
        if ((n & 1) != 0) acc = acc * base;
        base = base * base;
        n >>= 1;
    }
    return acc;
}

BigInt BigIntMatrix::det() const {
    // Bareiss fraction-free elimination over a copy
    int n = dim();
    std::vector<std::vector<BigInt>> a = m;
    BigInt sign = 1, prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (a[i][k] != 0) {
                    p = i;
                    break;
                }
            if (p < 0) return 0;
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

std::vector<BigRat> BigIntMatrix::apply(const std::vector<BigRat>& v) const {
    int n = dim();
    std::vector<BigRat> r(n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (m[i][j] != 0) r[i] += BigRat(m[i][j]) * v[j];
    return r;
}

// ---------------------------------------------------------------------------
// HomogRep
// ---------------------------------------------------------------------------

HomogRep::HomogRep(PolyTuple t, bool reduced_flag) : tuple(std::move(t)), reduced(reduced_flag) {
    if (tuple.all_zero()) throw std::invalid_argument("HomogRep: all components zero");
    if (!tuple.is_homogeneous()) throw std::invalid_argument("HomogRep: tuple not homogeneous");
    source_dim = tuple.nvars() - 1;
    target_dim = tuple.size() - 1;
}

bool HomogRep::is_monomial() const {
    return std::all_of(tuple.comps.begin(), tuple.comps.end(),
                       [](const SparsePoly& p) { return p.is_monomial(); });
}

HomogRep HomogRep::identity(int n) {
    std::vector<SparsePoly> comps;
    for (int i = 0; i <= n; ++i) comps.push_back(SparsePoly::variable(n + 1, i));
    return HomogRep(PolyTuple(std::move(comps)), true);
}

HomogRep reduce_rep(const HomogRep& r) {
    SparsePoly c = tuple_content(r.tuple);
    HomogRep out(c.is_constant() ? r.tuple : tuple_divide(r.tuple, c), true);
    return out;
}

std::string HomogRep::serialize() const {
    std::ostringstream os;
    os << "homogrep 1\n";
    os << "dims " << source_dim << " " << target_dim << "\n";
    os << "reduced " << (reduced ? 1 : 0) << "\n";
    for (const auto& p : tuple.comps) {
        os << "component " << p.term_count() << "\n";
        for (const auto& [e, c] : p.terms()) {
            os << " ";
            for (const auto& x : e) os << " " << x.str();
            os << " ; " << c.re.str() << " " << c.im.str() << "\n";
        }
    }
    return os.str();
}

HomogRep HomogRep::deserialize(const std::string& text) {
    std::istringstream is(text);
    std::string tag;
    int version = 0;
    is >> tag >> version;
    if (tag != "homogrep" || version != 1) throw std::invalid_argument("deserialize: bad header");
    int n = 0, N = 0, red = 0;
    is >> tag >> n >> N;
    if (tag != "dims") throw std::invalid_argument("deserialize: missing dims");
    is >> tag >> red;
    if (tag != "reduced") throw std::invalid_argument("deserialize: missing reduced flag");
    std::vector<SparsePoly> comps;
    for (int c = 0; c <= N; ++c) {
        std::size_t nterms = 0;
        is >> tag >> nterms;
        if (tag != "component") throw std::invalid_argument("deserialize: missing component");
        SparsePoly p(n + 1);
        for (std::size_t t = 0; t < nterms; ++t) {
            ExponentVector e(n + 1);
            std::string s;
            for (int i = 0; i <= n; ++i) {
                is >> s;
                e[i] = BigInt(s);
            }
            is >> s;  // ";"
            std::string sre, sim;
            is >> sre >> sim;
            p.add_term(e, GaussianRational(BigRat(sre), BigRat(sim)));
        }
        comps.push_back(std::move(p));
    }
    return HomogRep(PolyTuple(std::move(comps)), red != 0);
}

// ---------------------------------------------------------------------------
// MonomialMap
// ---------------------------------------------------------------------------

MonomialMap MonomialMap::from_homog(const HomogRep& rep, int chart) {
    if (!rep.is_monomial()) throw std::invalid_argument("MonomialMap: components must be monomials");
    if (!rep.is_self_map()) throw std::invalid_argument("MonomialMap: self-maps only");
    int n = rep.source_dim;
    MonomialMap mm;
    mm.base = rep;
    mm.chart = chart;
    const auto& [e0, c0] = *rep.tuple.comps[chart].terms().begin();
    mm.exponents.m.assign(n, std::vector<BigInt>(n, 0));
    mm.coeffs.assign(n, GaussianRational(1));
    int row = 0;
    for (int i = 0; i <= n; ++i) {
        if (i == chart) continue;
        const auto& [ei, ci] = *rep.tuple.comps[i].terms().begin();
        int col = 0;
        for (int j = 0; j <= n; ++j) {
            if (j == chart) continue;
            mm.exponents.m[row][col] = ei[j] - e0[j];
            ++col;
        }
        mm.coeffs[row] = ci / c0;
        ++row;
    }
    return mm;
}

MonomialMap MonomialMap::compose(const MonomialMap& inner) const {
    if (chart != inner.chart || exponents.dim() != inner.exponents.dim())
        throw std::invalid_argument("MonomialMap::compose: chart/dimension mismatch");
    int n = exponents.dim();
    MonomialMap r;
    r.base = base;
    r.chart = chart;
    r.exponents = exponents * inner.exponents;
    r.coeffs.assign(n, GaussianRational(1));
    for (int i = 0; i < n; ++i) {
        GaussianRational c = coeffs[i];
        for (int j = 0; j < n; ++j)
            if (exponents.m[i][j] != 0) c *= inner.coeffs[j].pow(exponents.m[i][j]);
        r.coeffs[i] = c;
    }
    r.base = r.to_homog();
    return r;
}

MonomialMap MonomialMap::iterate(const BigInt& k) const {
    if (k < 1) throw std::invalid_argument("MonomialMap::iterate: k >= 1 required");
    MonomialMap result = *this;
    MonomialMap sq = *this;
    BigInt rem = k;
    bool have = false;
    while (rem > 0) {
        if ((rem & 1) != 0) {
            result = have ? result.compose(sq) : sq;
            have = true;
        }
        rem >>= 1;
        if (rem > 0) sq = sq.compose(sq);
    }
    return result;
}

HomogRep MonomialMap::to_homog() const {
    int n = exponents.dim();
    // clear Laurent denominators: per-variable multiplier exponents
    std::vector<BigInt> clear(n, 0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (-exponents.m[i][j] > clear[j]) clear[j] = -exponents.m[i][j];
    // affine rows including the constant "1" coordinate at index `chart`
    std::vector<std::vector<BigInt>> rows(n + 1, clear);
    std::vector<GaussianRational> cs(n + 1, GaussianRational(1));
    int row = 0;
    for (int i = 0; i <= n; ++i) {
        if (i == chart) continue;
        for (int j = 0; j < n; ++j) rows[i][j] = exponents.m[row][j] + clear[j];
        cs[i] = coeffs[row];
        ++row;
    }
    BigInt D = 0;
    std::vector<BigInt> tot(n + 1, 0);
    for (int i = 0; i <= n; ++i) {
        for (const auto& x : rows[i]) tot[i] += x;
        if (tot[i] > D) D = tot[i];
    }
    std::vector<SparsePoly> comps(n + 1);
    for (int i = 0; i <= n; ++i) {
        ExponentVector e(n + 1, 0);
        e[chart] = D - tot[i];
        int col = 0;
        for (int j = 0; j <= n; ++j) {
            if (j == chart) continue;
            e[j] = rows[i][col];
            ++col;
        }
        comps[i] = SparsePoly::monomial(n + 1, e, cs[i]);
    }
    HomogRep out(PolyTuple(std::move(comps)), false);
    return reduce_rep(out);
}

BigInt topological_degree(const MonomialMap& m) {
    BigInt d = m.exponents.det();
    if (d == 0) throw std::domain_error("topological_degree: singular exponent matrix (degenerate map)");
    return d < 0 ? -d : d;
}

// ---------------------------------------------------------------------------
// Indeterminacy
// ---------------------------------------------------------------------------

std::string ProjectivePoint::str() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (i) os << ":";
        os << coords[i].str();
    }
    os << "]";
    return os.str();
}

namespace {

// restriction of p to the coordinate subspace {z_i = 0 : i in J}
SparsePoly restrict_to_subspace(const SparsePoly& p, const std::vector<int>& J) {
    SparsePoly r = p;
    for (int v : J) r = r.substitute_value(v, GaussianRational(0));
    return r;
}

}  // namespace

IndeterminacyReport indeterminacy_exact(const HomogRep& r) {
    if (!r.reduced) throw std::invalid_argument("indeterminacy: reduced representation required");
    for (const auto& p : r.tuple.comps)
        if (!p.is_zero() && p.term_count() > 2)
            throw std::invalid_argument("indeterminacy_exact: monomial or binomial components required");
    int nv = r.tuple.nvars();
    IndeterminacyReport rep;
    rep.method = "exact-monomial";
    bool all_monomial = std::all_of(r.tuple.comps.begin(), r.tuple.comps.end(),
                                    [](const SparsePoly& p) { return p.is_zero() || p.is_monomial(); });
    rep.complete = all_monomial;

    // enumerate coordinate subspaces {z_i = 0 : i in J}, keep those on which
    // every component vanishes identically; retain only minimal J
    std::vector<std::vector<int>> hits;
    for (unsigned mask = 1; mask < (1u << nv); ++mask) {
        if (mask == (1u << nv) - 1) continue;  // all coordinates zero: not a projective point
        std::vector<int> J;
        for (int i = 0; i < nv; ++i)
            if (mask & (1u << i)) J.push_back(i);
        bool vanishes = true;
        for (const auto& p : r.tuple.comps) {
            if (!restrict_to_subspace(p, J).is_zero()) {
                vanishes = false;
                break;
            }
        }
        if (vanishes) hits.push_back(J);
    }
    // minimal sets only
    std::vector<std::vector<int>> minimal;
    for (const auto& J : hits) {
        bool is_min = true;
        for (const auto& K : hits) {
            if (K.size() < J.size() && std::includes(J.begin(), J.end(), K.begin(), K.end())) {
                is_min = false;
                break;
            }
        }
        if (is_min) minimal.push_back(J);
    }
    for (const auto& J : minimal) {
        if (static_cast<int>(J.size()) == nv - 1) {
            // a point: the single free coordinate is 1
            ProjectivePoint pt;
            pt.coords.assign(nv, GaussianRational(0));
            for (int i = 0; i < nv; ++i)
                if (std::find(J.begin(), J.end(), i) == J.end()) pt.coords[i] = GaussianRational(1);
            // verify by exact evaluation
            for (const auto& p : r.tuple.comps) {
                SparsePoly q = p;
                for (int i = 0; i < nv; ++i) q = q.substitute_value(i, pt.coords[i]);
                if (!q.is_zero()) throw std::logic_error("indeterminacy: exact point fails verification");
            }
            rep.exact_points.push_back(std::move(pt));
        } else {
            CoordinateSubspace cs;
            cs.zero_vars = J;
            cs.proj_dim = nv - 1 - static_cast<int>(J.size());
            rep.components.push_back(std::move(cs));
        }
    }
    return rep;
}

namespace {

double max_component_modulus(const HomogRep& r, const std::vector<std::complex<double>>& pt) {
    double scale = 0.0;
    for (const auto& z : pt) scale = std::max(scale, std::abs(z));
    double norm = std::pow(scale, to_double(r.algebraic_degree()));
    double mx = 0.0;
    for (const auto& v : r.tuple.eval(pt)) mx = std::max(mx, std::abs(v) / norm);
    return mx;
}

}  // namespace

IndeterminacyReport indeterminacy_sampled(const HomogRep& r, const SampledGridSpec& grid) {
    if (!r.reduced) throw std::invalid_argument("indeterminacy: reduced representation required");
    IndeterminacyReport rep;
    rep.method = "sampled";
    rep.complete = false;
    int n = r.source_dim;
    int res = grid.resolution;
    double spacing = 2.0 * grid.box_radius / res;

    std::vector<std::pair<double, std::vector<std::complex<double>>>> cells;
    std::vector<std::complex<double>> pt(n + 1, 0.0);
    pt[grid.chart] = 1.0;
    long total = 1;
    for (int i = 0; i < 2 * n; ++i) total *= res;
    for (long cell = 0; cell < total; ++cell) {
        long c = cell;
        for (int i = 0; i <= n; ++i) {
            if (i == grid.chart) continue;
            double re = -grid.box_radius + spacing * ((c % res) + 0.5);
            c /= res;
            double im = -grid.box_radius + spacing * ((c % res) + 0.5);
            c /= res;
            pt[i] = {re, im};
        }
        cells.emplace_back(max_component_modulus(r, pt), pt);
    }
    // refine only the most promising cells; local minimization of the
    // max-component modulus by shrinking coordinate descent
    std::partial_sort(cells.begin(), cells.begin() + std::min<std::size_t>(32, cells.size()),
                      cells.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    cells.resize(std::min<std::size_t>(32, cells.size()));
    for (auto& [mx0, start] : cells) {
        auto best = start;
        double best_val = mx0;
        double step = spacing;
        for (int it = 0; it < 220 && step > 1e-13; ++it) {
            bool improved = false;
            for (int i = 0; i <= n && !improved; ++i) {
                if (i == grid.chart) continue;
                for (auto d : {std::complex<double>(step, 0), std::complex<double>(-step, 0),
                               std::complex<double>(0, step), std::complex<double>(0, -step)}) {
                    auto cand = best;
                    cand[i] += d;
                    double m2 = max_component_modulus(r, cand);
                    if (m2 < best_val) {
                        best_val = m2;
                        best = cand;
                        improved = true;
                        break;
                    }
                }
            }
            if (!improved) step *= 0.5;
        }
        if (best_val >= grid.tol * 1e3) continue;  // plainly not a zero
        // drop duplicates of an already recorded cell
        bool dup = false;
        for (const auto& sc : rep.sampled_cells) {
            double d2 = 0.0;
            for (int i = 0; i <= n; ++i) d2 += std::norm(sc.point[i] - best[i]);
            if (std::sqrt(d2) < spacing / 2) dup = true;
        }
        if (dup) continue;
        SampledIndetCell sc;
        sc.point = best;
        sc.max_component_mod = best_val;
        sc.inconclusive = best_val >= grid.tol;
        rep.sampled_cells.push_back(std::move(sc));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Composition / iteration / charts
// ---------------------------------------------------------------------------

HomogRep compose_reduce(const HomogRep& g, const HomogRep& f) {
    if (f.target_dim != g.source_dim)
        throw std::invalid_argument("compose_reduce: dimension mismatch");
    std::vector<SparsePoly> comps;
    comps.reserve(g.tuple.comps.size());
    for (const auto& p : g.tuple.comps) comps.push_back(p.substitute(f.tuple.comps));
    return reduce_rep(HomogRep(PolyTuple(std::move(comps)), false));
}

HomogRep iterate_closed(const HomogRep& f, const BigInt& k) {
    if (!f.is_self_map()) throw std::invalid_argument("iterate_closed: self-map required");
    if (k < 1) throw std::invalid_argument("iterate_closed: k >= 1 required");
    if (f.is_monomial()) {
        MonomialMap mm = MonomialMap::from_homog(f, 0);
        return mm.iterate(k).to_homog();
    }
    // binary powering through symbolic composition
    HomogRep sq = reduce_rep(f);
    std::optional<HomogRep> result;
    BigInt rem = k;
    while (rem > 0) {
        if ((rem & 1) != 0) result = result ? compose_reduce(*result, sq) : sq;
        rem >>= 1;
        if (rem > 0) sq = compose_reduce(sq, sq);
    }
    return *result;
}

AffineRationalMap restrict_chart(const HomogRep& r, int chart) {
    int n = r.source_dim;
    if (chart < 0 || chart > n) throw std::invalid_argument("restrict_chart: bad chart index");
    SparsePoly den = r.tuple.comps[chart].substitute_value(chart, GaussianRational(1));
    if (den.is_zero())
        throw std::domain_error("restrict_chart: map sends the chart into the opposite hyperplane");
    AffineRationalMap out;
    out.chart = chart;
    for (int i = 0; i <= r.target_dim; ++i) {
        if (i == chart) continue;
        SparsePoly num = r.tuple.comps[i].substitute_value(chart, GaussianRational(1));
        if (num.is_zero()) {
            out.coords.emplace_back(SparsePoly(r.tuple.nvars()),
                                    SparsePoly::constant(r.tuple.nvars(), GaussianRational(1)));
            continue;
        }
        SparsePoly g = poly_gcd(num, den);
        SparsePoly nq = g.is_constant() ? num : *num.divide_exact(g);
        SparsePoly dq = g.is_constant() ? den : *den.divide_exact(g);
        // deterministic scale: denominator monic w.r.t. lex-greatest term
        GaussianRational lead = dq.leading_coeff_lex();
        out.coords.emplace_back(nq.scaled(lead.inverse()), dq.scaled(lead.inverse()));
    }
    return out;
}

std::vector<ContractedCurve> contracted_curves(const HomogRep& rep) {
    if (!rep.is_monomial()) throw std::invalid_argument("contracted_curves: monomial map required");
    int nv = rep.tuple.nvars();
    std::vector<ContractedCurve> out;
    for (int line = 0; line < nv; ++line) {
        // restrict every component to {z_line = 0}
        std::vector<SparsePoly> restricted;
        restricted.reserve(nv);
        for (const auto& p : rep.tuple.comps)
            restricted.push_back(p.substitute_value(line, GaussianRational(0)));
        bool any = false;
        const ExponentVector* common = nullptr;
        bool constant_map = true;
        for (const auto& p : restricted) {
            if (p.is_zero()) continue;
            any = true;
            const auto& e = p.terms().begin()->first;
            if (common == nullptr)
                common = &e;
            else if (*common != e)
                constant_map = false;
        }
        if (!any || !constant_map) continue;  // line inside indeterminacy, or not contracted
        ContractedCurve cc;
        cc.line_var = line;
        cc.image.coords.reserve(restricted.size());
        for (const auto& p : restricted)
            cc.image.coords.push_back(p.is_zero() ? GaussianRational(0) : p.terms().begin()->second);
        out.push_back(std::move(cc));
    }
    return out;
}

std::vector<ContractedCurve> contracted_curves(const MonomialMap& m) { return contracted_curves(m.base); }

}  // namespace mero
