#include "meroconv/sparse_poly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mero {

bool lex_less(const ExponentVector& a, const ExponentVector& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

SparsePoly SparsePoly::constant(int nvars, GaussianRational c) {
    SparsePoly p(nvars);
    p.add_term(ExponentVector(nvars, 0), c);
    return p;
}

SparsePoly SparsePoly::variable(int nvars, int index) {
    ExponentVector e(nvars, 0);
    e.at(index) = 1;
    return monomial(nvars, e, GaussianRational(1));
}

SparsePoly SparsePoly::monomial(int nvars, ExponentVector e, GaussianRational c) {
    if (static_cast<int>(e.size()) != nvars) throw std::invalid_argument("monomial: exponent length mismatch");
    SparsePoly p(nvars);
    p.add_term(e, c);
    return p;
}

bool SparsePoly::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() != 1) return false;
    const auto& e = terms_.begin()->first;
    return std::all_of(e.begin(), e.end(), [](const BigInt& x) { return x == 0; });
}

BigInt SparsePoly::total_degree() const {
    BigInt d = -1;
    for (const auto& [e, c] : terms_) {
        BigInt s = std::accumulate(e.begin(), e.end(), BigInt(0));
        if (s > d) d = s;
    }
    return d;
}

BigInt SparsePoly::degree_in(int var) const {
    BigInt d = -1;
    for (const auto& [e, c] : terms_)
        if (e[var] > d) d = e[var];
    return d;
}

bool SparsePoly::is_homogeneous() const {
    if (terms_.empty()) return true;
    BigInt d = std::accumulate(terms_.begin()->first.begin(), terms_.begin()->first.end(), BigInt(0));
    for (const auto& [e, c] : terms_) {
        BigInt s = std::accumulate(e.begin(), e.end(), BigInt(0));
        if (s != d) return false;
    }
    return true;
}

void SparsePoly::add_term(const ExponentVector& e, const GaussianRational& c) {
    if (static_cast<int>(e.size()) != nvars_) throw std::invalid_argument("add_term: exponent length mismatch");
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

SparsePoly SparsePoly::operator-() const {
    SparsePoly r(nvars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

SparsePoly SparsePoly::operator+(const SparsePoly& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("poly add: variable-count mismatch");
    SparsePoly r = *this;
    for (const auto& [e, c] : o.terms_) r.add_term(e, c);
    return r;
}

SparsePoly SparsePoly::operator-(const SparsePoly& o) const { return *this + (-o); }

SparsePoly SparsePoly::operator*(const SparsePoly& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("poly mul: variable-count mismatch");
    SparsePoly r(nvars_);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : o.terms_) {
            ExponentVector e(nvars_);
            for (int i = 0; i < nvars_; ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

SparsePoly SparsePoly::scaled(const GaussianRational& c) const {
    SparsePoly r(nvars_);
    if (c.is_zero()) return r;
    for (const auto& [e, cc] : terms_) r.terms_.emplace(e, cc * c);
    return r;
}

SparsePoly SparsePoly::mul_monomial(const ExponentVector& e, const GaussianRational& c) const {
    SparsePoly r(nvars_);
    if (c.is_zero()) return r;
    for (const auto& [ea, ca] : terms_) {
        ExponentVector ee(nvars_);
        for (int i = 0; i < nvars_; ++i) ee[i] = ea[i] + e[i];
        r.terms_.emplace(ee, ca * c);
    }
    return r;
}

SparsePoly SparsePoly::pow(const BigInt& k) const {
    if (k < 0) throw std::invalid_argument("poly pow: negative exponent");
    SparsePoly acc = constant(nvars_, GaussianRational(1));
    SparsePoly base = *this;
    BigInt n = k;
    while (n > 0) {
        if ((n & 1) != 0) acc = acc * base;
        base = (n > 1) ? base * base : base;
        n >>= 1;
    }
    return acc;
}

namespace {

// leading (lex-greatest) term iterator; terms_ is lex-sorted ascending
const std::pair<const ExponentVector, GaussianRational>& lead(const SparsePoly::TermMap& m) {
    return *m.rbegin();
}

bool exps_divide(const ExponentVector& den, const ExponentVector& num) {
    for (std::size_t i = 0; i < den.size(); ++i)
        if (num[i] < den[i]) return false;
    return true;
}

ExponentVector exps_sub(const ExponentVector& a, const ExponentVector& b) {
    ExponentVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

}  // namespace

std::optional<SparsePoly> SparsePoly::divide_exact(const SparsePoly& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("divide_exact: variable-count mismatch");
    if (o.is_zero()) throw std::domain_error("divide_exact: zero divisor");
    SparsePoly rem = *this;
    SparsePoly quot(nvars_);
    const auto& dlead = lead(o.terms_);
    while (!rem.is_zero()) {
        const auto& rlead = lead(rem.terms_);
        if (!exps_divide(dlead.first, rlead.first)) return std::nullopt;
        ExponentVector qe = exps_sub(rlead.first, dlead.first);
        GaussianRational qc = rlead.second / dlead.second;
        quot.add_term(qe, qc);
        rem = rem - o.mul_monomial(qe, qc);
    }
    return quot;
}

std::optional<ExponentVector> SparsePoly::monomial_content_exponent() const {
    if (terms_.empty()) return std::nullopt;
    ExponentVector m = terms_.begin()->first;
    for (const auto& [e, c] : terms_)
        for (int i = 0; i < nvars_; ++i)
            if (e[i] < m[i]) m[i] = e[i];
    return m;
}

SparsePoly SparsePoly::shift_down(const ExponentVector& e) const {
    SparsePoly r(nvars_);
    for (const auto& [ee, c] : terms_) {
        if (!exps_divide(e, ee)) throw std::domain_error("shift_down: not divisible");
        r.terms_.emplace(exps_sub(ee, e), c);
    }
    return r;
}

SparsePoly SparsePoly::derivative(int var) const {
    SparsePoly r(nvars_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        ExponentVector ee = e;
        ee[var] -= 1;
        r.add_term(ee, c * GaussianRational(BigRat(e[var])));
    }
    return r;
}

SparsePoly SparsePoly::substitute(const std::vector<SparsePoly>& subs) const {
    if (static_cast<int>(subs.size()) != nvars_) throw std::invalid_argument("substitute: arity mismatch");
    int target_nvars = subs.empty() ? 0 : subs.front().nvars();
    SparsePoly r(target_nvars);
    for (const auto& [e, c] : terms_) {
        SparsePoly t = SparsePoly::constant(target_nvars, c);
        for (int i = 0; i < nvars_; ++i)
            if (e[i] != 0) t = t * subs[i].pow(e[i]);
        r = r + t;
    }
    return r;
}

SparsePoly SparsePoly::substitute_value(int var, const GaussianRational& v) const {
    SparsePoly r(nvars_);
    for (const auto& [e, c] : terms_) {
        ExponentVector ee = e;
        BigInt k = ee[var];
        ee[var] = 0;
        r.add_term(ee, c * v.pow(k));
    }
    return r;
}

std::complex<double> SparsePoly::eval(const std::vector<std::complex<double>>& z) const {
    std::complex<double> acc = 0.0;
    for (const auto& [e, c] : terms_) {
        BigInt total = std::accumulate(e.begin(), e.end(), BigInt(0));
        if (total <= 64) {
            std::complex<double> t = c.to_complex();
            for (int i = 0; i < nvars_; ++i) {
                if (e[i] == 0) continue;
                std::complex<double> base = z[i], p = 1.0;
                unsigned long n = e[i].convert_to<unsigned long>();
                while (n) {
                    if (n & 1) p *= base;
                    base *= base;
                    n >>= 1;
                }
                t *= p;
            }
            acc += t;
            continue;
        }
        // large total degree: log-polar route, so coefficient and power
        // magnitudes cancel before exponentiation instead of overflowing
        bool zero = false;
        double lm = 0.5 * std::log(c.abs2_double());
        double ph = std::arg(c.to_complex());
        for (int i = 0; i < nvars_ && !zero; ++i) {
            if (e[i] == 0) continue;
            double m = std::abs(z[i]);
            if (m == 0.0) {
                zero = true;
                break;
            }
            double ei = to_double(e[i]);
            lm += ei * std::log(m);
            ph += ei * std::arg(z[i]);
        }
        if (zero || lm < -745.0) continue;
        acc += std::polar(std::exp(lm), ph);
    }
    return acc;
}

SparsePoly SparsePoly::monic_lex() const {
    if (is_zero()) return *this;
    return scaled(lead(terms_).second.inverse());
}

SparsePoly SparsePoly::unit_max_modulus() const {
    if (is_zero()) return *this;
    const GaussianRational* best = nullptr;
    BigRat best_n2 = 0;
    for (const auto& [e, c] : terms_) {  // lex ascending: later wins ties -> lex-greatest
        BigRat n2 = c.norm2();
        if (best == nullptr || n2 >= best_n2) {
            best = &c;
            best_n2 = n2;
        }
    }
    return scaled(best->inverse());
}

const GaussianRational& SparsePoly::leading_coeff_lex() const {
    if (is_zero()) throw std::domain_error("leading_coeff_lex: zero polynomial");
    return lead(terms_).second;
}

std::string default_var_name(int nvars, int i) {
    (void)nvars;
    return "z" + std::to_string(i);
}

std::string SparsePoly::str(const std::vector<std::string>& var_names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // print lex-descending so leading term comes first
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ")";
        for (int i = 0; i < nvars_; ++i) {
            if (e[i] == 0) continue;
            os << "*" << (var_names.empty() ? default_var_name(nvars_, i) : var_names[i]);
            if (e[i] != 1) os << "^" << e[i].str();
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// GCD
// ---------------------------------------------------------------------------

namespace {

// View a polynomial as univariate in `var` with SparsePoly coefficients.
std::map<BigInt, SparsePoly> coeffs_in(const SparsePoly& p, int var) {
    std::map<BigInt, SparsePoly> out;
    for (const auto& [e, c] : p.terms()) {
        ExponentVector ee = e;
        BigInt k = ee[var];
        ee[var] = 0;
        auto it = out.find(k);
        if (it == out.end()) it = out.emplace(k, SparsePoly(p.nvars())).first;
        it->second.add_term(ee, c);
    }
    return out;
}


SparsePoly lc_in(const SparsePoly& p, int var) {
    auto cs = coeffs_in(p, var);
    return cs.rbegin()->second;
}

// Pseudo-remainder of f by g in variable var: lc(g)^(df-dg+1) f = q g + r.
SparsePoly prem(const SparsePoly& f, const SparsePoly& g, int var) {
    BigInt df = f.degree_in(var), dg = g.degree_in(var);
    if (df < dg) return f;
    SparsePoly r = f;
    SparsePoly glc = lc_in(g, var);
    BigInt steps = df - dg + 1;
    BigInt done = 0;
    while (!r.is_zero() && r.degree_in(var) >= dg) {
        BigInt dr = r.degree_in(var);
        SparsePoly rlc = lc_in(r, var);
        ExponentVector shift(f.nvars(), 0);
        shift[var] = dr - dg;
        // r <- glc * r - rlc * x^(dr-dg) * g
        r = r * glc - g.mul_monomial(shift, GaussianRational(1)) * rlc;
        done += 1;
    }
    // pad so the total multiplier is exactly lc(g)^(df-dg+1)
    while (done < steps) {
        r = r * glc;
        done += 1;
    }
    return r;
}

SparsePoly gcd_impl(SparsePoly a, SparsePoly b);

// content of p with respect to var: gcd of its coefficient polynomials
SparsePoly content_in(const SparsePoly& p, int var) {
    auto cs = coeffs_in(p, var);
    SparsePoly g(p.nvars());
    bool first = true;
    for (const auto& [k, poly] : cs) {
        if (first) {
            g = poly;
            first = false;
        } else {
            g = gcd_impl(g, poly);
        }
        if (g.is_constant()) break;
    }
    return g;
}

// Subresultant PRS (Cohen, Alg. 3.3.1) on primitive parts; the last nonzero
// pseudo-remainder's primitive part is the gcd of the primitive parts.
SparsePoly prs_gcd(SparsePoly f, SparsePoly g, int var) {
    if (f.degree_in(var) < g.degree_in(var)) std::swap(f, g);
    SparsePoly cf = content_in(f, var);
    SparsePoly cg = content_in(g, var);
    SparsePoly A = *f.divide_exact(cf);
    SparsePoly B = *g.divide_exact(cg);
    SparsePoly cont_gcd = gcd_impl(cf, cg);

    int nv = f.nvars();
    SparsePoly one = SparsePoly::constant(nv, GaussianRational(1));
    SparsePoly gg = one, h = one;
    while (true) {
        BigInt delta = A.degree_in(var) - B.degree_in(var);
        SparsePoly R = prem(A, B, var);
        if (R.is_zero()) break;
        if (R.degree_in(var) == 0) {
            B = one;
            break;
        }
        A = B;
        auto q = R.divide_exact(gg * h.pow(delta));
        if (!q) throw std::logic_error("poly_gcd: subresultant division failed");
        B = *q;
        gg = lc_in(A, var);
        if (delta > 0) {
            auto hq = gg.pow(delta).divide_exact(h.pow(delta - 1));
            if (!hq) throw std::logic_error("poly_gcd: psi update failed");
            h = *hq;
        }
    }
    SparsePoly pg = B.is_constant() ? one : *B.divide_exact(content_in(B, var));
    SparsePoly result = pg * cont_gcd;
    if (!f.divide_exact(result) || !g.divide_exact(result))
        throw std::logic_error("poly_gcd: candidate fails exact division");
    return result;
}

SparsePoly gcd_impl(SparsePoly a, SparsePoly b) {
    int nv = a.nvars();
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;

    // monomial content fast path
    ExponentVector ma = *a.monomial_content_exponent();
    ExponentVector mb = *b.monomial_content_exponent();
    ExponentVector mg(nv);
    for (int i = 0; i < nv; ++i) mg[i] = std::min(ma[i], mb[i]);
    SparsePoly ap = a.shift_down(ma);
    SparsePoly bp = b.shift_down(mb);
    SparsePoly mono = SparsePoly::monomial(nv, mg, GaussianRational(1));

    if (ap.is_constant() || bp.is_constant()) return mono;

    // main variable: highest-index variable occurring in both stripped parts
    int var = -1;
    for (int i = nv - 1; i >= 0; --i) {
        if (ap.degree_in(i) > 0 && bp.degree_in(i) > 0) {
            var = i;
            break;
        }
    }
    if (var < 0) return mono;  // disjoint supports: no common non-monomial factor

    return mono * prs_gcd(ap, bp, var);
}

}  // namespace

SparsePoly poly_gcd(const SparsePoly& a, const SparsePoly& b) {
    if (a.nvars() != b.nvars()) throw std::invalid_argument("poly_gcd: variable-count mismatch");
    if (a.is_zero() && b.is_zero()) throw std::domain_error("poly_gcd: both inputs zero");
    return gcd_impl(a, b).monic_lex();
}

SparsePoly poly_add(const SparsePoly& a, const SparsePoly& b) { return a + b; }
SparsePoly poly_mul(const SparsePoly& a, const SparsePoly& b) { return a * b; }

// ---------------------------------------------------------------------------
// PolyTuple
// ---------------------------------------------------------------------------

PolyTuple::PolyTuple(std::vector<SparsePoly> c) : comps(std::move(c)) {
    for (const auto& p : comps)
        if (p.nvars() != comps.front().nvars())
            throw std::invalid_argument("PolyTuple: mixed variable counts");
}

bool PolyTuple::all_zero() const {
    return std::all_of(comps.begin(), comps.end(), [](const SparsePoly& p) { return p.is_zero(); });
}

bool PolyTuple::is_homogeneous() const {
    BigInt d = -1;
    for (const auto& p : comps) {
        if (p.is_zero()) continue;
        if (!p.is_homogeneous()) return false;
        if (d < 0)
            d = p.total_degree();
        else if (p.total_degree() != d)
            return false;
    }
    return d >= 0;
}

BigInt PolyTuple::common_degree() const {
    for (const auto& p : comps)
        if (!p.is_zero()) return p.total_degree();
    return -1;
}

std::vector<std::complex<double>> PolyTuple::eval(const std::vector<std::complex<double>>& z) const {
    std::vector<std::complex<double>> out;
    out.reserve(comps.size());
    for (const auto& p : comps) out.push_back(p.eval(z));
    return out;
}

std::vector<LogEval> PolyTuple::eval_log(const std::vector<LogPolar>& point) const {
    if (static_cast<int>(point.size()) != nvars()) throw std::invalid_argument("eval_log: arity mismatch");
    std::vector<LogEval> out;
    out.reserve(comps.size());
    for (const auto& p : comps) {
        LogEval ev;
        if (p.is_zero()) {
            ev.log_mod = -std::numeric_limits<double>::infinity();
            ev.exact = true;
            out.push_back(ev);
            continue;
        }
        if (p.is_monomial()) {
            const auto& [e, c] = *p.terms().begin();
            double lm = 0.5 * std::log(c.abs2_double());
            double ph = std::arg(c.to_complex());
            for (int i = 0; i < p.nvars(); ++i) {
                if (e[i] == 0) continue;
                double ei = to_double(e[i]);
                lm += ei * point[i].log_mod;
                ph += ei * point[i].phase;
            }
            ev.log_mod = lm;
            ev.phase = std::remainder(ph, 2.0 * M_PI);
            ev.exact = true;
            out.push_back(ev);
            continue;
        }
        // multi-term: rescale by the largest term log-modulus, then sum
        double max_lm = -std::numeric_limits<double>::infinity();
        std::vector<std::pair<double, double>> term_logs;  // (log_mod, phase) per term
        term_logs.reserve(p.terms().size());
        for (const auto& [e, c] : p.terms()) {
            double lm = 0.5 * std::log(c.abs2_double());
            double ph = std::arg(c.to_complex());
            for (int i = 0; i < p.nvars(); ++i) {
                if (e[i] == 0) continue;
                double ei = to_double(e[i]);
                lm += ei * point[i].log_mod;
                ph += ei * point[i].phase;
            }
            term_logs.emplace_back(lm, ph);
            max_lm = std::max(max_lm, lm);
        }
        std::complex<double> s = 0.0;
        double abs_sum = 0.0;
        for (const auto& [lm, ph] : term_logs) {
            double mag = std::exp(lm - max_lm);
            s += std::polar(mag, ph);
            abs_sum += mag;
        }
        double eps = std::numeric_limits<double>::epsilon();
        double abs_s = std::abs(s);
        if (abs_s <= 16 * term_logs.size() * eps * abs_sum) {
            // total cancellation within roundoff: indeterminate
            ev.log_mod = -std::numeric_limits<double>::infinity();
            ev.exact = false;
            ev.err_bound = std::numeric_limits<double>::infinity();
        } else {
            ev.log_mod = max_lm + std::log(abs_s);
            ev.phase = std::arg(s);
            ev.exact = false;
            ev.err_bound = term_logs.size() * eps * abs_sum / abs_s;
        }
        out.push_back(ev);
    }
    return out;
}

std::vector<std::complex<double>> proj_eval_log(const PolyTuple& t,
                                                const std::vector<std::complex<double>>& z) {
    std::vector<LogPolar> pt(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        double m = std::abs(z[i]);
        pt[i].log_mod = (m == 0.0) ? -std::numeric_limits<double>::infinity() : std::log(m);
        pt[i].phase = (m == 0.0) ? 0.0 : std::arg(z[i]);
    }
    auto ev = t.eval_log(pt);
    double mx = -std::numeric_limits<double>::infinity();
    for (const auto& e : ev) mx = std::max(mx, e.log_mod);
    std::vector<std::complex<double>> out;
    if (!std::isfinite(mx)) return out;
    out.resize(ev.size());
    for (std::size_t j = 0; j < ev.size(); ++j) {
        double lm = ev[j].log_mod - mx;
        out[j] = std::isfinite(lm) ? std::polar(std::exp(lm), ev[j].phase)
                                   : std::complex<double>(0.0);
    }
    return out;
}

SparsePoly tuple_content(const PolyTuple& t) {
    if (t.all_zero()) throw std::domain_error("tuple_content: zero tuple");
    SparsePoly g(t.nvars());
    bool first = true;
    for (const auto& p : t.comps) {
        if (p.is_zero()) continue;
        if (first) {
            g = p;
            first = false;
        } else {
            g = poly_gcd(g, p);
        }
        if (g.is_constant()) break;
    }
    return g.unit_max_modulus();
}

PolyTuple tuple_divide(const PolyTuple& t, const SparsePoly& d) {
    std::vector<SparsePoly> out;
    out.reserve(t.comps.size());
    for (const auto& p : t.comps) {
        if (p.is_zero()) {
            out.push_back(p);
            continue;
        }
        auto q = p.divide_exact(d);
        if (!q) throw std::domain_error("tuple_divide: component not divisible");
        out.push_back(*q);
    }
    return PolyTuple(std::move(out));
}

}  // namespace mero
