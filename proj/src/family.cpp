#include "meroconv/family.hpp"

#include <cmath>
#include <stdexcept>

namespace mero {

SparsePoly drop_variable(const SparsePoly& p, int var) {
    SparsePoly out(p.nvars() - 1);
    for (const auto& [e, c] : p.terms()) {
        if (e[var] != 0) throw std::logic_error("drop_variable: variable still occurs");
        ExponentVector ee;
        ee.reserve(e.size() - 1);
        for (int i = 0; i < static_cast<int>(e.size()); ++i)
            if (i != var) ee.push_back(e[i]);
        out.add_term(ee, c);
    }
    return out;
}

PolyTuple drop_variable(const PolyTuple& t, int var) {
    std::vector<SparsePoly> comps;
    comps.reserve(t.comps.size());
    for (const auto& p : t.comps) comps.push_back(drop_variable(p, var));
    return PolyTuple(std::move(comps));
}

PolyTuple dehomogenize(const PolyTuple& t, int chart) {
    std::vector<SparsePoly> comps;
    comps.reserve(t.comps.size());
    for (const auto& p : t.comps) comps.push_back(p.substitute_value(chart, GaussianRational(1)));
    return drop_variable(PolyTuple(std::move(comps)), chart);
}

PolyTuple MapFamily::chart_tuple(int k, int chart) const {
    HomogRep rep = generator(k);
    if (!rep.reduced) rep = reduce_rep(rep);
    return dehomogenize(rep.tuple, chart);
}

std::optional<PolyTuple> MapFamily::candidate_chart_tuple(int chart) const {
    if (!limit_candidate) return std::nullopt;
    return dehomogenize(limit_candidate->tuple, chart);
}

BigRat exact_rational(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("exact_rational: non-finite");
    if (x == 0.0) return BigRat(0);
    int exp = 0;
    double m = std::frexp(x, &exp);  // x = m * 2^exp, |m| in [1/2, 1)
    // scale mantissa to an integer (53 bits)
    long long mi = static_cast<long long>(std::ldexp(m, 53));
    exp -= 53;
    BigInt num(mi);
    if (exp >= 0) return BigRat(num << exp);
    return BigRat(num, BigInt(1) << (-exp));
}

GaussianRational exact_gaussian(std::complex<double> z) {
    return GaussianRational(exact_rational(z.real()), exact_rational(z.imag()));
}

}  // namespace mero
