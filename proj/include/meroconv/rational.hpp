#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>

namespace mero {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline double to_double(const BigRat& r) { return r.convert_to<double>(); }
inline double to_double(const BigInt& n) { return n.convert_to<double>(); }

/// Exact element of Q(i), the coefficient field for every map in scope.
/// Arithmetic is closed and exact; denominators are kept in lowest terms
/// by cpp_rational itself.
struct GaussianRational {
    BigRat re{0};
    BigRat im{0};

    GaussianRational() = default;
    GaussianRational(BigRat r) : re(std::move(r)) {}
    GaussianRational(BigRat r, BigRat i) : re(std::move(r)), im(std::move(i)) {}
    GaussianRational(long r) : re(r) {}
    GaussianRational(long num, long den) : re(BigRat(num, den)) {}

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    GaussianRational conj() const { return {re, -im}; }

    /// |z|^2 as an exact rational.
    BigRat norm2() const { return re * re + im * im; }

    GaussianRational operator-() const { return {-re, -im}; }

    GaussianRational& operator+=(const GaussianRational& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o) {
        BigRat r = re * o.re - im * o.im;
        BigRat i = re * o.im + im * o.re;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }
    GaussianRational& operator/=(const GaussianRational& o) {
        BigRat n2 = o.norm2();
        if (n2 == 0) throw std::domain_error("GaussianRational: division by zero");
        BigRat r = (re * o.re + im * o.im) / n2;
        BigRat i = (im * o.re - re * o.im) / n2;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

    GaussianRational inverse() const {
        GaussianRational one(1);
        return one / *this;
    }

    /// Integer power, negative exponents allowed for nonzero values.
    GaussianRational pow(const BigInt& e) const {
        if (e < 0) return inverse().pow(-e);
        GaussianRational base = *this, acc(1);
        BigInt n = e;
        while (n > 0) {
            if ((n & 1) != 0) acc *= base;
            base *= base;
            n >>= 1;
        }
        return acc;
    }

    std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }

    /// |z|^2 as a double, exact rational squared modulus rounded once.
    double abs2_double() const { return to_double(norm2()); }

    /// Serialized as "a/b" or "a/b+c/di"; inverse of parse(), bit-exact.
    std::string str() const {
        std::ostringstream os;
        os << re.str();
        if (im != 0) os << (im > 0 ? "+" : "") << im.str() << "i";
        return os.str();
    }

    static GaussianRational parse(const std::string& s) {
        std::string t = s;
        bool neg_im = false;
        GaussianRational out;
        if (!t.empty() && t.back() == 'i') {
            t.pop_back();
            // split at the last '+'/'-' that is not the leading sign or inside a fraction
            std::size_t split = std::string::npos;
            for (std::size_t i = t.size(); i-- > 1;) {
                if ((t[i] == '+' || t[i] == '-') && t[i - 1] != '/' && t[i - 1] != '+' && t[i - 1] != '-') {
                    split = i;
                    break;
                }
            }
            if (split == std::string::npos) {  // pure imaginary
                out.im = BigRat(t.empty() || t == "+" ? "1" : (t == "-" ? "-1" : t));
                return out;
            }
            neg_im = (t[split] == '-');
            std::string imag = t.substr(split + 1);
            out.im = BigRat(imag.empty() ? "1" : imag);
            if (neg_im) out.im = -out.im;
            t = t.substr(0, split);
        }
        out.re = BigRat(t);
        return out;
    }
};

}  // namespace mero
