#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

namespace laufer {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using Complex = std::complex<double>;

/// Arithmetic mode of every value in a computation. EXACT values are
/// arbitrary-precision rationals, FLOAT values are complex doubles.
enum class Mode { EXACT, FLOAT };

inline const char* mode_name(Mode m) { return m == Mode::EXACT ? "exact" : "float"; }

struct ModeMismatchError : std::invalid_argument {
    ModeMismatchError()
        : std::invalid_argument("mixed exact/float arithmetic is rejected") {}
};

/// A coefficient tagged with its arithmetic mode.
///
/// EXACT values are kept in lowest terms with positive denominator (the
/// backing rational type canonicalizes on every operation). Mixing modes in
/// any binary operation throws ModeMismatchError; conversions are only ever
/// explicit, via to_float().
class Scalar {
public:
    Scalar() : value_(Rational(0)) {}
    explicit Scalar(Rational r) : value_(std::move(r)) {}
    explicit Scalar(Complex c) : value_(c) {}

    static Scalar zero(Mode m) {
        return m == Mode::EXACT ? Scalar(Rational(0)) : Scalar(Complex(0.0, 0.0));
    }
    static Scalar one(Mode m) {
        return m == Mode::EXACT ? Scalar(Rational(1)) : Scalar(Complex(1.0, 0.0));
    }
    static Scalar exact(long long num, long long den = 1) {
        if (den == 0) throw std::domain_error("rational with zero denominator");
        if (den < 0) { num = -num; den = -den; }
        return Scalar(Rational(Integer(num), Integer(den)));
    }
    static Scalar exact(Integer num, Integer den) {
        if (den == 0) throw std::domain_error("rational with zero denominator");
        if (den < 0) { num = -num; den = -den; }
        return Scalar(Rational(num, den));
    }
    static Scalar floating(double re, double im = 0.0) { return Scalar(Complex(re, im)); }

    /// Integer value in the requested mode; used for combinatorial factors.
    static Scalar integer_in_mode(const Integer& v, Mode m) {
        if (m == Mode::EXACT) return Scalar(Rational(v));
        return Scalar(Complex(v.convert_to<double>(), 0.0));
    }
    static Scalar integer_in_mode(long long v, Mode m) {
        return integer_in_mode(Integer(v), m);
    }

    Mode mode() const { return std::holds_alternative<Rational>(value_) ? Mode::EXACT : Mode::FLOAT; }
    bool is_exact() const { return mode() == Mode::EXACT; }

    const Rational& rational() const {
        if (!is_exact()) throw std::logic_error("rational() on FLOAT scalar");
        return std::get<Rational>(value_);
    }
    Complex complex_value() const {
        if (is_exact()) throw std::logic_error("complex_value() on EXACT scalar");
        return std::get<Complex>(value_);
    }

    bool is_zero() const {
        if (is_exact()) return rational() == 0;
        return complex_value() == Complex(0.0, 0.0);
    }

    bool same_context(const Scalar& o) const { return mode() == o.mode(); }
    Scalar zero_like() const { return zero(mode()); }

    /// |value| as a double; used for float pruning and report magnitudes.
    double magnitude() const {
        if (is_exact()) {
            Rational a = rational() < 0 ? Rational(-rational()) : rational();
            return a.convert_to<double>();
        }
        return std::abs(complex_value());
    }

    /// Numeric value as a complex double regardless of mode (explicit, lossy).
    Complex to_complex() const {
        if (is_exact()) return Complex(rational().convert_to<double>(), 0.0);
        return complex_value();
    }
    Scalar to_float() const { return Scalar(to_complex()); }

    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        check(a, b);
        if (a.is_exact()) return Scalar(a.rational() + b.rational());
        return Scalar(a.complex_value() + b.complex_value());
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b) {
        check(a, b);
        if (a.is_exact()) return Scalar(a.rational() - b.rational());
        return Scalar(a.complex_value() - b.complex_value());
    }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        check(a, b);
        if (a.is_exact()) return Scalar(a.rational() * b.rational());
        return Scalar(a.complex_value() * b.complex_value());
    }
    friend Scalar operator/(const Scalar& a, const Scalar& b) {
        check(a, b);
        if (a.is_exact()) {
            if (b.is_zero()) throw std::domain_error("exact division by zero");
            return Scalar(a.rational() / b.rational());
        }
        return Scalar(a.complex_value() / b.complex_value());
    }
    Scalar operator-() const {
        if (is_exact()) return Scalar(Rational(-rational()));
        return Scalar(-complex_value());
    }
    Scalar& operator+=(const Scalar& o) { *this = *this + o; return *this; }
    Scalar& operator-=(const Scalar& o) { *this = *this - o; return *this; }
    Scalar& operator*=(const Scalar& o) { *this = *this * o; return *this; }

    Scalar pow(unsigned e) const {
        Scalar r = one(mode());
        for (unsigned i = 0; i < e; ++i) r *= *this;
        return r;
    }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        if (a.mode() != b.mode()) return false;
        if (a.is_exact()) return a.rational() == b.rational();
        return a.complex_value() == b.complex_value();
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    /// Decimal/rational rendering: "p/q" or "p" for EXACT, "re" or "re+imi"
    /// for FLOAT.
    std::string str() const;

private:
    static void check(const Scalar& a, const Scalar& b) {
        if (a.mode() != b.mode()) throw ModeMismatchError();
    }

    std::variant<Rational, Complex> value_;
};

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string Scalar::str() const {
    if (is_exact()) return rational().str();
    Complex c = complex_value();
    if (c.imag() == 0.0) return format_double(c.real());
    std::string s = format_double(c.real());
    s += (c.imag() < 0 ? "-" : "+");
    s += format_double(std::abs(c.imag()));
    s += "i";
    return s;
}

inline std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

/// Strict ordering used only for deterministic presentation of results.
/// EXACT compares by value; FLOAT lexicographically by (re, im).
inline bool presentation_less(const Scalar& a, const Scalar& b) {
    if (a.mode() != b.mode()) throw ModeMismatchError();
    if (a.is_exact()) return a.rational() < b.rational();
    Complex x = a.complex_value(), y = b.complex_value();
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
}

}  // namespace laufer
