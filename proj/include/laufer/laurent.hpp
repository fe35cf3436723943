#pragma once

#include <algorithm>
#include <concepts>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "laufer/scalar.hpp"

namespace laufer {

struct ExponentOverflowError : std::overflow_error {
    ExponentOverflowError() : std::overflow_error("Laurent exponent overflow") {}
};

/// Relative magnitude below which FLOAT coefficients are dropped after an
/// arithmetic operation, preventing support blow-up from rounding noise.
inline constexpr double kFloatPruneRelative = 1e-12;

/// Requirements on a coefficient ring usable inside BasicLaurentPoly.
/// same_context / zero_like carry the runtime tag (mode, variable count)
/// that an empty polynomial would otherwise lose.
template <class C>
concept RingCoefficient = requires(const C& a, const C& b) {
    { a.is_zero() } -> std::convertible_to<bool>;
    { a.same_context(b) } -> std::convertible_to<bool>;
    { a.zero_like() } -> std::convertible_to<C>;
    { a + b } -> std::convertible_to<C>;
    { a * b } -> std::convertible_to<C>;
    { -a } -> std::convertible_to<C>;
    { a == b } -> std::convertible_to<bool>;
};

namespace detail {
inline int checked_exp_add(int a, int b) {
    long long s = static_cast<long long>(a) + static_cast<long long>(b);
    if (s < std::numeric_limits<int>::min() || s > std::numeric_limits<int>::max())
        throw ExponentOverflowError();
    return static_cast<int>(s);
}
}  // namespace detail

/// Finitely supported Laurent polynomial over an arbitrary coefficient ring.
/// Instantiated with Scalar for functions of z on the chart overlap, with
/// itself for two-variable (z, w) data, and with multivariate polynomials
/// for symbolic residue extraction.
template <RingCoefficient C>
class BasicLaurentPoly {
public:
    /// `zero` fixes the coefficient context (mode, variable count); it must
    /// be the zero of its ring.
    explicit BasicLaurentPoly(C zero) : zero_(std::move(zero)) {
        if (!zero_.is_zero()) throw std::invalid_argument("context prototype must be zero");
    }

    const std::map<int, C>& support() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

    /// Coefficient of the given exponent; absent exponents are zero.
    const C& coeff(int e) const {
        auto it = coeffs_.find(e);
        return it == coeffs_.end() ? zero_ : it->second;
    }

    void set_coeff(int e, C c) {
        if (!zero_.same_context(c)) throw ModeMismatchError();
        if (c.is_zero())
            coeffs_.erase(e);
        else
            coeffs_.insert_or_assign(e, std::move(c));
    }

    void add_to_coeff(int e, const C& c) {
        if (!zero_.same_context(c)) throw ModeMismatchError();
        auto it = coeffs_.find(e);
        if (it == coeffs_.end()) {
            if (!c.is_zero()) coeffs_.emplace(e, c);
            return;
        }
        it->second = it->second + c;
        if (it->second.is_zero()) coeffs_.erase(it);
    }

    int min_exp() const { return require_support(), coeffs_.begin()->first; }
    int max_exp() const { return require_support(), coeffs_.rbegin()->first; }

    bool same_context(const BasicLaurentPoly& o) const { return zero_.same_context(o.zero_); }
    BasicLaurentPoly zero_like() const { return BasicLaurentPoly(zero_.zero_like()); }
    const C& coeff_zero() const { return zero_; }

    friend BasicLaurentPoly operator+(const BasicLaurentPoly& a, const BasicLaurentPoly& b) {
        if (!a.same_context(b)) throw ModeMismatchError();
        BasicLaurentPoly r = a;
        for (const auto& [e, c] : b.coeffs_) r.add_to_coeff(e, c);
        r.prune();
        return r;
    }

    friend BasicLaurentPoly operator-(const BasicLaurentPoly& a, const BasicLaurentPoly& b) {
        return a + (-b);
    }

    BasicLaurentPoly operator-() const {
        BasicLaurentPoly r = zero_like();
        for (const auto& [e, c] : coeffs_) r.coeffs_.emplace(e, -c);
        return r;
    }

    /// Convolution over exponents. Exponent sums that leave machine-int
    /// range are a hard error.
    friend BasicLaurentPoly operator*(const BasicLaurentPoly& a, const BasicLaurentPoly& b) {
        if (!a.same_context(b)) throw ModeMismatchError();
        BasicLaurentPoly r = a.zero_like();
        for (const auto& [ea, ca] : a.coeffs_)
            for (const auto& [eb, cb] : b.coeffs_)
                r.add_to_coeff(detail::checked_exp_add(ea, eb), ca * cb);
        r.prune();
        return r;
    }

    friend bool operator==(const BasicLaurentPoly& a, const BasicLaurentPoly& b) {
        return a.same_context(b) && a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const BasicLaurentPoly& a, const BasicLaurentPoly& b) {
        return !(a == b);
    }

    /// Multiply every coefficient by s.
    BasicLaurentPoly scaled(const C& s) const {
        if (!zero_.same_context(s)) throw ModeMismatchError();
        BasicLaurentPoly r = zero_like();
        for (const auto& [e, c] : coeffs_) r.add_to_coeff(e, c * s);
        r.prune();
        return r;
    }

    /// Multiply by z^k.
    BasicLaurentPoly shifted(int k) const {
        BasicLaurentPoly r = zero_like();
        for (const auto& [e, c] : coeffs_) r.coeffs_.emplace(detail::checked_exp_add(e, k), c);
        return r;
    }

    /// The coefficient of z^-1; this realizes every contour integral around
    /// the origin on finitely supported data.
    const C& residue() const { return coeff(-1); }

    /// (principal part: exponents < 0, holomorphic part: exponents >= 0).
    std::pair<BasicLaurentPoly, BasicLaurentPoly> split_parts() const {
        BasicLaurentPoly principal = zero_like(), holomorphic = zero_like();
        for (const auto& [e, c] : coeffs_)
            (e < 0 ? principal : holomorphic).coeffs_.emplace(e, c);
        return {principal, holomorphic};
    }

    BasicLaurentPoly principal_part() const { return split_parts().first; }
    BasicLaurentPoly holomorphic_part() const { return split_parts().second; }

    /// Rewrite a function of z as a function of z' = 1/z (exponent negation).
    BasicLaurentPoly invert_chart() const {
        BasicLaurentPoly r = zero_like();
        for (const auto& [e, c] : coeffs_) r.coeffs_.emplace(-e, c);
        return r;
    }

    /// Keep only exponents in [lo, hi].
    BasicLaurentPoly restricted(int lo, int hi) const {
        BasicLaurentPoly r = zero_like();
        for (const auto& [e, c] : coeffs_)
            if (lo <= e && e <= hi) r.coeffs_.emplace(e, c);
        return r;
    }

    void prune() {
        for (auto it = coeffs_.begin(); it != coeffs_.end();)
            it = it->second.is_zero() ? coeffs_.erase(it) : std::next(it);
        if constexpr (std::is_same_v<C, Scalar>) {
            if (zero_.mode() == Mode::FLOAT && !coeffs_.empty()) {
                double top = 0.0;
                for (const auto& [e, c] : coeffs_) top = std::max(top, c.magnitude());
                const double cut = top * kFloatPruneRelative;
                for (auto it = coeffs_.begin(); it != coeffs_.end();)
                    it = it->second.magnitude() < cut ? coeffs_.erase(it) : std::next(it);
            }
        }
    }

private:
    void require_support() const {
        if (coeffs_.empty()) throw std::logic_error("exponent bound of zero polynomial");
    }

    C zero_;
    std::map<int, C> coeffs_;
};

/// Laurent polynomial in the overlap coordinate z with numeric coefficients.
class LaurentPoly : public BasicLaurentPoly<Scalar> {
public:
    explicit LaurentPoly(Mode m) : BasicLaurentPoly<Scalar>(Scalar::zero(m)) {}
    LaurentPoly(const BasicLaurentPoly<Scalar>& b) : BasicLaurentPoly<Scalar>(b) {}
    LaurentPoly(BasicLaurentPoly<Scalar>&& b) : BasicLaurentPoly<Scalar>(std::move(b)) {}

    Mode mode() const { return coeff_zero().mode(); }

    static LaurentPoly monomial(Mode m, int e, const Scalar& c) {
        LaurentPoly p(m);
        p.set_coeff(e, c);
        return p;
    }

    std::string str() const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : support()) {
            if (!first) os << " + ";
            first = false;
            os << "(" << c.str() << ")";
            if (e != 0) os << "*z^" << e;
        }
        return os.str();
    }
};

template <RingCoefficient C>
BasicLaurentPoly<C> pow(const BasicLaurentPoly<C>& base, unsigned e) {
    if (e == 0) throw std::invalid_argument("pow of Laurent polynomial needs e >= 1");
    BasicLaurentPoly<C> r = base;
    for (unsigned i = 1; i < e; ++i) r = r * base;
    return r;
}

/// Substitute `arg` for the outer variable w of `body`, where `body` is a
/// polynomial in w whose coefficients live in the ring R of `arg` (for
/// section evaluation R is a z-Laurent ring). `body` must be holomorphic in
/// w: negative w-exponents are an error.
template <RingCoefficient R>
R substitute_poly(const BasicLaurentPoly<R>& body, const R& arg) {
    if (!body.coeff_zero().same_context(arg)) throw ModeMismatchError();
    R acc = arg.zero_like();
    R power = arg.zero_like();  // holds arg^d for the current d
    unsigned power_deg = 0;
    for (const auto& [d, coeff_of_wd] : body.support()) {
        if (d < 0) throw std::domain_error("substitute_poly: negative exponent in w");
        if (d == 0) {
            acc = acc + coeff_of_wd;
            continue;
        }
        if (power_deg == 0) {
            power = arg;
            power_deg = 1;
        }
        while (power_deg < static_cast<unsigned>(d)) {
            power = power * arg;
            ++power_deg;
        }
        acc = acc + coeff_of_wd * power;
    }
    return acc;
}

}  // namespace laufer
