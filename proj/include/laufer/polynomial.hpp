#pragma once

#include <map>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "laufer/scalar.hpp"

namespace laufer {

/// Exponent vector over the section parameters x_0..x_n.
using MultiIndex = std::vector<int>;

inline int total_degree(const MultiIndex& a) {
    return std::accumulate(a.begin(), a.end(), 0);
}

/// Weighted degree sum_i i*alpha_i; the z-weight of a monomial.
inline int weight(const MultiIndex& a) {
    int w = 0;
    for (std::size_t i = 0; i < a.size(); ++i) w += static_cast<int>(i) * a[i];
    return w;
}

/// Multivariate polynomial in x_0..x_{nvars-1} with mode-tagged coefficients.
/// Monomials with zero coefficient are never stored.
class Polynomial {
public:
    Polynomial(int nvars, Mode mode) : nvars_(nvars), mode_(mode) {
        if (nvars < 1) throw std::invalid_argument("polynomial needs at least one variable");
    }

    static Polynomial constant(int nvars, const Scalar& c) {
        Polynomial p(nvars, c.mode());
        p.add_term(MultiIndex(nvars, 0), c);
        return p;
    }
    static Polynomial variable(int nvars, Mode mode, int i) {
        if (i < 0 || i >= nvars) throw std::out_of_range("variable index");
        Polynomial p(nvars, mode);
        MultiIndex a(nvars, 0);
        a[i] = 1;
        p.add_term(a, Scalar::one(mode));
        return p;
    }

    int nvars() const { return nvars_; }
    Mode mode() const { return mode_; }
    const std::map<MultiIndex, Scalar>& monomials() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool same_context(const Polynomial& o) const {
        return nvars_ == o.nvars_ && mode_ == o.mode_;
    }
    Polynomial zero_like() const { return Polynomial(nvars_, mode_); }

    Scalar coefficient(const MultiIndex& a) const {
        auto it = terms_.find(a);
        return it == terms_.end() ? Scalar::zero(mode_) : it->second;
    }

    void add_term(const MultiIndex& a, const Scalar& c) {
        if (static_cast<int>(a.size()) != nvars_) throw std::invalid_argument("multi-index arity");
        if (c.mode() != mode_) throw ModeMismatchError();
        for (int e : a)
            if (e < 0) throw std::invalid_argument("negative exponent in monomial");
        auto it = terms_.find(a);
        if (it == terms_.end()) {
            if (!c.is_zero()) terms_.emplace(a, c);
            return;
        }
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        if (!a.same_context(b)) throw ModeMismatchError();
        Polynomial r = a;
        for (const auto& [m, c] : b.terms_) r.add_term(m, c);
        return r;
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
    Polynomial operator-() const {
        Polynomial r = zero_like();
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (!a.same_context(b)) throw ModeMismatchError();
        Polynomial r = a.zero_like();
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                MultiIndex m(a.nvars_);
                for (int i = 0; i < a.nvars_; ++i) m[i] = ma[i] + mb[i];
                r.add_term(m, ca * cb);
            }
        return r;
    }
    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.same_context(b) && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    Polynomial scaled(const Scalar& s) const {
        if (s.mode() != mode_) throw ModeMismatchError();
        Polynomial r = zero_like();
        for (const auto& [m, c] : terms_) r.add_term(m, c * s);
        return r;
    }

    /// Formal partial derivative with respect to x_j.
    Polynomial derivative(int j) const {
        if (j < 0 || j >= nvars_) throw std::out_of_range("derivative variable index");
        Polynomial r = zero_like();
        for (const auto& [m, c] : terms_) {
            if (m[j] == 0) continue;
            MultiIndex d = m;
            d[j] -= 1;
            r.add_term(d, c * Scalar::integer_in_mode(m[j], mode_));
        }
        return r;
    }

    Scalar eval(std::span<const Scalar> x) const {
        if (static_cast<int>(x.size()) != nvars_) throw std::invalid_argument("point arity");
        for (const Scalar& xi : x)
            if (xi.mode() != mode_) throw ModeMismatchError();
        Scalar acc = Scalar::zero(mode_);
        for (const auto& [m, c] : terms_) {
            Scalar t = c;
            for (int i = 0; i < nvars_; ++i)
                if (m[i] > 0) t *= x[static_cast<std::size_t>(i)].pow(static_cast<unsigned>(m[i]));
            acc += t;
        }
        return acc;
    }

    int degree() const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, total_degree(m));
        return d;
    }

    bool is_homogeneous_of_degree(int d) const {
        for (const auto& [m, c] : terms_)
            if (total_degree(m) != d) return false;
        return true;
    }

    Polynomial to_float() const {
        Polynomial r(nvars_, Mode::FLOAT);
        for (const auto& [m, c] : terms_) r.add_term(m, c.to_float());
        return r;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << "(" << c.str() << ")";
            for (int i = 0; i < nvars_; ++i) {
                if (m[i] == 0) continue;
                os << "*x" << i;
                if (m[i] > 1) os << "^" << m[i];
            }
        }
        return os.str();
    }

private:
    int nvars_;
    Mode mode_;
    std::map<MultiIndex, Scalar> terms_;
};

}  // namespace laufer
