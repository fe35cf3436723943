#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "laufer/laurent.hpp"
#include "laufer/scalar.hpp"

namespace laufer {

/// Deformation data for the rank-2 fibration over the rational curve: the
/// degree n of the O(n) factor plus the coefficients t_d^(k) of the
/// geometric potential B(z, w) = sum t_d^(k) z^(-k-1) w^d on the chart
/// overlap.
class GeometricPotential {
public:
    using TermKey = std::pair<int, int>;  // (d, k)

    GeometricPotential(int n, Mode mode) : n_(n), mode_(mode) {
        if (n < 0) throw std::invalid_argument("curve-bundle degree n must be nonnegative");
    }

    int n() const { return n_; }
    Mode mode() const { return mode_; }
    const std::map<TermKey, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Accumulates into an existing (d, k) slot; zero sums are dropped.
    void add_term(int d, int k, const Scalar& t) {
        if (d < 1) throw std::invalid_argument("potential term needs degree d >= 1");
        if (t.mode() != mode_) throw ModeMismatchError();
        auto it = terms_.find({d, k});
        if (it == terms_.end()) {
            if (!t.is_zero()) terms_.emplace(TermKey{d, k}, t);
            return;
        }
        it->second += t;
        if (it->second.is_zero()) terms_.erase(it);
    }

    void set_term(int d, int k, const Scalar& t) {
        terms_.erase({d, k});
        add_term(d, k, t);
    }

    Scalar coefficient(int d, int k) const {
        auto it = terms_.find({d, k});
        return it == terms_.end() ? Scalar::zero(mode_) : it->second;
    }

    /// True when every stored index satisfies 0 <= k <= d*n.
    bool in_window() const {
        for (const auto& [dk, t] : terms_)
            if (dk.second < 0 || dk.second > dk.first * n_) return false;
        return true;
    }

    int max_degree() const {
        int d = 0;
        for (const auto& [dk, t] : terms_) d = std::max(d, dk.first);
        return d;
    }

    GeometricPotential to_float() const {
        GeometricPotential p(n_, Mode::FLOAT);
        for (const auto& [dk, t] : terms_) p.add_term(dk.first, dk.second, t.to_float());
        return p;
    }

    friend bool operator==(const GeometricPotential& a, const GeometricPotential& b) {
        return a.n_ == b.n_ && a.mode_ == b.mode_ && a.terms_ == b.terms_;
    }

private:
    int n_;
    Mode mode_;
    std::map<TermKey, Scalar> terms_;
};

enum class Chart { U0, U1 };

inline const char* chart_name(Chart c) { return c == Chart::U0 ? "U0" : "U1"; }

/// One absorbed out-of-window term. On U0 (k < 0) the record's exponent is
/// l = -k-1 and the shift is w2 -> w2 + t*d*z^l*w1^(d-1); on U1 (k > dn)
/// the exponent is m = k-dn-1 and the shift acts on the primed chart with
/// the same factor t*d.
struct CoordinateChange {
    Chart chart;
    int d;
    int exponent;
    Scalar coefficient;

    friend bool operator==(const CoordinateChange& a, const CoordinateChange& b) {
        return a.chart == b.chart && a.d == b.d && a.exponent == b.exponent &&
               a.coefficient == b.coefficient;
    }
};

struct CoordinateChangeLog {
    std::vector<CoordinateChange> entries;
    bool empty() const { return entries.empty(); }
};

/// Absorb every term with k < 0 or k > dn into holomorphic coordinate
/// changes, recording one log entry per absorbed term. Idempotent.
inline std::pair<GeometricPotential, CoordinateChangeLog> normalize(const GeometricPotential& raw) {
    GeometricPotential out(raw.n(), raw.mode());
    CoordinateChangeLog log;
    for (const auto& [dk, t] : raw.terms()) {
        const auto [d, k] = dk;
        if (k < 0) {
            log.entries.push_back({Chart::U0, d, -k - 1, t});
        } else if (k > d * raw.n()) {
            log.entries.push_back({Chart::U1, d, k - d * raw.n() - 1, t});
        } else {
            out.add_term(d, k, t);
        }
    }
    return {out, log};
}

/// B and its w-derivatives restricted to the section w1(z) = sum x_i z^i,
/// returned as a Laurent polynomial in z:
///   order 0:  B(z, w1(z))
///   order 1:  dB/dw (z, w1(z))
///   order 2:  d^2B/dw^2 (z, w1(z))
inline LaurentPoly eval_along_section(const GeometricPotential& p, std::span<const Scalar> x,
                                      int order) {
    if (order < 0 || order > 2) throw std::invalid_argument("derivative order must be 0, 1 or 2");
    if (static_cast<int>(x.size()) != p.n() + 1)
        throw std::invalid_argument("section parameter vector must have length n+1");
    for (const Scalar& xi : x)
        if (xi.mode() != p.mode()) throw ModeMismatchError();
    if (!p.in_window())
        throw std::invalid_argument("potential must be normalized before evaluation");

    const Mode m = p.mode();
    // Assemble sum_{d,k} t * d*(d-1)*...*(d-order+1) * z^(-k-1) * w^(d-order)
    // as a polynomial in w over z-Laurent coefficients, then substitute the
    // section for w.
    BasicLaurentPoly<LaurentPoly> body{LaurentPoly(m)};
    for (const auto& [dk, t] : p.terms()) {
        const auto [d, k] = dk;
        if (d < order) continue;
        long long factor = 1;
        for (int i = 0; i < order; ++i) factor *= d - i;
        Scalar c = t * Scalar::integer_in_mode(factor, m);
        body.add_to_coeff(d - order, LaurentPoly::monomial(m, -k - 1, c));
    }
    LaurentPoly section(m);
    for (int i = 0; i <= p.n(); ++i) section.set_coeff(i, x[static_cast<std::size_t>(i)]);
    return substitute_poly(body, section);
}

inline LaurentPoly eval_along_section(const GeometricPotential& p, const std::vector<Scalar>& x,
                                      int order) {
    return eval_along_section(p, std::span<const Scalar>(x), order);
}

}  // namespace laufer
