#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "laufer/laurent.hpp"
#include "laufer/matrix.hpp"
#include "laufer/polynomial.hpp"
#include "laufer/potential.hpp"

namespace laufer {

/// The superpotential is a polynomial in the section parameters x_0..x_n.
using Superpotential = Polynomial;

/// Symmetric matrix of second partials of the superpotential at a point.
using HessianMatrix = ScalarMatrix;

namespace detail {

inline Integer factorial(int n) {
    Integer f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Enumerate exponent vectors alpha with |alpha| = d and weight k, adding
// the multinomial d!/prod(alpha_i!) for each; this closes the sum over
// ordered index tuples (i_1..i_d) in {0..n}^d with i_1+..+i_d = k.
inline void enumerate_weighted(Polynomial& out, MultiIndex& alpha, int var, int deg_left,
                               int weight_left, int d) {
    const int n = out.nvars() - 1;
    if (var == n) {
        if (weight_left != n * deg_left) return;
        alpha[var] = deg_left;
        Integer coeff = factorial(d);
        for (int e : alpha) coeff /= factorial(e);
        out.add_term(alpha, Scalar::integer_in_mode(coeff, out.mode()));
        alpha[var] = 0;
        return;
    }
    for (int take = 0; take <= deg_left; ++take) {
        if (var > 0 && static_cast<long long>(take) * var > weight_left) break;
        alpha[var] = take;
        enumerate_weighted(out, alpha, var + 1, deg_left - take, weight_left - take * var, d);
    }
    alpha[var] = 0;
}

}  // namespace detail

/// The elementary superpotential piece for one potential term: the sum of
/// x_{i_1}...x_{i_d} over all ordered tuples in {0..n}^d with index sum k.
/// d = 0 gives the empty-product constant 1 when k = 0, else 0.
inline Polynomial w_basis(int d, int k, int n, Mode mode) {
    if (d < 0) throw std::invalid_argument("w_basis needs d >= 0");
    Polynomial out(n + 1, mode);
    if (d == 0) {
        if (k == 0) out.add_term(MultiIndex(n + 1, 0), Scalar::one(mode));
        return out;
    }
    if (k < 0 || k > d * n) return out;
    MultiIndex alpha(n + 1, 0);
    detail::enumerate_weighted(out, alpha, 0, d, k, d);
    return out;
}

/// Superpotential via the closed combinatorial form: W = sum over stored
/// terms of t_d^(k) * w_basis(d, k).
inline Superpotential build_combinatorial(const GeometricPotential& p) {
    if (!p.in_window())
        throw std::invalid_argument("potential must be normalized before building W");
    Superpotential w(p.n() + 1, p.mode());
    for (const auto& [dk, t] : p.terms())
        w = w + w_basis(dk.first, dk.second, p.n(), p.mode()).scaled(t);
    return w;
}

/// Superpotential via residue extraction: expand B(z, sum x_i z^i) with the
/// x_i kept as formal unknowns (a z-Laurent polynomial with polynomial
/// coefficients) and read off the z^-1 coefficient. Independent of the
/// combinatorial route; equality of the two is a theorem the test suite
/// exercises.
inline Superpotential build_residue(const GeometricPotential& p) {
    if (!p.in_window())
        throw std::invalid_argument("potential must be normalized before building W");
    const int nv = p.n() + 1;
    const Mode m = p.mode();
    BasicLaurentPoly<Polynomial> section{Polynomial(nv, m)};
    for (int i = 0; i <= p.n(); ++i) section.set_coeff(i, Polynomial::variable(nv, m, i));

    Superpotential w(nv, m);
    BasicLaurentPoly<Polynomial> power = section;
    int power_deg = 1;
    for (const auto& [dk, t] : p.terms()) {
        const auto [d, k] = dk;
        while (power_deg < d) {
            power = power * section;
            ++power_deg;
        }
        if (power_deg > d) {  // terms iterate in (d, k) order, so d never decreases
            power = section;
            power_deg = 1;
            while (power_deg < d) {
                power = power * section;
                ++power_deg;
            }
        }
        w = w + power.shifted(-k - 1).residue().scaled(t);
    }
    return w;
}

/// Index bookkeeping for the derivative ladder
///   dW_d^(k)/dx_j = d * W_{d-1}^{(k-j)}.
struct DerivativeReduction {
    int factor;
    int d;
    int k;
};

inline DerivativeReduction reduce_derivative(int d, int k, int j) {
    if (d < 1) throw std::invalid_argument("reduce_derivative needs d >= 1");
    if (j < 0) throw std::invalid_argument("reduce_derivative needs j >= 0");
    return {d, d - 1, k - j};
}

/// Exact partial derivatives of W at x.
inline std::vector<Scalar> gradient(const Superpotential& w, std::span<const Scalar> x) {
    if (static_cast<int>(x.size()) != w.nvars())
        throw std::invalid_argument("gradient: point arity mismatch");
    std::vector<Scalar> g;
    g.reserve(x.size());
    for (int j = 0; j < w.nvars(); ++j) g.push_back(w.derivative(j).eval(x));
    return g;
}

inline std::vector<Scalar> gradient(const Superpotential& w, const std::vector<Scalar>& x) {
    return gradient(w, std::span<const Scalar>(x));
}

/// Symmetric matrix of second partials of W at x.
inline HessianMatrix hessian(const Superpotential& w, std::span<const Scalar> x) {
    if (static_cast<int>(x.size()) != w.nvars())
        throw std::invalid_argument("hessian: point arity mismatch");
    const int nv = w.nvars();
    HessianMatrix h(nv, nv, w.mode());
    for (int i = 0; i < nv; ++i) {
        Polynomial di = w.derivative(i);
        for (int j = i; j < nv; ++j) {
            Scalar v = di.derivative(j).eval(x);
            h.set(i, j, v);
            h.set(j, i, v);
        }
    }
    return h;
}

inline HessianMatrix hessian(const Superpotential& w, const std::vector<Scalar>& x) {
    return hessian(w, std::span<const Scalar>(x));
}

/// Corank (kernel dimension) of a Hessian. EXACT mode decides exactly.
inline int corank(const HessianMatrix& h, double rel_tol = kFloatRankRelTol) {
    return corank_of(h, rel_tol);
}

}  // namespace laufer
