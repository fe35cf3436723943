#pragma once

#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "laufer/critical.hpp"
#include "laufer/laurent.hpp"
#include "laufer/matrix.hpp"
#include "laufer/potential.hpp"
#include "laufer/superpotential.hpp"

namespace laufer {

/// Transition data of the normal bundle of a section: the fiber
/// displacements transform as
///   u1' = z^(-n) u1,
///   u2' = z^(n+2) (u2 + beta(z) u1),
/// with beta the second w-derivative of the potential along the section.
/// The determinant is z^2 for every beta, so the bundle always has degree
/// -2.
struct TransitionMatrix {
    int n = 0;
    LaurentPoly beta;

    TransitionMatrix(int n_, LaurentPoly b) : n(n_), beta(std::move(b)) {}
    Mode mode() const { return beta.coeff_zero().mode(); }
};

/// Splitting type (a, b), a >= b, a + b = -2, of a rank-2 bundle on the
/// rational curve.
struct SplittingType {
    int a = -1;
    int b = -1;

    friend bool operator==(const SplittingType& x, const SplittingType& y) {
        return x.a == y.a && x.b == y.b;
    }
    friend bool operator!=(const SplittingType& x, const SplittingType& y) { return !(x == y); }

    std::string str() const {
        std::ostringstream os;
        os << "(" << a << ", " << b << ")";
        return os.str();
    }
};

/// Verdict of the corank-vs-splitting comparison at one critical point.
struct BundleAnalysis {
    CriticalPoint point;
    int hessian_corank = 0;
    SplittingType predicted;
    int oracle_h0 = 0;
    SplittingType verified;
    bool agrees = false;
    /// FLOAT only: some rank decision fell near the singular-value cutoff.
    bool near_threshold = false;
};

/// Normal-bundle transition along the section over x. `x` must be critical;
/// criticality itself is enforced by reconstruction, not re-checked here.
inline TransitionMatrix normal_transition(const GeometricPotential& p,
                                          std::span<const Scalar> x) {
    return TransitionMatrix(p.n(), eval_along_section(p, x, 2));
}

inline TransitionMatrix normal_transition(const GeometricPotential& p,
                                          const std::vector<Scalar>& x) {
    return normal_transition(p, std::span<const Scalar>(x));
}

namespace detail {

inline ScalarMatrix h0_system(const TransitionMatrix& m, int degree_bound) {
    const int n = m.n;
    const int cols = (n + 1) + (degree_bound + 1);
    int top = n + 2 + degree_bound;
    if (!m.beta.is_zero()) top = std::max(top, n + 2 + m.beta.max_exp() + n);
    ScalarMatrix sys(top, cols, m.mode());
    // One row per power z^e, e = 1..top, of z^(n+2) (s2 + beta s1), where
    // s1 = sum a_i z^i (deg <= n) and s2 = sum b_j z^j (deg <= D).
    for (int e = 1; e <= top; ++e) {
        const int row = e - 1;
        for (int i = 0; i <= n; ++i) sys.set(row, i, m.beta.coeff(e - (n + 2) - i));
        const int j = e - (n + 2);
        if (j >= 0 && j <= degree_bound) sys.set(row, n + 1 + j, Scalar::one(m.mode()));
    }
    return sys;
}

}  // namespace detail

/// Dimension of the space of global holomorphic sections of the bundle with
/// the given transition: pairs (s1, s2) of polynomials, deg s1 <= n and
/// deg s2 <= D, such that z^(n+2)(s2 + beta s1) has no positive powers of
/// z. Computed as the kernel dimension of the coefficient system; this is
/// the independent side of the Ferrari check and never looks at a Hessian.
/// D defaults to n, for which the counting is saturated (stability under
/// D+1..D+3 is a tested guard).
inline int h0_oracle(const TransitionMatrix& m, int degree_bound = -1,
                     double rel_tol = kFloatRankRelTol, bool* near_threshold = nullptr) {
    const int d_bound = degree_bound < 0 ? m.n : degree_bound;
    ScalarMatrix sys = detail::h0_system(m, d_bound);
    RankResult r = rank_of(sys, rel_tol);
    if (near_threshold) *near_threshold = r.near_threshold;
    return sys.cols() - r.rank;
}

/// Resolve the splitting type from the section count: with a + b = -2 and
/// a >= b, h0 = a + 1 whenever a >= 0 and 0 when a = -1.
inline SplittingType splitting_from_h0(int h0) {
    if (h0 < 0) throw std::invalid_argument("negative section count");
    if (h0 == 0) return {-1, -1};
    return {h0 - 1, -h0 - 1};
}

/// Full check at one critical point: corank r of the Hessian of W against
/// the oracle's section count of the normal bundle, i.e. the predicted
/// splitting O(r-1) + O(-r-1) against the verified one.
inline BundleAnalysis ferrari_check(const GeometricPotential& p, const Superpotential& w,
                                    const CriticalPoint& point,
                                    double rel_tol = kFloatRankRelTol) {
    BundleAnalysis out;
    out.point = point;
    HessianMatrix h = hessian(w, point.x);
    RankResult hr = rank_of(h, rel_tol);
    out.hessian_corank = h.cols() - hr.rank;
    out.predicted = {out.hessian_corank - 1, -out.hessian_corank - 1};
    bool near_oracle = false;
    out.oracle_h0 = h0_oracle(normal_transition(p, point.x), -1, rel_tol, &near_oracle);
    out.verified = splitting_from_h0(out.oracle_h0);
    out.agrees = out.predicted == out.verified;
    out.near_threshold = hr.near_threshold || near_oracle;
    return out;
}

inline BundleAnalysis ferrari_check(const GeometricPotential& p, const CriticalPoint& point,
                                    double rel_tol = kFloatRankRelTol) {
    return ferrari_check(p, build_combinatorial(p), point, rel_tol);
}

inline BundleAnalysis ferrari_check(const GeometricPotential& p, const std::vector<Scalar>& x,
                                    double rel_tol = kFloatRankRelTol) {
    CriticalPoint pt;
    pt.x = x;
    return ferrari_check(p, pt, rel_tol);
}

}  // namespace laufer
