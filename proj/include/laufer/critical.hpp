#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "laufer/matrix.hpp"
#include "laufer/superpotential.hpp"

namespace laufer {

enum class PointKind { ISOLATED, FAMILY_MEMBER };

inline const char* kind_name(PointKind k) {
    return k == PointKind::ISOLATED ? "isolated" : "family-member";
}

/// A solution of the critical-point equations dW/dx_i = 0. For FLOAT
/// solutions `residual` is the sup-norm of the gradient; EXACT solutions
/// vanish identically and carry residual 0. FAMILY_MEMBER marks points at
/// which the Hessian is singular, the signature of a positive-dimensional
/// critical locus sampled pointwise.
struct CriticalPoint {
    std::vector<Scalar> x;
    double residual = 0.0;
    PointKind kind = PointKind::ISOLATED;
};

/// Critical locus of a superpotential. For purely quadratic W the locus is
/// the kernel of the (constant) Hessian and `kernel` holds an exact basis;
/// `points` always holds sampled representatives.
struct CriticalLocusDescription {
    bool quadratic = false;
    std::vector<std::vector<Scalar>> kernel;
    std::vector<CriticalPoint> points;
    int corank() const { return static_cast<int>(kernel.size()); }
};

namespace detail {

inline double sup_norm(const std::vector<Scalar>& g) {
    double m = 0.0;
    for (const Scalar& c : g) m = std::max(m, c.magnitude());
    return m;
}

}  // namespace detail

/// Exact kernel of the critical system for a purely quadratic W (the
/// gradient is linear, so the locus is a subspace). Rejects anything with
/// monomials of total degree != 2.
inline CriticalLocusDescription solve_quadratic(const Superpotential& w) {
    if (!w.is_homogeneous_of_degree(2) && !w.is_zero())
        throw std::invalid_argument("solve_quadratic needs a purely quadratic superpotential");
    const int nv = w.nvars();
    std::vector<Scalar> origin(nv, Scalar::zero(w.mode()));
    HessianMatrix h = hessian(w, origin);
    CriticalLocusDescription locus;
    locus.quadratic = true;
    locus.kernel = kernel_basis(h);
    const bool family = !locus.kernel.empty();
    const PointKind kind = family ? PointKind::FAMILY_MEMBER : PointKind::ISOLATED;
    locus.points.push_back({origin, 0.0, kind});
    for (const auto& v : locus.kernel) {
        double res = w.mode() == Mode::FLOAT ? detail::sup_norm(gradient(w, v)) : 0.0;
        locus.points.push_back({v, res, PointKind::FAMILY_MEMBER});
    }
    return locus;
}

struct UnivariateResult {
    /// dW/dx_0 vanished identically (constant W): every point is critical.
    bool family = false;
    std::vector<CriticalPoint> points;
};

/// All complex critical points of a one-variable superpotential, as the
/// eigenvalues of the companion matrix of dW/dx_0. FLOAT mode only. A
/// vanishing derivative is not an error: the result carries the family
/// indicator instead.
inline UnivariateResult solve_univariate(const Superpotential& w) {
    if (w.nvars() != 1) throw std::invalid_argument("solve_univariate needs a single variable");
    if (w.mode() != Mode::FLOAT)
        throw std::invalid_argument("solve_univariate is a FLOAT-mode root finder");

    Polynomial dw = w.derivative(0);
    UnivariateResult out;
    if (dw.is_zero()) {
        out.family = true;
        return out;
    }
    int deg = 0;
    for (const auto& [m, c] : dw.monomials()) deg = std::max(deg, m[0]);
    if (deg == 0) return out;  // nonzero constant derivative: no roots

    std::vector<Complex> c(static_cast<std::size_t>(deg) + 1, Complex(0.0));
    for (const auto& [m, co] : dw.monomials()) c[static_cast<std::size_t>(m[0])] = co.to_complex();

    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -c[static_cast<std::size_t>(i)] / c[static_cast<std::size_t>(deg)];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion);

    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        std::vector<Scalar> x{Scalar(Complex(es.eigenvalues()(i)))};
        double res = detail::sup_norm(gradient(w, x));
        HessianMatrix h = hessian(w, x);
        PointKind kind = corank_of(h) > 0 ? PointKind::FAMILY_MEMBER : PointKind::ISOLATED;
        out.points.push_back({std::move(x), res, kind});
    }
    std::sort(out.points.begin(), out.points.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
        return presentation_less(a.x[0], b.x[0]);
    });
    return out;
}

struct NewtonOptions {
    int starts = 64;
    double radius = 2.0;
    double tol = 1e-10;
    int max_iterations = 200;
    double dedup_distance = 1e-6;
    std::uint64_t seed = 0x1afe12c5ull;
};

struct NewtonResult {
    std::vector<CriticalPoint> points;
    int failed_starts = 0;
};

namespace detail {

inline double max_norm_distance(const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i].to_complex() - b[i].to_complex()));
    return m;
}

}  // namespace detail

/// Newton iteration on the gradient system from the given starts. Singular
/// Hessian steps fall back to the SVD pseudo-inverse (minimum-norm least
/// squares), which damps motion along flat directions instead of failing.
/// Converged points are deduplicated by max-norm distance.
inline NewtonResult solve_newton(const Superpotential& w,
                                 const std::vector<std::vector<Scalar>>& starts, double tol,
                                 int max_iterations = 200, double dedup_distance = 1e-6) {
    if (w.mode() != Mode::FLOAT) throw std::invalid_argument("solve_newton is FLOAT-mode only");
    if (tol <= 0.0) throw std::invalid_argument("solve_newton needs tol > 0");
    const int nv = w.nvars();
    NewtonResult out;
    for (const auto& start : starts) {
        if (static_cast<int>(start.size()) != nv)
            throw std::invalid_argument("newton start has wrong arity");
        std::vector<Scalar> x = start;
        bool converged = false;
        double residual = 0.0;
        for (int it = 0; it < max_iterations; ++it) {
            std::vector<Scalar> g = gradient(w, x);
            residual = detail::sup_norm(g);
            if (!std::isfinite(residual)) break;
            if (residual <= tol) {
                converged = true;
                break;
            }
            HessianMatrix h = hessian(w, x);
            Eigen::VectorXcd rhs(nv);
            for (int i = 0; i < nv; ++i) rhs(i) = -g[static_cast<std::size_t>(i)].to_complex();
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h.to_eigen(),
                                                   Eigen::ComputeThinU | Eigen::ComputeThinV);
            svd.setThreshold(1e-14);
            Eigen::VectorXcd step = svd.solve(rhs);
            double step_norm = step.cwiseAbs().maxCoeff();
            if (!std::isfinite(step_norm)) break;
            if (step_norm > 10.0) step *= 10.0 / step_norm;  // keep wild starts bounded
            for (int i = 0; i < nv; ++i)
                x[static_cast<std::size_t>(i)] =
                    Scalar(x[static_cast<std::size_t>(i)].to_complex() + step(i));
        }
        if (!converged) {
            ++out.failed_starts;
            continue;
        }
        bool duplicate = false;
        for (const CriticalPoint& p : out.points)
            if (detail::max_norm_distance(p.x, x) < dedup_distance) {
                duplicate = true;
                break;
            }
        if (duplicate) continue;
        HessianMatrix h = hessian(w, x);
        PointKind kind = corank_of(h) > 0 ? PointKind::FAMILY_MEMBER : PointKind::ISOLATED;
        out.points.push_back({std::move(x), residual, kind});
    }
    std::sort(out.points.begin(), out.points.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
        for (std::size_t i = 0; i < a.x.size(); ++i) {
            if (a.x[i] != b.x[i]) return presentation_less(a.x[i], b.x[i]);
        }
        return false;
    });
    return out;
}

/// Convenience form: starts sampled uniformly from the complex polydisc of
/// the given radius, deterministically from the seed.
inline NewtonResult solve_newton(const Superpotential& w, const NewtonOptions& opt = {}) {
    if (w.mode() != Mode::FLOAT) throw std::invalid_argument("solve_newton is FLOAT-mode only");
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<Scalar>> starts;
    starts.reserve(static_cast<std::size_t>(opt.starts));
    for (int s = 0; s < opt.starts; ++s) {
        std::vector<Scalar> x;
        x.reserve(static_cast<std::size_t>(w.nvars()));
        for (int i = 0; i < w.nvars(); ++i) {
            double r = opt.radius * std::sqrt(unit(rng));
            double a = 2.0 * M_PI * unit(rng);
            x.push_back(Scalar::floating(r * std::cos(a), r * std::sin(a)));
        }
        starts.push_back(std::move(x));
    }
    return solve_newton(w, starts, opt.tol, opt.max_iterations, opt.dedup_distance);
}

}  // namespace laufer
