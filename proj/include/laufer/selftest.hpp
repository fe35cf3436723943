#pragma once

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "laufer/analysis.hpp"
#include "laufer/bundle.hpp"
#include "laufer/critical.hpp"
#include "laufer/sections.hpp"
#include "laufer/superpotential.hpp"

namespace laufer::selftest {

/// Outcome of one verification criterion, for one-line pass/fail reporting.
struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = true;
    std::string detail;
    double seconds = 0.0;

    void fail(const std::string& why) {
        pass = false;
        if (!detail.empty()) detail += "; ";
        detail += why;
    }
};

namespace detail {

using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Scalar random_rational(Rng& rng, int bound = 9) {
    int num = 0;
    while (num == 0) num = uniform_int(rng, -bound, bound);
    return Scalar::exact(num, uniform_int(rng, 1, bound));
}

inline std::vector<Scalar> origin(int n, Mode m = Mode::EXACT) {
    return std::vector<Scalar>(static_cast<std::size_t>(n) + 1, Scalar::zero(m));
}

/// Purely quadratic potential, n in 0..4. Deliberately rank-deficient
/// variants: the empty potential (corank n+1) or a single term t_2^(k)
/// with k != n (a partial antidiagonal, always singular).
inline GeometricPotential random_quadratic(Rng& rng, bool force_deficient) {
    if (force_deficient) {
        if (uniform_int(rng, 0, 1) == 0) return GeometricPotential(uniform_int(rng, 0, 4), Mode::EXACT);
        const int n = uniform_int(rng, 1, 4);
        GeometricPotential p(n, Mode::EXACT);
        int k = uniform_int(rng, 0, 2 * n - 1);
        if (k >= n) ++k;  // skip k = n, the only nonsingular single term
        p.add_term(2, k, random_rational(rng));
        return p;
    }
    const int n = uniform_int(rng, 0, 4);
    GeometricPotential p(n, Mode::EXACT);
    for (int k = 0; k <= 2 * n; ++k)
        if (uniform_int(rng, 0, 9) < 7) p.add_term(2, k, random_rational(rng));
    return p;
}

/// Random normalized potential: every index already inside 0 <= k <= dn.
inline GeometricPotential random_normalized(Rng& rng, int max_n, int max_d, int min_d = 1) {
    const int n = uniform_int(rng, 0, max_n);
    GeometricPotential p(n, Mode::EXACT);
    const int terms = uniform_int(rng, 1, 5);
    for (int t = 0; t < terms; ++t) {
        const int d = uniform_int(rng, min_d, max_d);
        p.add_term(d, uniform_int(rng, 0, d * n), random_rational(rng));
    }
    return p;
}

inline std::vector<Scalar> random_rational_point(Rng& rng, int n) {
    std::vector<Scalar> x;
    for (int i = 0; i <= n; ++i)
        x.push_back(Scalar::exact(uniform_int(rng, -3, 3), uniform_int(rng, 1, 3)));
    return x;
}

struct CorpusEntry {
    GeometricPotential p;
    std::vector<std::vector<Scalar>> points;
    std::string label;
};

/// 200 purely quadratic potentials with one sampled exact critical point
/// each (a kernel basis vector when the Hessian is singular, else the
/// origin). Every tenth entry is deliberately rank-deficient.
inline std::vector<CorpusEntry> quadratic_corpus() {
    Rng rng(20260811u);
    std::vector<CorpusEntry> corpus;
    for (int i = 0; i < 200; ++i) {
        GeometricPotential p = random_quadratic(rng, i % 10 == 0);
        Superpotential w = build_combinatorial(p);
        CriticalLocusDescription locus = solve_quadratic(w);
        std::vector<Scalar> sample =
            locus.kernel.empty()
                ? origin(p.n())
                : locus.kernel[static_cast<std::size_t>(
                      uniform_int(rng, 0, static_cast<int>(locus.kernel.size()) - 1))];
        corpus.push_back({p, {sample}, "quadratic-" + std::to_string(i)});
    }
    return corpus;
}

inline GeometricPotential stratified_cubic(const Scalar& a, const Scalar& b) {
    GeometricPotential p(1, Mode::EXACT);
    p.add_term(3, 1, a);
    p.add_term(2, 0, b);
    return p;
}

/// Exact non-quadratic corpus: the stratified cubic family along its
/// critical line, a quartic whose second w-derivative leaves the Hessian
/// window, the undeformed bundle for n = 0..6, and random potentials of
/// minimum degree 2 sampled at the origin (always critical there).
inline std::vector<CorpusEntry> general_corpus() {
    std::vector<CorpusEntry> corpus;
    const Scalar one = Scalar::exact(1);

    GeometricPotential strat = stratified_cubic(one, one);
    std::vector<std::vector<Scalar>> line;
    for (const Scalar& c : {Scalar::exact(1), Scalar::exact(-1), Scalar::exact(2),
                            Scalar::exact(-1, 3)})
        line.push_back({Scalar::exact(0), c});
    corpus.push_back({strat, line, "stratified-cubic"});

    GeometricPotential quart(1, Mode::EXACT);
    quart.add_term(4, 4, one);
    corpus.push_back({quart,
                      {{Scalar::exact(1), Scalar::exact(0)},
                       {Scalar::exact(-2, 3), Scalar::exact(0)}},
                      "quartic-deep-window"});

    for (int n = 0; n <= 6; ++n)
        corpus.push_back({GeometricPotential(n, Mode::EXACT), {origin(n)}, "undeformed-n" + std::to_string(n)});

    Rng rng(77u);
    for (int i = 0; i < 30; ++i) {
        GeometricPotential p = random_normalized(rng, 3, 4, 2);
        corpus.push_back({p, {origin(p.n())}, "origin-critical-" + std::to_string(i)});
    }
    return corpus;
}

template <class Fn>
CriterionResult timed(int id, std::string name, Fn body) {
    CriterionResult r;
    r.id = id;
    r.name = std::move(name);
    const auto start = std::chrono::steady_clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        r.fail(std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

}  // namespace detail

/// 1. Corank equals section count over 200 random purely quadratic
/// potentials, exactly, at a sampled critical point of each.
inline CriterionResult ferrari_quadratic_corpus() {
    return detail::timed(1, "ferrari-quadratic-corpus", [](CriterionResult& r) {
        int deficient = 0, checked = 0;
        for (const auto& entry : detail::quadratic_corpus()) {
            Superpotential w = build_combinatorial(entry.p);
            CriticalLocusDescription locus = solve_quadratic(w);
            CriticalPoint pt;
            pt.x = entry.points.front();
            BundleAnalysis ba = ferrari_check(entry.p, w, pt);
            ++checked;
            if (ba.hessian_corank > 0) ++deficient;
            if (ba.hessian_corank != locus.corank())
                r.fail(entry.label + ": corank disagrees with kernel dimension");
            if (ba.oracle_h0 != ba.hessian_corank)
                r.fail(entry.label + ": h0=" + std::to_string(ba.oracle_h0) +
                       " but corank=" + std::to_string(ba.hessian_corank));
            if (!ba.agrees || ba.predicted != ba.verified)
                r.fail(entry.label + ": splitting mismatch " + ba.predicted.str() + " vs " +
                       ba.verified.str());
        }
        if (deficient < 15) r.fail("corpus has too few rank-deficient Hessians");
        if (r.seconds > 30.0) r.fail("exceeded the 30 s budget");
        r.detail = std::to_string(checked) + " potentials, " + std::to_string(deficient) +
                   " with corank > 0";
    });
}

/// 2. The undeformed bundle: analysis of the empty potential for n = 0..6
/// yields corank n+1 and splitting (n, -n-2).
inline CriterionResult undeformed_identity() {
    return detail::timed(2, "undeformed-bundle-identity", [](CriterionResult& r) {
        for (int n = 0; n <= 6; ++n) {
            AnalysisReport report = analyze(GeometricPotential(n, Mode::EXACT));
            if (!report.verdict) r.fail("n=" + std::to_string(n) + ": verdict false");
            if (report.points.empty()) {
                r.fail("n=" + std::to_string(n) + ": no points analyzed");
                continue;
            }
            for (const PointRecord& rec : report.points) {
                if (!rec.bundle) {
                    r.fail("n=" + std::to_string(n) + ": missing bundle analysis");
                    continue;
                }
                if (rec.bundle->hessian_corank != n + 1)
                    r.fail("n=" + std::to_string(n) + ": corank " +
                           std::to_string(rec.bundle->hessian_corank));
                if (rec.bundle->verified != SplittingType{n, -n - 2})
                    r.fail("n=" + std::to_string(n) + ": splitting " +
                           rec.bundle->verified.str());
            }
        }
        r.detail = "n = 0..6";
    });
}

/// 3. The combinatorial and residue constructions of W agree exactly on 100
/// random normalized potentials.
inline CriterionResult route_equivalence() {
    return detail::timed(3, "route-equivalence", [](CriterionResult& r) {
        detail::Rng rng(31337u);
        for (int i = 0; i < 100; ++i) {
            GeometricPotential p = detail::random_normalized(rng, 3, 4);
            if (build_combinatorial(p) != build_residue(p))
                r.fail("potential #" + std::to_string(i) + " routes disagree");
        }
        r.detail = "100 potentials, d <= 4, n <= 3";
    });
}

/// 4. Derivative ladder: dW_d^(k)/dx_j = d W_{d-1}^{(k-j)} for all indices
/// in range, monomial by monomial, and its iterated form with the falling
/// factorial for up to three derivatives.
inline CriterionResult derivative_identities() {
    return detail::timed(4, "derivative-identities", [](CriterionResult& r) {
        int cases = 0;
        for (int n = 0; n <= 3; ++n)
            for (int d = 1; d <= 4; ++d)
                for (int k = 0; k <= d * n; ++k) {
                    Polynomial w = w_basis(d, k, n, Mode::EXACT);
                    for (int j = 0; j <= n; ++j) {
                        DerivativeReduction red = reduce_derivative(d, k, j);
                        Polynomial expected =
                            w_basis(red.d, red.k, n, Mode::EXACT)
                                .scaled(Scalar::exact(red.factor));
                        if (w.derivative(j) != expected)
                            r.fail("first derivative d=" + std::to_string(d) +
                                   " k=" + std::to_string(k) + " j=" + std::to_string(j));
                        ++cases;
                    }
                    // iterated derivatives, l = 2, 3
                    for (int l = 2; l <= 3; ++l) {
                        std::vector<int> tuple(static_cast<std::size_t>(l), 0);
                        while (true) {
                            Polynomial lhs = w;
                            int jsum = 0;
                            long long factor = 1;
                            for (int t = 0; t < l; ++t) {
                                lhs = lhs.derivative(tuple[static_cast<std::size_t>(t)]);
                                jsum += tuple[static_cast<std::size_t>(t)];
                                factor *= d - t;
                            }
                            Polynomial expected =
                                l > d ? Polynomial(n + 1, Mode::EXACT)
                                      : w_basis(d - l, k - jsum, n, Mode::EXACT)
                                            .scaled(Scalar::exact(factor));
                            if (lhs != expected)
                                r.fail("iterated derivative d=" + std::to_string(d) +
                                       " k=" + std::to_string(k) + " l=" + std::to_string(l));
                            ++cases;
                            int pos = l - 1;
                            while (pos >= 0 && tuple[static_cast<std::size_t>(pos)] == n) {
                                tuple[static_cast<std::size_t>(pos)] = 0;
                                --pos;
                            }
                            if (pos < 0) break;
                            ++tuple[static_cast<std::size_t>(pos)];
                        }
                    }
                }
        r.detail = std::to_string(cases) + " index combinations";
    });
}

/// 5. Window identities along random sections: the principal part of dB/dw
/// carries the gradient on exponents -n-1..-1 and d2B/dw2 carries the
/// Hessian entry at z^(-(i+j)-1) for every i <= j.
inline CriterionResult window_identities() {
    return detail::timed(5, "derivative-window-identities", [](CriterionResult& r) {
        detail::Rng rng(4242u);
        for (int i = 0; i < 50; ++i) {
            GeometricPotential p = detail::random_normalized(rng, 3, 4);
            std::vector<Scalar> x = detail::random_rational_point(rng, p.n());
            Superpotential w = build_combinatorial(p);
            std::vector<Scalar> grad = gradient(w, x);
            LaurentPoly g1 = eval_along_section(p, x, 1);
            for (int j = 0; j <= p.n(); ++j)
                if (g1.coeff(-j - 1) != grad[static_cast<std::size_t>(j)])
                    r.fail("#" + std::to_string(i) + ": gradient window at j=" +
                           std::to_string(j));
            HessianMatrix h = hessian(w, x);
            LaurentPoly g2 = eval_along_section(p, x, 2);
            for (int a = 0; a <= p.n(); ++a)
                for (int b = a; b <= p.n(); ++b)
                    if (g2.coeff(-(a + b) - 1) != h.at(a, b))
                        r.fail("#" + std::to_string(i) + ": Hessian window at (" +
                               std::to_string(a) + "," + std::to_string(b) + ")");
        }
        r.detail = "50 potentials at random rational points";
    });
}

/// 6. Section/critical-point correspondence: reconstruction and gluing
/// succeed at every exact critical point of the corpus, and reconstruction
/// reports a positive-exponent obstruction off the critical locus.
inline CriterionResult gluing_correspondence(bool with_float_perturbation = true) {
    return detail::timed(6, "gluing-correspondence", [with_float_perturbation](CriterionResult& r) {
        int sections = 0;
        auto run = [&](const detail::CorpusEntry& entry) {
            for (const auto& x : entry.points) {
                try {
                    SectionCurve s = reconstruct(entry.p, x);
                    GluingReport g = verify_gluing(entry.p, s);
                    if (!g.ok) r.fail(entry.label + ": " + g.summary());
                    LaurentPoly independent = reconstruct_u1_by_contour(entry.p, x);
                    if (!(independent == s.omega2_u1))
                        r.fail(entry.label + ": contour route disagrees with gluing route");
                    if (s.x != x) r.fail(entry.label + ": section does not return its x");
                    ++sections;
                } catch (const ObstructionError& e) {
                    r.fail(entry.label + ": unexpected obstruction: " + e.what());
                }
            }
        };
        for (const auto& entry : detail::quadratic_corpus()) run(entry);
        for (const auto& entry : detail::general_corpus()) run(entry);

        if (with_float_perturbation) {
            GeometricPotential strat =
                detail::stratified_cubic(Scalar::exact(1), Scalar::exact(1)).to_float();
            for (double c : {1.0, -1.0, 2.0}) {
                std::vector<Scalar> x{Scalar::floating(1e-3), Scalar::floating(c)};
                bool threw = false;
                try {
                    reconstruct(strat, x);
                } catch (const ObstructionError& e) {
                    threw = true;
                    bool has_gradient_term = false;
                    for (const auto& [exp, coeff] : e.offending_terms()) {
                        if (exp == 2 &&
                            std::abs(coeff.to_complex() - Complex((6.0 * c + 2.0) * 1e-3)) < 1e-12)
                            has_gradient_term = true;
                    }
                    if (!has_gradient_term)
                        r.fail("perturbed c=" + format_double(c) +
                               ": obstruction lacks the first-order gradient term");
                }
                if (!threw) r.fail("perturbed point was not rejected");
            }
        }
        r.detail = std::to_string(sections) + " sections reconstructed and verified";
    });
}

/// 7. The stratified cubic family: corank 1 and splitting (0, -2) at
/// generic points of the critical line, jumping to corank 2 and (1, -3) at
/// the special point, with the frozen Hessian [[6c+2, 0], [0, 0]].
inline CriterionResult stratified_family() {
    return detail::timed(7, "stratified-degenerate-family", [](CriterionResult& r) {
        GeometricPotential p = detail::stratified_cubic(Scalar::exact(1), Scalar::exact(1));
        Superpotential w = build_combinatorial(p);
        auto check = [&](const Scalar& c, int want_r, SplittingType want_split) {
            std::vector<Scalar> x{Scalar::exact(0), c};
            HessianMatrix h = hessian(w, x);
            HessianMatrix frozen(2, 2, Mode::EXACT);
            frozen.set(0, 0, Scalar::exact(6) * c + Scalar::exact(2));
            if (!(h == frozen)) r.fail("Hessian at c=" + c.str() + " is not [[6c+2,0],[0,0]]");
            BundleAnalysis ba = ferrari_check(p, w, CriticalPoint{x, 0.0, PointKind::FAMILY_MEMBER});
            if (ba.hessian_corank != want_r)
                r.fail("c=" + c.str() + ": corank " + std::to_string(ba.hessian_corank));
            if (ba.verified != want_split || !ba.agrees)
                r.fail("c=" + c.str() + ": splitting " + ba.verified.str());
        };
        for (long long c : {1ll, -1ll, 2ll}) check(Scalar::exact(c), 1, {0, -2});
        check(Scalar::exact(-1, 3), 2, {1, -3});
        r.detail = "c in {1, -1, 2} and the jump at c = -1/3";
    });
}

/// 8. FLOAT numerics: symbolic gradients against central finite
/// differences, and Newton root sets against companion-matrix eigenvalues.
inline CriterionResult float_numerics() {
    return detail::timed(8, "float-numerics", [](CriterionResult& r) {
        detail::Rng rng(90210u);
        std::uniform_real_distribution<double> coeff(-2.0, 2.0);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        // gradient vs central differences
        for (int i = 0; i < 100; ++i) {
            const int n = detail::uniform_int(rng, 0, 3);
            GeometricPotential p(n, Mode::FLOAT);
            const int terms = detail::uniform_int(rng, 1, 4);
            for (int t = 0; t < terms; ++t) {
                const int d = detail::uniform_int(rng, 1, 4);
                double v = 0.0;
                while (std::abs(v) < 0.1) v = coeff(rng);
                p.add_term(d, detail::uniform_int(rng, 0, d * n), Scalar::floating(v));
            }
            Superpotential w = build_combinatorial(p);
            std::vector<Scalar> x;
            for (int j = 0; j <= n; ++j) {
                const double rad = std::sqrt(unit(rng));
                const double ang = 2.0 * M_PI * unit(rng);
                x.push_back(Scalar::floating(rad * std::cos(ang), rad * std::sin(ang)));
            }
            std::vector<Scalar> g = gradient(w, x);
            const double h = 1e-5;
            for (int j = 0; j <= n; ++j) {
                std::vector<Scalar> xp = x, xm = x;
                xp[static_cast<std::size_t>(j)] =
                    Scalar(xp[static_cast<std::size_t>(j)].complex_value() + h);
                xm[static_cast<std::size_t>(j)] =
                    Scalar(xm[static_cast<std::size_t>(j)].complex_value() - h);
                Complex fd = (w.eval(xp).complex_value() - w.eval(xm).complex_value()) / (2.0 * h);
                Complex sym = g[static_cast<std::size_t>(j)].complex_value();
                if (std::abs(fd - sym) > 1e-6 * std::max(1.0, std::abs(sym)))
                    r.fail("finite-difference mismatch in sample " + std::to_string(i));
            }
        }
        // newton vs companion roots, well-separated
        for (int i = 0; i < 20; ++i) {
            const int nroots = detail::uniform_int(rng, 2, 5);
            std::vector<Complex> roots;
            int guard = 0;
            while (static_cast<int>(roots.size()) < nroots && guard < 10000) {
                ++guard;
                const double rad = 1.2 * std::sqrt(unit(rng));
                const double ang = 2.0 * M_PI * unit(rng);
                Complex cand(rad * std::cos(ang), rad * std::sin(ang));
                bool near = false;
                for (const Complex& e : roots)
                    if (std::abs(e - cand) < 0.1) near = true;
                if (!near) roots.push_back(cand);
            }
            // expand c * prod (x - root) and integrate into potential terms
            std::vector<Complex> dcoeff{Complex(0.5 + 1.5 * unit(rng))};
            for (const Complex& root : roots) {
                std::vector<Complex> next(dcoeff.size() + 1, Complex(0.0));
                for (std::size_t j = 0; j < dcoeff.size(); ++j) {
                    next[j + 1] += dcoeff[j];
                    next[j] -= dcoeff[j] * root;
                }
                dcoeff = std::move(next);
            }
            GeometricPotential p(0, Mode::FLOAT);
            for (std::size_t j = 0; j < dcoeff.size(); ++j)
                p.add_term(static_cast<int>(j) + 1, 0,
                           Scalar(dcoeff[j] / Complex(static_cast<double>(j) + 1.0)));
            Superpotential w = build_combinatorial(p);
            UnivariateResult companion = solve_univariate(w);
            NewtonOptions opt;
            opt.starts = 128;
            opt.tol = 1e-13;
            opt.max_iterations = 300;
            opt.seed = 1000u + static_cast<std::uint64_t>(i);
            NewtonResult newton = solve_newton(w, opt);
            if (companion.points.size() != roots.size())
                r.fail("companion found " + std::to_string(companion.points.size()) + " of " +
                       std::to_string(roots.size()) + " roots in sample " + std::to_string(i));
            double hausdorff = 0.0;
            auto nearest = [](const Complex& c, const std::vector<CriticalPoint>& pts) {
                double best = 1e300;
                for (const CriticalPoint& q : pts)
                    best = std::min(best, std::abs(q.x[0].complex_value() - c));
                return best;
            };
            for (const CriticalPoint& q : companion.points)
                hausdorff = std::max(hausdorff, nearest(q.x[0].complex_value(), newton.points));
            for (const CriticalPoint& q : newton.points)
                hausdorff = std::max(hausdorff, nearest(q.x[0].complex_value(), companion.points));
            if (hausdorff > 1e-8)
                r.fail("Hausdorff " + format_double(hausdorff) + " in sample " +
                       std::to_string(i));
        }
        r.detail = "100 gradient samples, 20 root-set comparisons";
    });
}

/// 9. Section-count truncation independence: h0 is unchanged when the s2
/// degree bound grows from n to n+3, for every corpus potential and point.
inline CriterionResult truncation_stability() {
    return detail::timed(9, "oracle-truncation-stability", [](CriterionResult& r) {
        int checks = 0;
        auto run = [&](const detail::CorpusEntry& entry) {
            for (const auto& x : entry.points) {
                TransitionMatrix m = normal_transition(entry.p, x);
                const int base = h0_oracle(m, entry.p.n());
                for (int extra = 1; extra <= 3; ++extra)
                    if (h0_oracle(m, entry.p.n() + extra) != base)
                        r.fail(entry.label + ": h0 moved at D = n+" + std::to_string(extra));
                ++checks;
            }
        };
        for (const auto& entry : detail::quadratic_corpus()) run(entry);
        for (const auto& entry : detail::general_corpus()) run(entry);
        r.detail = std::to_string(checks) + " transition matrices, D = n..n+3";
    });
}

/// Run the acceptance criteria. `exact_only` skips the FLOAT-dependent
/// parts (criterion 8 and the perturbation half of criterion 6); that is
/// the subset behind the CLI selftest verb.
inline std::vector<CriterionResult> run(bool exact_only) {
    std::vector<CriterionResult> out;
    out.push_back(ferrari_quadratic_corpus());
    out.push_back(undeformed_identity());
    out.push_back(route_equivalence());
    out.push_back(derivative_identities());
    out.push_back(window_identities());
    out.push_back(gluing_correspondence(!exact_only));
    out.push_back(stratified_family());
    if (!exact_only) out.push_back(float_numerics());
    out.push_back(truncation_stability());
    return out;
}

}  // namespace laufer::selftest
