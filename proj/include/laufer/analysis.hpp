#pragma once

#include <optional>
#include <string>
#include <vector>

#include "laufer/bundle.hpp"
#include "laufer/critical.hpp"
#include "laufer/parallel.hpp"
#include "laufer/potential.hpp"
#include "laufer/sections.hpp"
#include "laufer/superpotential.hpp"

namespace laufer {

/// Raised for conditions the caller handed us (bad documents, unusable
/// option combinations); the CLI maps it to exit code 2.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AnalyzeOptions {
    /// Explicit critical points; required for loci the solvers cannot
    /// enumerate (and the only way to pick specific family members).
    std::optional<std::vector<std::vector<Scalar>>> points;
    int newton_starts = 64;
    double newton_radius = 2.0;
    double tol = 1e-10;
    std::uint64_t seed = 0x1afe12c5ull;
    /// Also evaluate the second chart datum by its own contour formula and
    /// compare against the gluing-law construction.
    bool contour_cross_check = false;
};

/// Everything the pipeline produced for one critical point.
struct PointRecord {
    CriticalPoint point;
    bool section_ok = false;
    GluingReport gluing;
    std::vector<std::pair<int, Scalar>> obstruction;
    std::optional<SectionCurve> section;
    std::optional<BundleAnalysis> bundle;
    bool contour_match = true;
    std::string error;

    bool ok() const {
        return error.empty() && section_ok && gluing.ok && contour_match && bundle &&
               bundle->agrees;
    }
};

struct AnalysisReport {
    GeometricPotential input;       // as parsed, before normalization
    GeometricPotential normalized;
    CoordinateChangeLog absorbed;
    Superpotential superpotential;
    std::vector<std::string> warnings;
    std::vector<std::string> notes;

    std::string locus_kind;  // quadratic-kernel | univariate-roots | newton | explicit-points
    std::vector<std::vector<Scalar>> kernel;
    std::vector<PointRecord> points;
    int solver_failures = 0;
    bool verdict = true;

    AnalysisReport(GeometricPotential in, GeometricPotential norm, Superpotential w)
        : input(std::move(in)), normalized(std::move(norm)), superpotential(std::move(w)) {}
};

namespace detail {

inline PointRecord analyze_point(const GeometricPotential& p, const Superpotential& w,
                                 const CriticalPoint& pt, bool cross_check) {
    PointRecord rec;
    rec.point = pt;
    try {
        SectionCurve s = reconstruct(p, pt.x);
        rec.section_ok = true;
        rec.gluing = verify_gluing(p, s);
        if (cross_check) {
            LaurentPoly independent = reconstruct_u1_by_contour(p, pt.x);
            LaurentPoly diff = s.omega2_u1 - independent;
            rec.contour_match = true;
            for (const auto& [e, c] : diff.support())
                if (!detail::coeff_negligible(c)) rec.contour_match = false;
        }
        rec.section = std::move(s);
        rec.bundle = ferrari_check(p, w, pt);
    } catch (const ObstructionError& oe) {
        rec.obstruction = oe.offending_terms();
        rec.error = oe.what();
    } catch (const std::exception& e) {
        rec.error = e.what();
    }
    return rec;
}

inline bool gradient_vanishes(const Superpotential& w, const std::vector<Scalar>& x) {
    for (const Scalar& g : gradient(w, x))
        if (!(g.is_exact() ? g.is_zero() : g.magnitude() <= 1e-9)) return false;
    return true;
}

}  // namespace detail

/// End-to-end pipeline: normalize, build the superpotential by both routes
/// (EXACT mode cross-checks their equality), locate critical points, and
/// run section reconstruction, gluing verification and the corank/splitting
/// comparison at each. The verdict is the conjunction of the per-point
/// checks.
inline AnalysisReport analyze(const GeometricPotential& parsed, const AnalyzeOptions& opt = {},
                              std::vector<std::string> parse_warnings = {}) {
    auto [p, log] = normalize(parsed);
    Superpotential w = build_combinatorial(p);
    if (p.mode() == Mode::EXACT && w != build_residue(p))
        throw std::logic_error("internal: superpotential construction routes disagree");

    AnalysisReport report(parsed, p, w);
    report.absorbed = log;
    report.warnings = std::move(parse_warnings);

    std::vector<CriticalPoint> points;
    if (opt.points) {
        report.locus_kind = "explicit-points";
        for (const auto& x : *opt.points) {
            if (static_cast<int>(x.size()) != p.n() + 1)
                throw InputError("explicit point has wrong arity (need n+1 coordinates)");
            for (const Scalar& c : x)
                if (c.mode() != p.mode()) throw InputError("explicit point mode mismatch");
            CriticalPoint pt;
            pt.x = x;
            if (p.mode() == Mode::FLOAT) pt.residual = detail::sup_norm(gradient(w, x));
            pt.kind = corank(hessian(w, x)) > 0 ? PointKind::FAMILY_MEMBER : PointKind::ISOLATED;
            points.push_back(std::move(pt));
        }
    } else if (w.is_zero() || w.is_homogeneous_of_degree(2)) {
        report.locus_kind = "quadratic-kernel";
        CriticalLocusDescription locus = solve_quadratic(w);
        report.kernel = locus.kernel;
        points = locus.points;
    } else if (p.mode() == Mode::FLOAT && p.n() == 0) {
        report.locus_kind = "univariate-roots";
        UnivariateResult roots = solve_univariate(w);
        if (roots.family) {
            report.notes.push_back("dW/dx0 vanishes identically: every point is critical; "
                                   "analyzing the origin");
            CriticalPoint pt;
            pt.x = {Scalar::zero(Mode::FLOAT)};
            pt.kind = PointKind::FAMILY_MEMBER;
            points.push_back(std::move(pt));
        } else {
            points = roots.points;
            if (points.empty()) report.notes.push_back("dW/dx0 has no roots: no critical points");
        }
    } else if (p.mode() == Mode::FLOAT) {
        report.locus_kind = "newton";
        NewtonOptions nopt;
        nopt.starts = opt.newton_starts;
        nopt.radius = opt.newton_radius;
        nopt.tol = opt.tol;
        nopt.seed = opt.seed;
        NewtonResult found = solve_newton(w, nopt);
        points = found.points;
        report.solver_failures = found.failed_starts;
        if (points.empty()) report.notes.push_back("no converged critical points");
    } else {
        // EXACT, not quadratic: only the origin is solvable without help.
        std::vector<Scalar> origin(static_cast<std::size_t>(p.n()) + 1, Scalar::zero(Mode::EXACT));
        if (detail::gradient_vanishes(w, origin)) {
            report.locus_kind = "origin-sample";
            report.notes.push_back("exact mode samples only the origin for non-quadratic "
                                   "potentials; pass explicit points for more");
            CriticalPoint pt;
            pt.x = origin;
            pt.kind = corank(hessian(w, origin)) > 0 ? PointKind::FAMILY_MEMBER
                                                     : PointKind::ISOLATED;
            points.push_back(std::move(pt));
        } else {
            throw InputError(
                "no exact solver applies to this potential (non-quadratic, origin not "
                "critical); provide --points or use float mode");
        }
    }

    report.points = parallel_map(points, [&](const CriticalPoint& pt) {
        return detail::analyze_point(p, w, pt, opt.contour_cross_check);
    });
    for (const PointRecord& rec : report.points)
        if (!rec.ok()) report.verdict = false;
    return report;
}

}  // namespace laufer
