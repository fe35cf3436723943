#pragma once

#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "laufer/laurent.hpp"
#include "laufer/potential.hpp"

namespace laufer {

/// Absolute coefficient-wise tolerance for FLOAT-mode gluing checks and
/// obstruction detection. EXACT mode never uses a tolerance.
inline constexpr double kGluingTolerance = 1e-9;

/// Raised when section reconstruction is attempted at a non-critical point:
/// the transported w2 data acquires positive powers of z in the U1 chart.
/// Carries the offending exponent -> coefficient pairs.
class ObstructionError : public std::runtime_error {
public:
    ObstructionError(std::vector<std::pair<int, Scalar>> offending, std::string what)
        : std::runtime_error(std::move(what)), offending_(std::move(offending)) {}

    const std::vector<std::pair<int, Scalar>>& offending_terms() const { return offending_; }

private:
    std::vector<std::pair<int, Scalar>> offending_;
};

/// A holomorphic section of the fibration: the O(n) part w1 is determined
/// by the parameter vector x, the second component is stored per chart as a
/// polynomial in the local coordinate (z on U0, z' on U1).
struct SectionCurve {
    int n = 0;
    std::vector<Scalar> x;
    LaurentPoly omega2_u0;  // polynomial in z
    LaurentPoly omega2_u1;  // polynomial in z'

    SectionCurve(int n_, std::vector<Scalar> x_, LaurentPoly u0, LaurentPoly u1)
        : n(n_), x(std::move(x_)), omega2_u0(std::move(u0)), omega2_u1(std::move(u1)) {}
};

namespace detail {

inline bool coeff_negligible(const Scalar& c) {
    if (c.is_exact()) return c.is_zero();
    return c.magnitude() <= kGluingTolerance;
}

}  // namespace detail

/// Rebuild the full section over a critical point x. With g = dB/dw along
/// the section, the contour formula collapses to taking the holomorphic
/// part: w2 = -[g]_{>=0}; the U1 data is then forced by the gluing law
/// w2' = z^(n+2) (w2 + g) and comes out holomorphic in z' exactly when x is
/// critical. Non-critical x raises ObstructionError.
inline SectionCurve reconstruct(const GeometricPotential& p, std::span<const Scalar> x) {
    LaurentPoly g = eval_along_section(p, x, 1);
    auto [principal, holomorphic] = g.split_parts();
    LaurentPoly omega2_u0 = -holomorphic;
    // gluing transport: z^(n+2) * (w2 + g) = z^(n+2) * principal(g)
    LaurentPoly transported = principal.shifted(p.n() + 2);
    std::vector<std::pair<int, Scalar>> offending;
    for (const auto& [e, c] : transported.support())
        if (e > 0 && !detail::coeff_negligible(c)) offending.emplace_back(e, c);
    if (!offending.empty()) {
        std::ostringstream os;
        os << "section obstruction: w2' has positive powers of z (point is not critical):";
        for (const auto& [e, c] : offending) os << " (" << c.str() << ")*z^" << e;
        throw ObstructionError(std::move(offending), os.str());
    }
    LaurentPoly clean(transported.coeff_zero().mode());
    for (const auto& [e, c] : transported.support())
        if (e <= 0) clean.set_coeff(e, c);
    return SectionCurve(p.n(), std::vector<Scalar>(x.begin(), x.end()), omega2_u0,
                        clean.invert_chart());
}

inline SectionCurve reconstruct(const GeometricPotential& p, const std::vector<Scalar>& x) {
    return reconstruct(p, std::span<const Scalar>(x));
}

/// Independent evaluation of the second chart datum by the sum-of-residues
/// route: w2'(z') is the holomorphic part of u^(-n-2) * g(1/u). Used to
/// cross-check the gluing-law construction in reconstruct.
inline LaurentPoly reconstruct_u1_by_contour(const GeometricPotential& p,
                                             std::span<const Scalar> x) {
    LaurentPoly g = eval_along_section(p, x, 1);
    return g.invert_chart().shifted(-p.n() - 2).holomorphic_part();
}

struct GluingViolation {
    std::string invariant;  // which section invariant failed
    int exponent;
    double magnitude;
    std::string value;
};

/// Result of verify_gluing. `below_window` lists principal-part exponents
/// of dB/dw under -n-1; these are legitimate for general potentials and are
/// surfaced untouched rather than re-absorbed.
struct GluingReport {
    bool ok = true;
    std::vector<GluingViolation> violations;
    std::vector<std::pair<int, Scalar>> below_window;

    std::string summary() const {
        if (ok) return "gluing verified";
        std::ostringstream os;
        os << "gluing violated:";
        for (const auto& v : violations)
            os << " [" << v.invariant << " exp " << v.exponent << " value " << v.value << "]";
        return os.str();
    }
};

/// Check the three section invariants: both chart data are holomorphic and
/// the gluing law w2' = z^(n+2)(w2 + dB/dw) holds, exactly in EXACT mode
/// and coefficient-wise to 1e-9 in FLOAT mode. Never throws.
inline GluingReport verify_gluing(const GeometricPotential& p, const SectionCurve& s) {
    GluingReport report;
    auto add = [&report](const char* inv, int e, const Scalar& c) {
        report.ok = false;
        report.violations.push_back({inv, e, c.magnitude(), c.str()});
    };

    for (const auto& [e, c] : s.omega2_u0.support())
        if (e < 0 && !detail::coeff_negligible(c)) add("omega2 not holomorphic on U0", e, c);
    for (const auto& [e, c] : s.omega2_u1.support())
        if (e < 0 && !detail::coeff_negligible(c)) add("omega2' not holomorphic on U1", e, c);

    LaurentPoly g = eval_along_section(p, s.x, 1);
    const LaurentPoly g_principal = g.principal_part();
    for (const auto& [e, c] : g_principal.support())
        if (e < -p.n() - 1) report.below_window.emplace_back(e, c);

    LaurentPoly expected = (s.omega2_u0 + g).shifted(p.n() + 2);
    LaurentPoly diff = s.omega2_u1.invert_chart() - expected;
    for (const auto& [e, c] : diff.support())
        if (!detail::coeff_negligible(c)) add("gluing law", e, c);
    return report;
}

}  // namespace laufer
