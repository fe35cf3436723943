#pragma once

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "laufer/analysis.hpp"
#include "laufer/potential.hpp"
#include "laufer/scalar.hpp"

namespace laufer {

using json = nlohmann::ordered_json;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline Scalar rational_from_string(const std::string& s) {
    std::string num = s, den = "1";
    if (auto slash = s.find('/'); slash != std::string::npos) {
        num = s.substr(0, slash);
        den = s.substr(slash + 1);
    }
    try {
        Integer p(num), q(den);
        if (q == 0) throw ParseError("rational '" + s + "' has zero denominator");
        return Scalar::exact(p, q);
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("'" + s + "' is not a rational p/q");
    }
}

inline Scalar coefficient_from_json(const json& v, Mode mode) {
    if (v.is_string()) {
        if (mode == Mode::FLOAT)
            throw ParseError("rational string coefficient in a float-mode document");
        return rational_from_string(v.get<std::string>());
    }
    if (v.is_number_integer())
        return mode == Mode::EXACT ? Scalar::exact(v.get<long long>())
                                   : Scalar::floating(static_cast<double>(v.get<long long>()));
    if (v.is_number_float()) {
        if (mode == Mode::EXACT)
            throw ParseError("float coefficient in an exact-mode document (use \"p/q\")");
        return Scalar::floating(v.get<double>());
    }
    throw ParseError("coefficient must be a number or a rational string");
}

}  // namespace detail

/// Parse a potential document:
///   { "n": int, "mode": "exact"|"float",
///     "terms": [ { "d": int, "k": int, "t": "p/q" | number }, ... ] }
/// Duplicate (d, k) entries are summed; d = 0 entries are dropped with a
/// warning (they cannot affect the fibration).
inline GeometricPotential potential_from_json(const json& doc,
                                              std::vector<std::string>* warnings = nullptr) {
    if (!doc.is_object()) throw ParseError("potential document must be a JSON object");
    if (!doc.contains("n") || !doc["n"].is_number_integer())
        throw ParseError("missing integer field 'n'");
    const int n = doc["n"].get<int>();
    if (n < 0) throw ParseError("'n' must be nonnegative");
    if (!doc.contains("mode") || !doc["mode"].is_string())
        throw ParseError("missing string field 'mode' (\"exact\" or \"float\")");
    const std::string mode_str = doc["mode"].get<std::string>();
    Mode mode;
    if (mode_str == "exact")
        mode = Mode::EXACT;
    else if (mode_str == "float")
        mode = Mode::FLOAT;
    else
        throw ParseError("'mode' must be \"exact\" or \"float\"");
    if (!doc.contains("terms") || !doc["terms"].is_array())
        throw ParseError("missing array field 'terms'");

    GeometricPotential p(n, mode);
    for (const json& term : doc["terms"]) {
        if (!term.is_object() || !term.contains("d") || !term.contains("k") || !term.contains("t"))
            throw ParseError("each term needs integer 'd', integer 'k' and coefficient 't'");
        if (!term["d"].is_number_integer() || !term["k"].is_number_integer())
            throw ParseError("'d' and 'k' must be integers");
        const int d = term["d"].get<int>();
        const int k = term["k"].get<int>();
        if (d < 0) throw ParseError("term degree d must be >= 1");
        Scalar t = detail::coefficient_from_json(term["t"], mode);
        if (d == 0) {
            if (warnings)
                warnings->push_back("dropped d=0 term (k=" + std::to_string(k) +
                                    "): constant in the fiber coordinate, no effect");
            continue;
        }
        p.add_term(d, k, t);
    }
    return p;
}

inline GeometricPotential parse_potential(const std::string& text,
                                          std::vector<std::string>* warnings = nullptr) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return potential_from_json(doc, warnings);
}

inline json scalar_to_json(const Scalar& s) {
    if (s.is_exact()) return s.rational().str();
    Complex c = s.complex_value();
    if (c.imag() == 0.0) return c.real();
    return json::array({c.real(), c.imag()});
}

inline Scalar scalar_from_json(const json& v, Mode mode) {
    if (v.is_array()) {
        if (mode == Mode::EXACT) throw ParseError("complex coordinate in an exact document");
        if (v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw ParseError("complex value must be [re, im]");
        return Scalar::floating(v[0].get<double>(), v[1].get<double>());
    }
    return detail::coefficient_from_json(v, mode);
}

/// Parse a points file: a JSON array of coordinate vectors, entries in the
/// potential's mode ("p/q" strings for exact, numbers or [re, im] pairs for
/// float).
inline std::vector<std::vector<Scalar>> parse_points(const std::string& text, Mode mode, int n) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON points file: ") + e.what());
    }
    if (!doc.is_array()) throw ParseError("points file must be a JSON array of vectors");
    std::vector<std::vector<Scalar>> points;
    for (const json& row : doc) {
        if (!row.is_array() || static_cast<int>(row.size()) != n + 1)
            throw ParseError("each point must be an array of n+1 coordinates");
        std::vector<Scalar> x;
        for (const json& v : row) x.push_back(scalar_from_json(v, mode));
        points.push_back(std::move(x));
    }
    return points;
}

inline json potential_to_json(const GeometricPotential& p) {
    json terms = json::array();
    for (const auto& [dk, t] : p.terms())
        terms.push_back({{"d", dk.first}, {"k", dk.second}, {"t", scalar_to_json(t)}});
    return {{"n", p.n()}, {"mode", mode_name(p.mode())}, {"terms", std::move(terms)}};
}

inline json laurent_to_json(const LaurentPoly& p) {
    json out = json::array();
    for (const auto& [e, c] : p.support()) out.push_back({{"exp", e}, {"coeff", scalar_to_json(c)}});
    return out;
}

inline json point_to_json(const std::vector<Scalar>& x) {
    json out = json::array();
    for (const Scalar& c : x) out.push_back(scalar_to_json(c));
    return out;
}

inline json report_to_json(const AnalysisReport& r) {
    json out;
    out["input"] = potential_to_json(r.input);
    out["warnings"] = r.warnings;
    json absorbed = json::array();
    for (const CoordinateChange& c : r.absorbed.entries)
        absorbed.push_back({{"chart", chart_name(c.chart)},
                            {"d", c.d},
                            {"exponent", c.exponent},
                            {"coefficient", scalar_to_json(c.coefficient)}});
    out["normalization"] = {{"potential", potential_to_json(r.normalized)},
                            {"absorbed", std::move(absorbed)}};
    json monos = json::array();
    for (const auto& [alpha, c] : r.superpotential.monomials())
        monos.push_back({{"alpha", alpha}, {"coeff", scalar_to_json(c)}});
    out["superpotential"] = {{"n", r.normalized.n()}, {"monomials", std::move(monos)}};
    out["critical"] = {{"kind", r.locus_kind}, {"solver_failures", r.solver_failures}};
    if (!r.kernel.empty()) {
        json kb = json::array();
        for (const auto& v : r.kernel) kb.push_back(point_to_json(v));
        out["critical"]["kernel_basis"] = std::move(kb);
    }
    json points = json::array();
    for (const PointRecord& rec : r.points) {
        json p;
        p["x"] = point_to_json(rec.point.x);
        p["kind"] = kind_name(rec.point.kind);
        p["residual"] = rec.point.residual;
        p["section_ok"] = rec.section_ok;
        p["gluing_ok"] = rec.gluing.ok;
        if (!rec.gluing.ok) {
            json v = json::array();
            for (const GluingViolation& g : rec.gluing.violations)
                v.push_back({{"invariant", g.invariant},
                             {"exponent", g.exponent},
                             {"magnitude", g.magnitude},
                             {"value", g.value}});
            p["gluing_violations"] = std::move(v);
        }
        if (!rec.gluing.below_window.empty()) {
            json bw = json::array();
            for (const auto& [e, c] : rec.gluing.below_window)
                bw.push_back({{"exp", e}, {"coeff", scalar_to_json(c)}});
            p["below_window_terms"] = std::move(bw);
        }
        if (!rec.obstruction.empty()) {
            json ob = json::array();
            for (const auto& [e, c] : rec.obstruction)
                ob.push_back({{"exp", e}, {"coeff", scalar_to_json(c)}});
            p["obstruction"] = std::move(ob);
        }
        if (rec.section) {
            p["omega2_u0"] = laurent_to_json(rec.section->omega2_u0);
            p["omega2_u1"] = laurent_to_json(rec.section->omega2_u1);
        }
        if (rec.bundle) {
            p["hessian_corank"] = rec.bundle->hessian_corank;
            p["predicted"] = {rec.bundle->predicted.a, rec.bundle->predicted.b};
            p["h0"] = rec.bundle->oracle_h0;
            p["verified"] = {rec.bundle->verified.a, rec.bundle->verified.b};
            p["agrees"] = rec.bundle->agrees;
            p["near_threshold"] = rec.bundle->near_threshold;
        }
        if (!rec.error.empty()) p["error"] = rec.error;
        p["ok"] = rec.ok();
        points.push_back(std::move(p));
    }
    out["points"] = std::move(points);
    out["notes"] = r.notes;
    out["verdict"] = r.verdict;
    return out;
}

namespace detail {

inline std::string point_str(const std::vector<Scalar>& x) {
    std::string s = "(";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) s += ", ";
        s += x[i].str();
    }
    return s + ")";
}

inline std::string pad(std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
}

}  // namespace detail

/// Fixed-width human-readable rendering of an analysis report.
inline std::string report_to_text(const AnalysisReport& r) {
    std::ostringstream os;
    os << "potential: n=" << r.input.n() << " mode=" << mode_name(r.input.mode()) << " terms:";
    if (r.input.terms().empty()) os << " (none; undeformed bundle)";
    for (const auto& [dk, t] : r.input.terms())
        os << " t[" << dk.first << "," << dk.second << "]=" << t.str();
    os << "\n";
    for (const std::string& w : r.warnings) os << "warning: " << w << "\n";
    if (!r.absorbed.empty()) {
        os << "absorbed out-of-window terms:\n";
        for (const CoordinateChange& c : r.absorbed.entries)
            os << "  chart " << chart_name(c.chart) << "  d=" << c.d
               << "  exponent=" << c.exponent << "  coefficient=" << c.coefficient.str() << "\n";
    }
    os << "superpotential: " << r.superpotential.str() << "\n";
    os << "critical locus: " << r.locus_kind;
    if (!r.kernel.empty()) os << " (kernel dimension " << r.kernel.size() << ")";
    os << "\n";
    for (const std::string& n : r.notes) os << "note: " << n << "\n";

    os << detail::pad("point", 34) << detail::pad("kind", 15) << detail::pad("r", 3)
       << detail::pad("predicted", 11) << detail::pad("h0", 4) << detail::pad("verified", 11)
       << detail::pad("agrees", 8) << "gluing\n";
    for (const PointRecord& rec : r.points) {
        os << detail::pad(detail::point_str(rec.point.x), 34)
           << detail::pad(kind_name(rec.point.kind), 15);
        if (rec.bundle) {
            os << detail::pad(std::to_string(rec.bundle->hessian_corank), 3)
               << detail::pad(rec.bundle->predicted.str(), 11)
               << detail::pad(std::to_string(rec.bundle->oracle_h0), 4)
               << detail::pad(rec.bundle->verified.str(), 11)
               << detail::pad(rec.bundle->agrees ? "yes" : "NO", 8)
               << (rec.gluing.ok ? "ok" : "VIOLATED")
               << (rec.bundle->near_threshold ? "  [near rank threshold]" : "") << "\n";
        } else {
            os << "failed: " << rec.error << "\n";
        }
    }
    if (r.solver_failures > 0)
        os << "solver: " << r.solver_failures << " start(s) did not converge\n";
    os << "verdict: " << (r.verdict ? "PASS" : "FAIL")
       << (r.verdict ? " (every section splits as predicted)" : "") << "\n";
    return os.str();
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace laufer
