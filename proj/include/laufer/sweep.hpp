#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "laufer/analysis.hpp"
#include "laufer/parallel.hpp"

namespace laufer {

/// One coefficient slot (d, k) varied over an inclusive endpoint grid.
struct VarySlot {
    int d = 0;
    int k = 0;
    Scalar from;
    Scalar to;
    int steps = 1;
};

struct SweepSpec {
    GeometricPotential base;
    std::vector<VarySlot> slots;  // one or two
    AnalyzeOptions options;

    explicit SweepSpec(GeometricPotential b) : base(std::move(b)) {}
};

struct SweepCell {
    std::vector<Scalar> values;
    int point_count = 0;
    std::string results;  // semicolon list of r=<corank>:(a,b) per point
    bool agrees = false;
    std::string error;
};

struct SweepTable {
    std::vector<std::string> columns;
    std::vector<SweepCell> cells;
};

namespace detail {

inline Scalar grid_value(const VarySlot& slot, int i) {
    if (slot.steps <= 1) return slot.from;
    Scalar num = Scalar::integer_in_mode(i, slot.from.mode());
    Scalar den = Scalar::integer_in_mode(slot.steps - 1, slot.from.mode());
    return slot.from + (slot.to - slot.from) * num / den;
}

inline void validate_slot(const GeometricPotential& base, const VarySlot& slot) {
    if (slot.steps < 1) throw InputError("sweep grid needs at least one step");
    if (slot.d < 1) throw InputError("sweep slot degree d must be >= 1");
    if (slot.from.mode() != base.mode() || slot.to.mode() != base.mode())
        throw InputError("sweep range mode must match the potential mode");
    const bool existing = !base.coefficient(slot.d, slot.k).is_zero();
    const bool in_window = slot.k >= 0 && slot.k <= slot.d * base.n();
    if (!existing && !in_window)
        throw InputError("sweep slot (d=" + std::to_string(slot.d) + ", k=" +
                         std::to_string(slot.k) + ") is neither in the base potential nor in "
                         "the index window");
}

}  // namespace detail

/// Run the analysis pipeline over the coefficient grid. Per-cell failures
/// are recorded in the table; the run always completes. Cells are
/// independent and evaluated in parallel; the table is in grid order.
inline SweepTable run_sweep(const SweepSpec& spec) {
    if (spec.slots.empty() || spec.slots.size() > 2)
        throw InputError("sweep needs one or two varied slots");
    for (const VarySlot& slot : spec.slots) detail::validate_slot(spec.base, slot);

    SweepTable table;
    for (const VarySlot& slot : spec.slots)
        table.columns.push_back("t_" + std::to_string(slot.d) + "_" + std::to_string(slot.k));
    table.columns.insert(table.columns.end(), {"points", "results", "agrees", "error"});

    std::vector<std::vector<Scalar>> grid;
    const int steps0 = spec.slots[0].steps;
    const int steps1 = spec.slots.size() > 1 ? spec.slots[1].steps : 1;
    for (int i = 0; i < steps0; ++i)
        for (int j = 0; j < steps1; ++j) {
            std::vector<Scalar> vals{detail::grid_value(spec.slots[0], i)};
            if (spec.slots.size() > 1) vals.push_back(detail::grid_value(spec.slots[1], j));
            grid.push_back(std::move(vals));
        }

    table.cells = parallel_map(grid, [&spec](const std::vector<Scalar>& vals) {
        SweepCell cell;
        cell.values = vals;
        try {
            GeometricPotential p = spec.base;
            for (std::size_t s = 0; s < spec.slots.size(); ++s)
                p.set_term(spec.slots[s].d, spec.slots[s].k, vals[s]);
            AnalysisReport report = analyze(p, spec.options);
            cell.point_count = static_cast<int>(report.points.size());
            std::ostringstream rs;
            bool first = true;
            for (const PointRecord& rec : report.points) {
                if (!rec.bundle) continue;
                if (!first) rs << ";";
                first = false;
                rs << "r=" << rec.bundle->hessian_corank << ":" << rec.bundle->verified.str();
            }
            cell.results = rs.str();
            cell.agrees = report.verdict && report.solver_failures == 0;
        } catch (const std::exception& e) {
            cell.error = e.what();
        }
        return cell;
    });
    return table;
}

/// Tab-separated rendering: header row, then one row per grid cell.
inline std::string sweep_to_tsv(const SweepTable& table) {
    std::ostringstream os;
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        os << (i ? "\t" : "") << table.columns[i];
    os << "\n";
    for (const SweepCell& cell : table.cells) {
        for (const Scalar& v : cell.values) os << v.str() << "\t";
        os << cell.point_count << "\t" << cell.results << "\t"
           << (cell.agrees ? "yes" : "no") << "\t" << cell.error << "\n";
    }
    return os.str();
}

}  // namespace laufer
