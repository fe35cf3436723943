// Command-line front end: analyze one potential document, sweep a
// coefficient grid, or run the exact verification suite.
//
// Exit codes: 0 success / verdict true, 1 verdict false or failed
// criterion, 2 input error, 3 internal error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "laufer/laufer.hpp"
#include "laufer/selftest.hpp"

namespace {

struct SlotArg {
    int d = 0;
    int k = 0;
};

SlotArg parse_slot(const std::string& s) {
    SlotArg slot;
    if (std::sscanf(s.c_str(), "%d,%d", &slot.d, &slot.k) != 2)
        throw laufer::InputError("--vary expects d,k (e.g. 2,1)");
    return slot;
}

laufer::VarySlot parse_range(const SlotArg& slot, const std::string& range, laufer::Mode mode) {
    laufer::VarySlot out;
    out.d = slot.d;
    out.k = slot.k;
    const auto c1 = range.find(':');
    const auto c2 = range.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw laufer::InputError("--range expects from:to:steps (e.g. 0:2:5)");
    const std::string from = range.substr(0, c1);
    const std::string to = range.substr(c1 + 1, c2 - c1 - 1);
    try {
        out.steps = std::stoi(range.substr(c2 + 1));
    } catch (const std::exception&) {
        throw laufer::InputError("--range step count is not an integer");
    }
    if (mode == laufer::Mode::EXACT) {
        out.from = laufer::detail::rational_from_string(from);
        out.to = laufer::detail::rational_from_string(to);
    } else {
        try {
            out.from = laufer::Scalar::floating(std::stod(from));
            out.to = laufer::Scalar::floating(std::stod(to));
        } catch (const std::exception&) {
            throw laufer::InputError("--range endpoints are not numbers");
        }
    }
    return out;
}

void write_or_print(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw laufer::InputError("cannot write to " + path);
    out << content;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"superpotential / normal-bundle analysis for deformed rank-2 fibrations "
                 "over a rational curve"};
    app.require_subcommand(1);

    std::string potential_path, points_path, json_out, sweep_out;
    int starts = 64;
    double tol = 1e-10;
    std::uint64_t seed = 0x1afe12c5ull;
    bool cross_check = false, quiet = false, selftest_all = false;
    std::string vary1, vary2, range1, range2;

    CLI::App* analyze_cmd = app.add_subcommand(
        "analyze", "run the full pipeline on a potential document");
    analyze_cmd->add_option("file", potential_path, "potential JSON document")->required();
    analyze_cmd->add_option("--points", points_path,
                            "JSON file with explicit critical points (n+1 coordinates each)");
    analyze_cmd->add_option("--starts", starts, "Newton start count (float mode)");
    analyze_cmd->add_option("--tol", tol, "solver tolerance (float mode)");
    analyze_cmd->add_option("--seed", seed, "RNG seed for Newton starts");
    analyze_cmd->add_option("--json", json_out, "write the machine-readable report here");
    analyze_cmd->add_flag("--check-contour", cross_check,
                          "cross-check the u1 chart datum by its own contour evaluation");
    analyze_cmd->add_flag("--quiet", quiet, "suppress the human-readable report");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "grid-scan one or two coefficients");
    sweep_cmd->add_option("file", potential_path, "base potential JSON document")->required();
    sweep_cmd->add_option("--vary", vary1, "coefficient slot d,k to vary")->required();
    sweep_cmd->add_option("--range", range1, "grid from:to:steps for --vary")->required();
    sweep_cmd->add_option("--vary2", vary2, "second slot d,k");
    sweep_cmd->add_option("--range2", range2, "grid for --vary2");
    sweep_cmd->add_option("--out", sweep_out, "write the TSV table here (default stdout)");
    sweep_cmd->add_option("--starts", starts, "Newton start count (float mode)");
    sweep_cmd->add_option("--tol", tol, "solver tolerance (float mode)");
    sweep_cmd->add_option("--seed", seed, "RNG seed for Newton starts");

    CLI::App* selftest_cmd = app.add_subcommand(
        "selftest", "run the exact verification suite (one line per criterion)");
    selftest_cmd->add_flag("--all", selftest_all, "include the float-mode criteria");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*analyze_cmd) {
            std::vector<std::string> warnings;
            laufer::GeometricPotential parsed =
                laufer::parse_potential(laufer::read_file(potential_path), &warnings);
            laufer::AnalyzeOptions opt;
            opt.newton_starts = starts;
            opt.tol = tol;
            opt.seed = seed;
            opt.contour_cross_check = cross_check;
            if (!points_path.empty())
                opt.points = laufer::parse_points(laufer::read_file(points_path), parsed.mode(),
                                                  parsed.n());
            laufer::AnalysisReport report = laufer::analyze(parsed, opt, std::move(warnings));
            if (!quiet) std::cout << laufer::report_to_text(report);
            if (!json_out.empty())
                write_or_print(json_out, laufer::report_to_json(report).dump(2) + "\n");
            return (report.verdict && report.solver_failures == 0) ? 0 : 1;
        }
        if (*sweep_cmd) {
            laufer::GeometricPotential base =
                laufer::parse_potential(laufer::read_file(potential_path));
            laufer::SweepSpec spec(base);
            spec.options.newton_starts = starts;
            spec.options.tol = tol;
            spec.options.seed = seed;
            spec.slots.push_back(parse_range(parse_slot(vary1), range1, base.mode()));
            if (!vary2.empty() || !range2.empty()) {
                if (vary2.empty() || range2.empty())
                    throw laufer::InputError("--vary2 and --range2 must be given together");
                spec.slots.push_back(parse_range(parse_slot(vary2), range2, base.mode()));
            }
            laufer::SweepTable table = laufer::run_sweep(spec);
            write_or_print(sweep_out, laufer::sweep_to_tsv(table));
            bool all_ok = true;
            for (const laufer::SweepCell& cell : table.cells)
                if (!cell.agrees || !cell.error.empty()) all_ok = false;
            return all_ok ? 0 : 1;
        }
        // selftest
        std::vector<laufer::selftest::CriterionResult> results =
            laufer::selftest::run(!selftest_all);
        bool ok = true;
        for (const auto& r : results) {
            std::printf("[%s] C%d %s: %s (%.2fs)\n", r.pass ? "PASS" : "FAIL", r.id,
                        r.name.c_str(), r.detail.c_str(), r.seconds);
            ok = ok && r.pass;
        }
        return ok ? 0 : 1;
    } catch (const laufer::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const laufer::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
