#include <catch_amalgamated.hpp>

#include "laufer/io.hpp"
#include "laufer/sweep.hpp"

using namespace laufer;

TEST_CASE("parse_potential reads the document schema") {
    GeometricPotential p =
        parse_potential(R"({"n":1,"mode":"exact","terms":[{"d":2,"k":1,"t":"1/1"}]})");
    REQUIRE(p.n() == 1);
    REQUIRE(p.mode() == Mode::EXACT);
    REQUIRE(p.coefficient(2, 1) == Scalar::exact(1));
}

TEST_CASE("parse accepts out-of-window terms for later normalization") {
    GeometricPotential p =
        parse_potential(R"({"n":1,"mode":"exact","terms":[{"d":1,"k":-1,"t":5}]})");
    REQUIRE(p.coefficient(1, -1) == Scalar::exact(5));
    REQUIRE(!p.in_window());
    auto [normalized, log] = normalize(p);
    REQUIRE(normalized.is_zero());
    REQUIRE(log.entries.size() == 1);
}

TEST_CASE("k beyond the window parses fine and normalizes away") {
    GeometricPotential p =
        parse_potential(R"({"n":0,"mode":"exact","terms":[{"d":2,"k":1,"t":1}]})");
    REQUIRE(p.coefficient(2, 1) == Scalar::exact(1));
    auto [normalized, log] = normalize(p);
    REQUIRE(normalized.is_zero());
    REQUIRE(log.entries.size() == 1);
    REQUIRE(log.entries[0].chart == Chart::U1);
    REQUIRE(log.entries[0].exponent == 0);
}

TEST_CASE("parse drops d = 0 terms with a warning") {
    std::vector<std::string> warnings;
    GeometricPotential p = parse_potential(
        R"({"n":0,"mode":"exact","terms":[{"d":0,"k":3,"t":2},{"d":2,"k":1,"t":1}]})", &warnings);
    REQUIRE(warnings.size() == 1);
    REQUIRE(p.terms().size() == 1);
    REQUIRE(p.coefficient(2, 1) == Scalar::exact(1));
}

TEST_CASE("parse sums duplicate slots") {
    GeometricPotential p = parse_potential(
        R"({"n":1,"mode":"exact","terms":[{"d":2,"k":1,"t":"1/3"},{"d":2,"k":1,"t":"2/3"}]})");
    REQUIRE(p.terms().size() == 1);
    REQUIRE(p.coefficient(2, 1) == Scalar::exact(1));
}

TEST_CASE("parse rejects malformed documents") {
    REQUIRE_THROWS_AS(parse_potential("not json"), ParseError);
    REQUIRE_THROWS_AS(parse_potential(R"({"mode":"exact","terms":[]})"), ParseError);
    REQUIRE_THROWS_AS(parse_potential(R"({"n":1,"mode":"exact"})"), ParseError);
    REQUIRE_THROWS_AS(parse_potential(R"({"n":1,"mode":"weird","terms":[]})"), ParseError);
    REQUIRE_THROWS_AS(
        parse_potential(R"({"n":1,"mode":"exact","terms":[{"d":-1,"k":0,"t":1}]})"), ParseError);
    REQUIRE_THROWS_AS(
        parse_potential(R"({"n":1,"mode":"exact","terms":[{"d":2,"k":0,"t":"x"}]})"), ParseError);
    REQUIRE_THROWS_AS(
        parse_potential(R"({"n":1,"mode":"exact","terms":[{"d":2,"k":0,"t":"1/0"}]})"),
        ParseError);
    // mode mismatch between declared mode and coefficient format
    REQUIRE_THROWS_AS(
        parse_potential(R"({"n":1,"mode":"exact","terms":[{"d":2,"k":0,"t":0.5}]})"), ParseError);
    REQUIRE_THROWS_AS(
        parse_potential(R"({"n":1,"mode":"float","terms":[{"d":2,"k":0,"t":"1/2"}]})"),
        ParseError);
}

TEST_CASE("report input echo round-trips") {
    std::vector<std::string> warnings;
    GeometricPotential p = parse_potential(
        R"({"n":2,"mode":"exact","terms":[{"d":3,"k":4,"t":"-7/9"},{"d":2,"k":2,"t":3}]})",
        &warnings);
    AnalysisReport report = analyze(p, {}, warnings);
    json echo = report_to_json(report)["input"];
    REQUIRE(potential_from_json(echo) == p);
}

TEST_CASE("exact reports are deterministic") {
    auto render = [] {
        GeometricPotential p =
            parse_potential(R"({"n":1,"mode":"exact","terms":[{"d":3,"k":1,"t":1},{"d":2,"k":0,"t":1}]})");
        AnalyzeOptions opt;
        opt.points = std::vector<std::vector<Scalar>>{
            {Scalar::exact(0), Scalar::exact(1)}, {Scalar::exact(0), Scalar::exact(-1, 3)}};
        AnalysisReport report = analyze(p, opt);
        return report_to_json(report).dump(2) + "\n---\n" + report_to_text(report);
    };
    REQUIRE(render() == render());
}

TEST_CASE("points files parse in the document mode") {
    std::vector<std::vector<Scalar>> pts = parse_points(R"([["0","1/2"],["1","-2"]])",
                                                        Mode::EXACT, 1);
    REQUIRE(pts.size() == 2);
    REQUIRE(pts[0][1] == Scalar::exact(1, 2));
    REQUIRE_THROWS_AS(parse_points(R"([["0"]])", Mode::EXACT, 1), ParseError);
    REQUIRE_THROWS_AS(parse_points(R"({"a":1})", Mode::EXACT, 1), ParseError);

    std::vector<std::vector<Scalar>> fpts = parse_points(R"([[0.5,[1.0,2.0]]])", Mode::FLOAT, 1);
    REQUIRE(fpts[0][1] == Scalar::floating(1.0, 2.0));
}

TEST_CASE("analyze verdict tracks per-point agreement") {
    GeometricPotential p =
        parse_potential(R"({"n":1,"mode":"exact","terms":[{"d":2,"k":1,"t":1}]})");
    AnalyzeOptions opt;
    opt.points = std::vector<std::vector<Scalar>>{{Scalar::exact(1), Scalar::exact(1)}};
    AnalysisReport report = analyze(p, opt);  // not a critical point
    REQUIRE(!report.verdict);
    REQUIRE(!report.points[0].ok());
    REQUIRE(!report.points[0].obstruction.empty());
}

TEST_CASE("sweep emits a TSV with one row per cell") {
    GeometricPotential base =
        parse_potential(R"({"n":1,"mode":"exact","terms":[{"d":2,"k":1,"t":1}]})");
    SweepSpec spec(base);
    spec.slots.push_back({2, 1, Scalar::exact(1), Scalar::exact(3), 3});
    SweepTable table = run_sweep(spec);
    REQUIRE(table.cells.size() == 3);
    for (const SweepCell& cell : table.cells) {
        REQUIRE(cell.error.empty());
        REQUIRE(cell.point_count == 1);
        REQUIRE(cell.results == "r=0:(-1, -1)");
        REQUIRE(cell.agrees);
    }
    std::string tsv = sweep_to_tsv(table);
    REQUIRE(tsv.find("t_2_1\tpoints\tresults\tagrees\terror\n") == 0);
    REQUIRE(std::count(tsv.begin(), tsv.end(), '\n') == 4);
}

TEST_CASE("sweep through zero hits the rank jump") {
    GeometricPotential base =
        parse_potential(R"({"n":1,"mode":"exact","terms":[{"d":2,"k":0,"t":1}]})");
    SweepSpec spec(base);
    spec.slots.push_back({2, 0, Scalar::exact(0), Scalar::exact(1), 2});
    SweepTable table = run_sweep(spec);
    REQUIRE(table.cells.size() == 2);
    // t = 0: B vanishes, corank 2 and splitting (1, -3); t = 1: corank 1, (0, -2)
    REQUIRE(table.cells[0].results.find("r=2:(1, -3)") != std::string::npos);
    REQUIRE(table.cells[1].results.find("r=1:(0, -2)") != std::string::npos);
}

TEST_CASE("empty 1x1 sweep of the undeformed bundle") {
    GeometricPotential base = parse_potential(R"({"n":2,"mode":"exact","terms":[]})");
    SweepSpec spec(base);
    spec.slots.push_back({2, 0, Scalar::exact(0), Scalar::exact(0), 1});
    SweepTable table = run_sweep(spec);
    REQUIRE(table.cells.size() == 1);
    REQUIRE(table.cells[0].results.find("r=3") != std::string::npos);
    REQUIRE(table.cells[0].agrees);
}

TEST_CASE("sweep validates slots") {
    GeometricPotential base = parse_potential(R"({"n":1,"mode":"exact","terms":[]})");
    SweepSpec spec(base);
    spec.slots.push_back({2, 9, Scalar::exact(0), Scalar::exact(1), 2});  // out of window, absent
    REQUIRE_THROWS_AS(run_sweep(spec), InputError);
}

TEST_CASE("two-dimensional sweep covers the grid in row-major order") {
    GeometricPotential base = parse_potential(R"({"n":1,"mode":"exact","terms":[]})");
    SweepSpec spec(base);
    spec.slots.push_back({2, 0, Scalar::exact(0), Scalar::exact(1), 2});
    spec.slots.push_back({2, 2, Scalar::exact(0), Scalar::exact(1), 2});
    SweepTable table = run_sweep(spec);
    REQUIRE(table.cells.size() == 4);
    REQUIRE(table.cells[0].values[0] == Scalar::exact(0));
    REQUIRE(table.cells[0].values[1] == Scalar::exact(0));
    REQUIRE(table.cells[1].values[1] == Scalar::exact(1));
    REQUIRE(table.cells[3].values[0] == Scalar::exact(1));
    for (const SweepCell& cell : table.cells) REQUIRE(cell.agrees);
}
