#include <catch_amalgamated.hpp>

#include <random>

#include "laufer/potential.hpp"

using namespace laufer;

namespace {

std::vector<Scalar> xvec(std::initializer_list<long long> vals) {
    std::vector<Scalar> out;
    for (long long v : vals) out.push_back(Scalar::exact(v));
    return out;
}

LaurentPoly exact_poly(std::initializer_list<std::pair<int, Scalar>> terms) {
    LaurentPoly p(Mode::EXACT);
    for (const auto& [e, c] : terms) p.set_coeff(e, c);
    return p;
}

}  // namespace

TEST_CASE("normalize absorbs k < 0 into the U0 chart") {
    GeometricPotential raw(1, Mode::EXACT);
    raw.add_term(1, -1, Scalar::exact(5));
    auto [p, log] = normalize(raw);
    REQUIRE(p.terms().empty());
    REQUIRE(log.entries.size() == 1);
    REQUIRE(log.entries[0] == CoordinateChange{Chart::U0, 1, 0, Scalar::exact(5)});
}

TEST_CASE("normalize absorbs k > dn into the U1 chart") {
    GeometricPotential raw(1, Mode::EXACT);
    raw.add_term(1, 2, Scalar::exact(3));
    auto [p, log] = normalize(raw);
    REQUIRE(p.terms().empty());
    REQUIRE(log.entries.size() == 1);
    REQUIRE(log.entries[0] == CoordinateChange{Chart::U1, 1, 0, Scalar::exact(3)});
}

TEST_CASE("normalize keeps in-window terms and is idempotent") {
    GeometricPotential raw(1, Mode::EXACT);
    raw.add_term(2, 1, Scalar::exact(7, 3));
    raw.add_term(3, -2, Scalar::exact(1));
    raw.add_term(1, 5, Scalar::exact(2));
    auto [p, log] = normalize(raw);
    REQUIRE(p.terms().size() == 1);
    REQUIRE(p.coefficient(2, 1) == Scalar::exact(7, 3));
    REQUIRE(log.entries.size() == 2);
    REQUIRE(p.in_window());

    auto [p2, log2] = normalize(p);
    REQUIRE(p2 == p);
    REQUIRE(log2.empty());
}

TEST_CASE("eval_along_section computes B and its w-derivatives") {
    GeometricPotential p(1, Mode::EXACT);
    const Scalar t = Scalar::exact(3, 2);
    p.add_term(2, 1, t);

    // order 1 at (1, 2): 2t z^-2 (1 + 2z) = 2t z^-2 + 4t z^-1
    REQUIRE(eval_along_section(p, xvec({1, 2}), 1) ==
            exact_poly({{-2, Scalar::exact(3)}, {-1, Scalar::exact(6)}}));

    // order 2 is w-independent: 2t z^-2
    REQUIRE(eval_along_section(p, xvec({5, -7}), 2) == exact_poly({{-2, Scalar::exact(3)}}));

    // empty potential evaluates to zero at every order
    GeometricPotential zero(2, Mode::EXACT);
    for (int order = 0; order <= 2; ++order)
        REQUIRE(eval_along_section(zero, xvec({1, 2, 3}), order).is_zero());
}

TEST_CASE("eval_along_section validates its inputs") {
    GeometricPotential p(1, Mode::EXACT);
    p.add_term(2, 1, Scalar::exact(1));
    REQUIRE_THROWS_AS(eval_along_section(p, xvec({1}), 0), std::invalid_argument);

    GeometricPotential unnormalized(1, Mode::EXACT);
    unnormalized.add_term(1, -1, Scalar::exact(1));
    REQUIRE_THROWS_AS(eval_along_section(unnormalized, xvec({1, 1}), 0), std::invalid_argument);

    std::vector<Scalar> wrong_mode{Scalar::floating(1.0), Scalar::floating(0.0)};
    REQUIRE_THROWS_AS(eval_along_section(p, wrong_mode, 0), ModeMismatchError);
}

TEST_CASE("potential terms reject d < 1 and drop zero sums") {
    GeometricPotential p(1, Mode::EXACT);
    REQUIRE_THROWS_AS(p.add_term(0, 0, Scalar::exact(1)), std::invalid_argument);
    REQUIRE_THROWS_AS(p.add_term(-2, 0, Scalar::exact(1)), std::invalid_argument);
    p.add_term(2, 1, Scalar::exact(2, 3));
    p.add_term(2, 1, Scalar::exact(-2, 3));
    REQUIRE(p.is_zero());
}

TEST_CASE("first-order shift in the section reproduces the Taylor term") {
    // Shift w1 by a constant eps (x0 -> x0 + eps):
    // B(z, w + eps) - B(z, w) - eps dB/dw = O(eps^2).
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = std::uniform_int_distribution<int>(0, 3)(rng);
        GeometricPotential p(n, Mode::FLOAT);
        for (int t = 0; t < 3; ++t) {
            const int d = std::uniform_int_distribution<int>(1, 4)(rng);
            const int k = std::uniform_int_distribution<int>(0, d * n)(rng);
            p.add_term(d, k, Scalar::floating(coeff(rng)));
        }
        std::vector<Scalar> x;
        for (int i = 0; i <= n; ++i) x.push_back(Scalar::floating(coeff(rng)));

        const double eps = 1e-4;
        std::vector<Scalar> shifted = x;
        shifted[0] = Scalar(shifted[0].complex_value() + eps);

        LaurentPoly lhs = eval_along_section(p, shifted, 0) - eval_along_section(p, x, 0) -
                          eval_along_section(p, x, 1).scaled(Scalar::floating(eps));
        double second_norm = 0.0;
        const LaurentPoly second = eval_along_section(p, x, 2);
        for (const auto& [e, c] : second.support()) second_norm += c.magnitude();
        for (const auto& [e, c] : lhs.support())
            REQUIRE(c.magnitude() <= eps * eps * (0.5 * second_norm + 1.0));
    }
}

TEST_CASE("order-0 exponents stay inside the degree window") {
    std::mt19937_64 rng(31415);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = std::uniform_int_distribution<int>(0, 3)(rng);
        GeometricPotential p(n, Mode::EXACT);
        int dmax = 0;
        for (int t = 0; t < 4; ++t) {
            const int d = std::uniform_int_distribution<int>(1, 4)(rng);
            const int k = std::uniform_int_distribution<int>(0, d * n)(rng);
            p.add_term(d, k, Scalar::exact(std::uniform_int_distribution<int>(1, 9)(rng)));
            dmax = std::max(dmax, d);
        }
        std::vector<Scalar> x;
        for (int i = 0; i <= n; ++i)
            x.push_back(Scalar::exact(std::uniform_int_distribution<int>(-3, 3)(rng)));
        LaurentPoly b = eval_along_section(p, x, 0);
        if (b.is_zero()) continue;
        REQUIRE(b.min_exp() >= -dmax * n - 1);
        REQUIRE(b.max_exp() <= dmax * n - 1);
    }
}
