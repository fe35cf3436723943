#include <catch_amalgamated.hpp>

#include <random>

#include "laufer/superpotential.hpp"

using namespace laufer;

namespace {

Polynomial poly(int nvars, std::initializer_list<std::pair<MultiIndex, Scalar>> terms) {
    Polynomial p(nvars, Mode::EXACT);
    for (const auto& [a, c] : terms) p.add_term(a, c);
    return p;
}

GeometricPotential single(int n, int d, int k, const Scalar& t) {
    GeometricPotential p(n, Mode::EXACT);
    p.add_term(d, k, t);
    return p;
}

std::vector<Scalar> xvec(std::initializer_list<long long> vals) {
    std::vector<Scalar> out;
    for (long long v : vals) out.push_back(Scalar::exact(v));
    return out;
}

GeometricPotential random_normalized(std::mt19937_64& rng, int max_n, int max_d) {
    const int n = std::uniform_int_distribution<int>(0, max_n)(rng);
    GeometricPotential p(n, Mode::EXACT);
    const int terms = std::uniform_int_distribution<int>(1, 5)(rng);
    for (int t = 0; t < terms; ++t) {
        const int d = std::uniform_int_distribution<int>(1, max_d)(rng);
        const int k = std::uniform_int_distribution<int>(0, d * n)(rng);
        int num = std::uniform_int_distribution<int>(-9, 9)(rng);
        if (num == 0) num = 1;
        p.add_term(d, k, Scalar::exact(num, std::uniform_int_distribution<int>(1, 9)(rng)));
    }
    return p;
}

}  // namespace

TEST_CASE("build_combinatorial expands over ordered index tuples") {
    // n=1, t_2^(1) = 1 -> 2 x0 x1
    REQUIRE(build_combinatorial(single(1, 2, 1, Scalar::exact(1))) ==
            poly(2, {{{1, 1}, Scalar::exact(2)}}));

    // n=2, t_2^(2) = 1 -> x1^2 + 2 x0 x2
    REQUIRE(build_combinatorial(single(2, 2, 2, Scalar::exact(1))) ==
            poly(3, {{{0, 2, 0}, Scalar::exact(1)}, {{1, 0, 1}, Scalar::exact(2)}}));

    REQUIRE(build_combinatorial(GeometricPotential(1, Mode::EXACT)).is_zero());

    GeometricPotential unnormalized(1, Mode::EXACT);
    unnormalized.add_term(2, -1, Scalar::exact(1));
    REQUIRE_THROWS_AS(build_combinatorial(unnormalized), std::invalid_argument);
}

TEST_CASE("build_residue extracts the z^-1 coefficient") {
    REQUIRE(build_residue(single(1, 2, 1, Scalar::exact(1))) ==
            poly(2, {{{1, 1}, Scalar::exact(2)}}));

    // n=0, t_3^(0) = t -> t x0^3
    const Scalar t = Scalar::exact(5, 7);
    REQUIRE(build_residue(single(0, 3, 0, t)) == poly(1, {{{3}, t}}));

    REQUIRE(build_residue(GeometricPotential(3, Mode::EXACT)).is_zero());
}

TEST_CASE("route equivalence on random normalized potentials") {
    std::mt19937_64 rng(777);
    for (int i = 0; i < 60; ++i) {
        GeometricPotential p = random_normalized(rng, 3, 4);
        REQUIRE(build_combinatorial(p) == build_residue(p));
    }
}

TEST_CASE("superpotential monomials respect the z-weight grading") {
    for (int n = 0; n <= 3; ++n)
        for (int d = 1; d <= 4; ++d)
            for (int k = 0; k <= d * n; ++k) {
                Polynomial w = w_basis(d, k, n, Mode::EXACT);
                for (const auto& [alpha, c] : w.monomials()) {
                    REQUIRE(total_degree(alpha) == d);
                    REQUIRE(weight(alpha) == k);
                }
            }
}

TEST_CASE("reduce_derivative gives the ladder data") {
    DerivativeReduction r = reduce_derivative(2, 1, 0);
    REQUIRE(r.factor == 2);
    REQUIRE(r.d == 1);
    REQUIRE(r.k == 1);
    // d/dx0 of 2 x0 x1 = 2 x1 = 2 W_1^(1)
    REQUIRE(w_basis(2, 1, 1, Mode::EXACT).derivative(0) ==
            w_basis(1, 1, 1, Mode::EXACT).scaled(Scalar::exact(2)));

    // base case: W_0^(0) = 1
    DerivativeReduction base = reduce_derivative(1, 0, 0);
    REQUIRE(base.d == 0);
    REQUIRE(w_basis(0, 0, 2, Mode::EXACT) ==
            poly(3, {{{0, 0, 0}, Scalar::exact(1)}}));

    // iterated: d2 W_d^(k) / dx_j1 dx_j2 = d(d-1) W_{d-2}^{(k-j1-j2)}
    Polynomial w32 = w_basis(3, 2, 2, Mode::EXACT);
    REQUIRE(w32.derivative(0).derivative(1) ==
            w_basis(1, 1, 2, Mode::EXACT).scaled(Scalar::exact(6)));
}

TEST_CASE("gradient evaluates exact partial derivatives") {
    Superpotential w = build_combinatorial(single(1, 2, 1, Scalar::exact(1)));  // 2 x0 x1
    std::vector<Scalar> g = gradient(w, xvec({1, 3}));
    REQUIRE(g == std::vector<Scalar>{Scalar::exact(6), Scalar::exact(2)});

    Superpotential zero(2, Mode::EXACT);
    for (const Scalar& c : gradient(zero, xvec({4, -5}))) REQUIRE(c.is_zero());

    // W = x0^2 at (0, c): the x1-line is critical
    Superpotential sq = build_combinatorial(single(1, 2, 0, Scalar::exact(1)));
    for (long long c : {0ll, 3ll, -9ll}) {
        for (const Scalar& gc : gradient(sq, xvec({0, c}))) REQUIRE(gc.is_zero());
    }

    REQUIRE_THROWS_AS(gradient(w, xvec({1})), std::invalid_argument);
    std::vector<Scalar> fx{Scalar::floating(1), Scalar::floating(2)};
    REQUIRE_THROWS_AS(gradient(w, fx), ModeMismatchError);
}

TEST_CASE("hessian is the symmetric matrix of second partials") {
    Superpotential w = build_combinatorial(single(1, 2, 1, Scalar::exact(1)));  // 2 x0 x1
    HessianMatrix h = hessian(w, xvec({13, -8}));
    REQUIRE(h.at(0, 0).is_zero());
    REQUIRE(h.at(0, 1) == Scalar::exact(2));
    REQUIRE(h.at(1, 0) == Scalar::exact(2));
    REQUIRE(h.at(1, 1).is_zero());

    Superpotential sq = build_combinatorial(single(1, 2, 0, Scalar::exact(1)));  // x0^2
    HessianMatrix h2 = hessian(sq, xvec({0, 0}));
    REQUIRE(h2.at(0, 0) == Scalar::exact(2));
    REQUIRE(h2.at(1, 1).is_zero());

    HessianMatrix h3 = hessian(Superpotential(2, Mode::EXACT), xvec({1, 2}));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) REQUIRE(h3.at(i, j).is_zero());
}

TEST_CASE("mixed partials commute symbolically") {
    std::mt19937_64 rng(4321);
    for (int trial = 0; trial < 20; ++trial) {
        GeometricPotential p = random_normalized(rng, 3, 4);
        Superpotential w = build_combinatorial(p);
        for (int i = 0; i < w.nvars(); ++i)
            for (int j = 0; j < w.nvars(); ++j)
                REQUIRE(w.derivative(i).derivative(j) == w.derivative(j).derivative(i));
    }
}

TEST_CASE("quadratic hessian is x-independent and matches the coefficient form") {
    // For purely quadratic potentials H_ij = 2 t_2^(i+j).
    std::mt19937_64 rng(2222);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = std::uniform_int_distribution<int>(0, 4)(rng);
        GeometricPotential p(n, Mode::EXACT);
        for (int k = 0; k <= 2 * n; ++k) {
            int num = std::uniform_int_distribution<int>(-9, 9)(rng);
            if (num != 0) p.add_term(2, k, Scalar::exact(num));
        }
        Superpotential w = build_combinatorial(p);
        std::vector<Scalar> x0(static_cast<std::size_t>(n) + 1, Scalar::zero(Mode::EXACT));
        std::vector<Scalar> x1;
        for (int i = 0; i <= n; ++i)
            x1.push_back(Scalar::exact(std::uniform_int_distribution<int>(-5, 5)(rng)));
        HessianMatrix h0 = hessian(w, x0);
        REQUIRE(h0 == hessian(w, x1));
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j)
                REQUIRE(h0.at(i, j) == Scalar::exact(2) * p.coefficient(2, i + j));
    }
}

TEST_CASE("corank by exact elimination") {
    HessianMatrix full(2, 2, Mode::EXACT);
    full.set(0, 1, Scalar::exact(2));
    full.set(1, 0, Scalar::exact(2));
    REQUIRE(corank(full) == 0);

    HessianMatrix deficient(2, 2, Mode::EXACT);
    deficient.set(0, 0, Scalar::exact(2));
    REQUIRE(corank(deficient) == 1);

    HessianMatrix zero(3, 3, Mode::EXACT);
    REQUIRE(corank(zero) == 3);
}

TEST_CASE("float gradient agrees with central finite differences") {
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = std::uniform_int_distribution<int>(0, 3)(rng);
        GeometricPotential p(n, Mode::FLOAT);
        for (int t = 0; t < 3; ++t) {
            const int d = std::uniform_int_distribution<int>(1, 4)(rng);
            p.add_term(d, std::uniform_int_distribution<int>(0, d * n)(rng),
                       Scalar::floating(coeff(rng)));
        }
        Superpotential w = build_combinatorial(p);
        std::vector<Scalar> x;
        for (int i = 0; i <= n; ++i) x.push_back(Scalar::floating(coeff(rng) / 2.0, coeff(rng) / 2.0));
        std::vector<Scalar> g = gradient(w, x);
        const double h = 1e-5;
        for (int j = 0; j <= n; ++j) {
            auto xp = x, xm = x;
            xp[static_cast<std::size_t>(j)] = Scalar(xp[static_cast<std::size_t>(j)].complex_value() + h);
            xm[static_cast<std::size_t>(j)] = Scalar(xm[static_cast<std::size_t>(j)].complex_value() - h);
            Complex fd = (w.eval(xp).complex_value() - w.eval(xm).complex_value()) / (2.0 * h);
            Complex sym = g[static_cast<std::size_t>(j)].complex_value();
            REQUIRE(std::abs(fd - sym) <= 1e-6 * std::max(1.0, std::abs(sym)));
        }
    }
}
