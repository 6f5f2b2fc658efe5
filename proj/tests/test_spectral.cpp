#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "dgbo/spectral.hpp"

using namespace dgbo;

namespace {
SpectralField random_field(int M, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    SpectralField f(M);
    for (int k = 1; k <= M; ++k) f.pos(k) = cplx(n(rng), n(rng)) / (1.0 + k);
    return f;
}
}  // namespace

TEST_CASE("symbol values") {
    auto s2 = DispersionSymbol::fractional(2.0);
    CHECK(s2(2) == 8.0);
    CHECK(s2(-2) == -8.0);
    CHECK(s2.exact(-7) == -343);
    CHECK(s2(0) == 0.0);
    auto s15 = DispersionSymbol::fractional(1.5);
    CHECK(s15(4) == doctest::Approx(32.0).epsilon(1e-14));
    auto q = DispersionSymbol::quintic();
    CHECK(q.exact(3) == 243);
    CHECK(q.integer_valued());
    CHECK_FALSE(s15.integer_valued());
    CHECK_THROWS(DispersionSymbol::fractional(2.5));
    CHECK_THROWS(DispersionSymbol::fractional(1.0));
    for (long x = 1; x < 50; ++x) CHECK(s15(-x) == -s15(x));
}

TEST_CASE("hs norm") {
    SpectralField f(4);
    f.pos(1) = 1.0;
    // a stored positive mode carries its conjugate twin
    CHECK(hs_norm(f, 0.0) == doctest::Approx(std::sqrt(2.0)));
    SpectralField g(4);
    g.pos(2) = 1.0;
    CHECK(hs_norm(g, 1.0) == doctest::Approx(std::sqrt(8.0)));
    CHECK(hs_norm(SpectralField(5), 3.0) == 0.0);

    std::mt19937_64 rng(3);
    auto r = random_field(16, rng);
    double prev = 0.0;
    for (double s = 0.0; s < 3.0; s += 0.25) {
        double v = hs_norm(r, s);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("free evolution") {
    auto sym = DispersionSymbol::fractional(2.0);
    SpectralField f(3);
    f.pos(1) = 1.0;
    auto g = free_evolve(f, sym, std::numbers::pi);
    CHECK(g.pos(1).real() == doctest::Approx(-1.0));
    CHECK(std::abs(g.pos(1).imag()) < 1e-14);

    std::mt19937_64 rng(7);
    auto r = random_field(32, rng);
    auto s15 = DispersionSymbol::fractional(1.5);
    auto e = free_evolve(r, s15, 0.37);
    for (double s : {0.0, 1.0, 2.5}) CHECK(hs_norm(e, s) == doctest::Approx(hs_norm(r, s)).epsilon(1e-13));
    auto back = free_evolve(e, s15, -0.37);
    for (int k = 1; k <= 32; ++k) CHECK(std::abs(back.pos(k) - r.pos(k)) <= 1e-12 * std::abs(r.pos(k)));
    auto id = free_evolve(r, s15, 0.0);
    for (int k = 1; k <= 32; ++k) CHECK(id.pos(k) == r.pos(k));
}

TEST_CASE("multipliers and projection") {
    SpectralField f(4);
    f.pos(3) = 1.0;
    auto d = apply_multiplier(f, [](long xi) { return cplx(std::pow(std::abs(double(xi)), 2.0)); });
    CHECK(d.pos(3) == cplx(9.0));

    // u = sin x has uhat(1) = -i/2; the derivative must be cos x, uhat(1) = 1/2
    SpectralField s(2);
    s.pos(1) = cplx(0.0, -0.5);
    auto ds = apply_multiplier(s, [](long xi) { return cplx(0.0, double(xi)); });
    Transform tr(16);
    auto u = tr.to_physical(ds);
    for (int j = 0; j < 16; ++j) CHECK(u[j] == doctest::Approx(std::cos(2 * std::numbers::pi * j / 16)));

    CHECK_THROWS_AS(apply_multiplier(s, [](long) { return cplx(0.0, 1.0); }), RealityError);

    SpectralField m(2);
    m.mean = 5.0;
    auto p = project_mean_zero(m);
    CHECK(p.mean == 0.0);
    CHECK(hs_norm(p, 0) == 0.0);
    std::mt19937_64 rng(1);
    auto r = random_field(8, rng);
    r.mean = 2.0;
    auto p1 = project_mean_zero(r), p2 = project_mean_zero(p1);
    CHECK(p2.mean == 0.0);
    CHECK(p2.data() == p1.data());
}

TEST_CASE("transform round trip") {
    std::mt19937_64 rng(11);
    auto r = random_field(40, rng);
    Grid g{40, 2.0 / 3.0};
    Transform tr(g.samples(2));
    auto u = tr.to_physical(r);
    auto back = tr.to_spectral(u, 40);
    for (int k = 1; k <= 40; ++k) CHECK(std::abs(back.pos(k) - r.pos(k)) <= 1e-12 * std::abs(r.pos(k)) + 1e-15);
    CHECK(std::abs(back.mean) < 1e-14);

    // sample count must cover (d+1)M+1 and the padding fraction
    for (int d = 2; d <= 5; ++d) CHECK(g.samples(d) >= (d + 1) * 40 + 1);
    CHECK(g.samples(2) % 2 == 0);
}
