#include "doctest.h"

#include <cmath>
#include <random>

#include "dgbo/multipliers.hpp"

using namespace dgbo;

namespace {
const PartitionConstants C{};

std::vector<long> random_tuple(size_t n, long R, std::mt19937_64& rng) {
    std::uniform_int_distribution<long> d(-R, R);
    std::vector<long> x;
    while (x.size() < n) {
        long v = d(rng);
        if (v) x.push_back(v);
    }
    return x;
}
}  // namespace

TEST_CASE("phi_k, nu and elongation") {
    long a[2] = {4, -9};
    CHECK(phi_k(a) == 1);
    long b[3] = {2, -2, 5};
    CHECK(phi_k(b) == 0);
    long c[3] = {5, 5, -5};
    CHECK(phi_k(c) == -1);
    long z[2] = {0, 3};
    CHECK_THROWS(phi_k(z));

    CHECK(nu({2, 2}) == 3);
    CHECK(nu({3, 2, 2}, {2}) == 6);

    auto s2 = DispersionSymbol::fractional(2.0);
    Symbol om = [s2](std::span<const long> x) { return cplx(big_omega(x, s2)); };
    auto e = elongate(om, 2, 2, 1);
    long t[3] = {1, 2, 3};
    long p[2] = {3, 3};
    CHECK(e(t) == om(p));
    CHECK(elongate(om, 2, 1, 2)(p) == om(p));
    Symbol ph = [](std::span<const long> x) { return cplx(phi_k(x)); };
    CHECK(elongate(ph, 2, 2, 2)(t) == cplx(1.0));
    CHECK_THROWS(elongate(om, 2, 2, 3));
    // X^2_1 X^2_1 = X^3_1
    auto ee = elongate(e, 3, 2, 1);
    long q[4] = {1, 2, 3, 4};
    long r[2] = {6, 4};
    CHECK(ee(q) == om(r));
}

TEST_CASE("mu: hand computed values") {
    auto s2 = DispersionSymbol::fractional(2.0);
    ExactMultipliers ex(s2, C);
    long t[3] = {1, 2, 3};
    auto v = ex.mu_component({2, 2}, {1}, t);
    CHECK(v.re == 0);
    CHECK(v.im == mpq_class(1, 54));
    CHECK(ex.mu_total({2}, std::span<const long>(t, 2)) == GaussQ(mpq_class(1)));
    CHECK_THROWS(ex.mu_component({2, 2}, {3}, t));
    CHECK_THROWS(ex.mu_component({2, 2}, {1}, std::span<const long>(t, 2)));

    // parent tuple with Omega = 0 contributes nothing
    long res[3] = {2, 3, -3};  // j = 2 parent (2, 0) has a zero; j = 1 parent (5,-3)
    auto w = ex.mu_component({2, 2}, {2}, res);
    CHECK(w.is_zero());

    auto B = ex.term_symbol(TermSpec{TermKind::B, {2}, {}}, std::span<const long>(t, 2));
    CHECK(B.re == 0);
    CHECK(B.im == mpq_class(1, 6));

    Multipliers fl(s2, C);
    CHECK(to_cplx(fl.term_symbol(TermSpec{TermKind::B, {2}, {}}, std::span<const long>(t, 2))).imag() ==
          doctest::Approx(1.0 / 6.0));
    CHECK_THROWS(fl.term_symbol(TermSpec{TermKind::B, {2}, {}}, t));
}

TEST_CASE("mu_{2,2} two-term form") {
    for (double a : {1.5, 2.0}) {
        auto sym = DispersionSymbol::fractional(a);
        Multipliers m(sym, C);
        for (long x = -7; x <= 7; ++x)
            for (long y = -7; y <= 7; ++y)
                for (long z = -7; z <= 7; ++z) {
                    if (!x || !y || !z) continue;
                    long t[3] = {x, y, z};
                    cplx want = 0;
                    long p1[2] = {x + y, z}, p2[2] = {x, y + z};
                    if (x + y != 0 && big_omega(p1, sym) != 0.0) want += cplx(0, x + y) / big_omega(p1, sym);
                    if (y + z != 0 && big_omega(p2, sym) != 0.0) want += cplx(0, y + z) / big_omega(p2, sym);
                    CHECK(std::abs(to_cplx(m.mu_total({2, 2}, t)) - want) <= 1e-13 * (1 + std::abs(want)));
                }
    }
}

TEST_CASE("exact and floating paths agree") {
    auto s2 = DispersionSymbol::fractional(2.0);
    ExactMultipliers ex(s2, C);
    Multipliers fl(s2, C);
    std::mt19937_64 rng(4);
    const std::vector<TermSpec> specs = {
        {TermKind::B, {2, 2}, {}},  {TermKind::R1, {2, 2}, {}}, {TermKind::R2, {2, 2}, {}},
        {TermKind::N, {2, 2}, {}},  {TermKind::D, {2, 2, 2}, {}}, {TermKind::B, {3, 2}, {}},
        {TermKind::FrakB, {2, 2, 2}, {2}}, {TermKind::FrakR, {2, 2, 2}, {2}}};
    for (const auto& s : specs)
        for (int t = 0; t < 150; ++t) {
            auto x = random_tuple(size_t(s.nu()), 12, rng);
            cplx e = to_cplx(ex.term_symbol(s, x)), f = to_cplx(fl.term_symbol(s, x));
            CHECK(std::abs(e - f) <= 1e-10 * std::max(1e-300, std::abs(e)) + 1e-300);
        }
}

TEST_CASE("parity of term symbols under xi -> -xi") {
    // each recursion level is i * (odd)/(odd), so w(-x) = (-1)^{n+m+1} conj(w(x))
    std::mt19937_64 rng(8);
    Multipliers fl(DispersionSymbol::fractional(1.5), C);
    const std::vector<TermSpec> specs = {{TermKind::B, {2}, {}},       {TermKind::B, {2, 2}, {}},
                                         {TermKind::R2, {2, 2}, {}},   {TermKind::N, {2, 3}, {}},
                                         {TermKind::D, {2, 2, 2}, {}}, {TermKind::FrakB, {2, 2}, {2}}};
    for (const auto& s : specs) {
        int n = int(s.k.size()) - 1 + int(s.l.size());
        double sign = (n + 1) % 2 == 0 ? 1.0 : -1.0;
        for (int t = 0; t < 200; ++t) {
            auto x = random_tuple(size_t(s.nu()), 15, rng);
            auto y = x;
            for (auto& e : y) e = -e;
            cplx a = to_cplx(fl.term_symbol(s, x)), b = to_cplx(fl.term_symbol(s, y));
            CHECK(std::abs(b - sign * std::conj(a)) <= 1e-12 * (1 + std::abs(a)));
        }
    }
}

TEST_CASE("R1 symbols") {
    auto s2 = DispersionSymbol::fractional(2.0);
    Multipliers fl(s2, C);
    std::mt19937_64 rng(12);
    // level zero R1 vanishes identically: 2-tuples are never in R1
    for (int t = 0; t < 100; ++t) {
        auto x = random_tuple(2, 30, rng);
        CHECK(to_cplx(fl.term_symbol(TermSpec{TermKind::R1, {2}, {}}, x)) == cplx(0));
    }
    for (double a : {1.5, 2.0}) {
        Multipliers m(DispersionSymbol::fractional(a), C);
        for (long xi = 1; xi <= 40; ++xi) {
            long t[3] = {xi, xi, -xi};
            // derived directly: only j=1 survives, parent (2xi,-xi), Omega_2 = -2(2^a-1) omega(xi)
            cplx want(0, -double(xi * xi) / ((std::pow(2.0, a) - 1) * std::pow(double(xi), a + 1)));
            CHECK(std::abs(to_cplx(m.r1_symmetrized({2, 2}, t)) - want) <= 1e-13 * std::abs(want));
            long u[3] = {-xi, xi, xi};
            long v[3] = {xi, -xi, xi};
            // summed over the three placements the diagonal coefficient doubles
            cplx tot = to_cplx(m.r1_symmetrized({2, 2}, t)) + to_cplx(m.r1_symmetrized({2, 2}, u)) +
                       to_cplx(m.r1_symmetrized({2, 2}, v));
            CHECK(std::abs(tot - 2.0 * want) <= 1e-13 * std::abs(want));
        }
        // support inside R1, and the |x1*|^{1-a} bound on a box. The bound needs the
        // S_3 average: at (-N,-1,1) a single ordering is O(1), its reorderings cancel it
        long odd[3] = {-30, -1, 1};
        CHECK(std::abs(to_cplx(m.r1_symmetrized({2, 2}, odd))) > 0.3);
        double worst = 0;
        for (long x = -25; x <= 25; ++x)
            for (long y = -25; y <= 25; ++y)
                for (long z = -25; z <= 25; ++z) {
                    if (x != x + y + z && y != x + y + z && z != x + y + z) continue;
                    if (!x || !y || !z) continue;
                    long t[3] = {x, y, z};
                    cplx v = to_cplx(m.r1_symmetric_part({2, 2}, t));
                    if (v == cplx(0)) continue;
                    double top = std::max({std::labs(x), std::labs(y), std::labs(z)});
                    worst = std::max(worst, std::abs(v) / std::pow(top, 1 - a));
                }
        CHECK(worst < 0.5);
        for (long x = -9; x <= 9; ++x)
            for (long y = -9; y <= 9; ++y)
                for (long z = -9; z <= 9; ++z) {
                    if (!x || !y || !z) continue;
                    long t[3] = {x, y, z};
                    if (m.region(t) != Region::R1) CHECK(to_cplx(m.r1_symmetrized({2, 2}, t)) == cplx(0));
                }
    }
}

TEST_CASE("mfrak base case and D2 restriction") {
    Multipliers fl(DispersionSymbol::fractional(2.0), C);
    std::mt19937_64 rng(21);
    for (int t = 0; t < 100; ++t) {
        auto x = random_tuple(4, 20, rng);
        CHECK(to_cplx(fl.mfrak({2, 2, 2}, {}, x)) == to_cplx(fl.mu_total({2, 2, 2}, x)));
    }
    // l-level parents are 4-tuples; a tuple whose every contraction leaves D2 gives 0
    long x[5] = {40, 1, 1, 1, 1};
    CHECK(to_cplx(fl.mfrak({2, 2, 2}, {2}, x)) == cplx(0));
}
