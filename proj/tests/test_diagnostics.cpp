#include <doctest.h>

#include <cmath>
#include <random>

#include "dgbo/diagnostics.hpp"

using namespace dgbo;

namespace {
SpectralField random_field(int M, int support, double amp, double decay, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ph(0, 2 * M_PI);
    SpectralField g(M);
    for (int k = 1; k <= support; ++k) g.pos(k) = std::polar(amp * std::exp(-decay * k), ph(rng));
    return g;
}

double max_diff(const SpectralField& a, const SpectralField& b) {
    int M = std::max(a.modes(), b.modes());
    auto A = a.resized(M), B = b.resized(M);
    double m = 0;
    for (int k = 1; k <= M; ++k) m = std::max(m, std::abs(A.pos(k) - B.pos(k)));
    return m;
}

// F[dx (S(t)g)^2] by direct convolution of the evolved coefficients
std::vector<cplx> quadratic_rhs(const SpectralField& g, const DispersionSymbol& sym, double t) {
    const int M = g.modes();
    std::vector<cplx> w(2 * M + 1);
    for (int k = 1; k <= M; ++k) {
        w[M + k] = g.pos(k) * std::polar(1.0, t * sym(k));
        w[M - k] = std::conj(w[M + k]);
    }
    std::vector<cplx> out(2 * M + 1);
    for (int a = -M; a <= M; ++a)
        for (int b = -M; b <= M; ++b)
            if (a + b > 0) out[a + b] += cplx(0, a + b) * w[M + a] * w[M + b];
    return out;
}
}  // namespace

TEST_CASE("log-log slope of an exact power law") {
    std::vector<double> x{1, 2, 4, 8, 16}, y;
    for (double v : x) y.push_back(3.0 * std::pow(v, -1.7));
    CHECK(loglog_slope(x, y) == doctest::Approx(-1.7).epsilon(1e-12));
    CHECK_THROWS(loglog_slope({1}, {1}));
    CHECK_THROWS(loglog_slope({1, 2}, {1, -1}));
}

TEST_CASE("quadratic Duhamel term: trivial cases and single mode") {
    auto sym = DispersionSymbol::fractional(1.5);
    auto g = random_field(6, 5, 1.0, 0.2, 3);
    auto d0 = duhamel_quadratic(g, sym, 0.0);
    CHECK(d0.modes() == 12);
    CHECK(hs_norm(d0, 0) == 0.0);

    SpectralField one(4);
    const cplx c(0.3, -0.4);
    one.pos(3) = c;
    const double t = 0.7;
    auto d = duhamel_quadratic(one, sym, t);
    for (int k = 1; k <= d.modes(); ++k)
        if (k != 6) CHECK(d.pos(k) == cplx{});
    const double w = sym(3), Om = sym(6) - 2 * w;
    const cplx expect = 6.0 * c * c * std::polar(1.0, 2 * w * t) *
                        (std::polar(1.0, Om * t) - 1.0) / Om;
    CHECK(std::abs(d.pos(6) - expect) < 1e-14);
}

TEST_CASE("quadratic Duhamel term matches trapezoid quadrature") {
    for (double alpha : {1.5, 2.0}) {
        auto sym = DispersionSymbol::fractional(alpha);
        auto g = random_field(5, 5, 1.0, 0.1, 11);
        const double t = 0.3;
        const int steps = 300000;
        const double h = t / steps;
        std::vector<cplx> acc(11);
        for (int i = 0; i <= steps; ++i) {
            const double tp = i * h, wgt = (i == 0 || i == steps) ? 0.5 : 1.0;
            auto r = quadratic_rhs(g, sym, tp);
            for (int xi = 1; xi <= 10; ++xi)
                acc[xi] += wgt * h * std::polar(1.0, (t - tp) * sym(xi)) * r[xi];
        }
        auto d = duhamel_quadratic(g, sym, t);
        double err = 0, scale = 0;
        for (int xi = 1; xi <= 10; ++xi) {
            err = std::max(err, std::abs(acc[xi] - d.pos(xi)));
            scale = std::max(scale, std::abs(d.pos(xi)));
        }
        CHECK(err < 1e-8 * std::max(1.0, scale));
    }
}

TEST_CASE("quadratic Duhamel term: homogeneity and group property") {
    auto sym = DispersionSymbol::fractional(1.75);
    for (unsigned seed = 1; seed <= 5; ++seed) {
        auto g = random_field(7, 7, 1.0, 0.3, seed);
        const double t = 0.4, tau = 0.25;
        // quadratic: D(2g) = 4 D(g)
        SpectralField g2 = g;
        for (auto& c : g2.data()) c *= 2.0;
        auto a = duhamel_quadratic(g2, sym, t);
        auto b = duhamel_quadratic(g, sym, t);
        for (auto& c : b.data()) c *= 4.0;
        CHECK(max_diff(a, b) < 1e-12);
        // D(g, t + tau) = S(t) D(g, tau) + D(S(tau) g, t)
        auto lhs = duhamel_quadratic(g, sym, t + tau);
        auto r1 = free_evolve(duhamel_quadratic(g, sym, tau), sym, t);
        auto r2 = duhamel_quadratic(free_evolve(g, sym, tau), sym, t);
        for (int k = 1; k <= r1.modes(); ++k) r1.pos(k) += r2.pos(k);
        CHECK(max_diff(lhs, r1) < 1e-12);
    }
}

TEST_CASE("counterexample growth exponents") {
    std::vector<long> Ns;
    for (int p = 4; p <= 14; ++p) Ns.push_back(1L << p);
    auto sym = DispersionSymbol::fractional(1.5);
    auto rep = counterexample_scan(Ns, 1.0, 0.8, sym);
    CHECK(rep.expected == doctest::Approx(0.3));
    CHECK(std::abs(rep.slope - 0.3) < 0.05);
    for (auto& r : rep.rows) {
        CHECK(r.g_norm > 1.0);
        CHECK(r.g_norm < 2.0);
    }
    auto ctrl = counterexample_scan(Ns, 1.0, 0.5, sym);
    CHECK(ctrl.slope <= 0.05);
    // stable when the N range doubles (in log scale)
    std::vector<long> half(Ns.begin(), Ns.begin() + 6);
    auto short_fit = counterexample_scan(half, 1.0, 0.8, sym);
    CHECK(std::abs(short_fit.slope - rep.slope) < 0.05);

    auto border = counterexample_scan(Ns, 1.0, 1.0, DispersionSymbol::fractional(2.0));
    CHECK(std::abs(border.slope) < 0.05);
    CHECK(rep.csv().rfind("N,t_N,norm,g_norm\n", 0) == 0);
    CHECK_THROWS(counterexample_scan({2}, 1.0, 0.8, sym));
}

namespace {
SimConfig small_config(double alpha, std::vector<double> coeffs, double dt, int stride) {
    SimConfig c;
    c.grid.num_modes = 16;
    c.sym = DispersionSymbol::fractional(alpha);
    c.poly.coeffs = std::move(coeffs);
    c.dt = dt;
    c.t_end = 0.1;
    c.snapshot_stride = stride;
    return c;
}
}  // namespace

TEST_CASE("smoothing table trivial cases") {
    auto g = random_field(16, 16, 0.5, 0.5, 5);
    auto lin = integrate(small_config(1.5, {0, 0}, 1e-3, 20), g);
    auto tab = smoothing_table(lin, g, 1.0, {0.0, 0.4});
    CHECK(tab.rows.size() == lin.states.size() * 2);
    for (auto& r : tab.rows) CHECK(r.diff_norm < 1e-10);
    CHECK(tab.rows[0].free_norm == doctest::Approx(hs_norm(g, 1.0)));

    auto nl = integrate(small_config(1.5, {0, 1}, 1e-3, 20), g);
    auto t2 = smoothing_table(nl, g, 1.0, {0.4});
    CHECK(t2.rows.front().diff_norm == 0.0);
    CHECK(t2.rows.back().diff_norm > 1e-4);
    // an ungauged run is gauged first; for P = x^2 the shift is zero
    auto cfg = small_config(1.5, {0, 1}, 1e-3, 20);
    cfg.gauged = false;
    auto t3 = smoothing_table(integrate(cfg, g), g, 1.0, {0.4});
    CHECK(t3.rows.back().diff_norm == doctest::Approx(t2.rows.back().diff_norm).epsilon(1e-9));
    CHECK(t2.csv().rfind("t,a,diff_norm,free_norm\n", 0) == 0);
}

TEST_CASE("normal-form residual: linear flow") {
    auto g = random_field(16, 16, 0.5, 0.5, 9);
    auto tr = integrate(small_config(2.0, {0, 0}, 1e-3, 10), g);
    NormalFormOptions o;
    auto rep = normal_form_residual(tr, o);
    for (size_t i = 0; i < rep.times.size(); ++i) {
        CHECK(rep.lhs_norm[i] < 1e-12);
        CHECK(rep.abs_residual[i] < 1e-13);
    }
}

TEST_CASE("normal-form residual: d = 2, depth 1") {
    auto g = random_field(16, 16, 0.5, 0.5, 7);
    for (double alpha : {2.0, 1.5}) {
        std::vector<double> res;
        for (double dt : {5e-4, 2.5e-4}) {
            auto tr = integrate(small_config(alpha, {0, 1}, dt, 5), g);
            NormalFormOptions o;
            auto rep = normal_form_residual(tr, o);
            res.push_back(rep.max_rel_residual);
            for (auto& tm : rep.terms) {
                if (tm.kind == TermKind::R1 && tm.n == 0) {
                    CHECK(tm.tuples == 0);
                    for (double v : tm.norms) CHECK(v == 0.0);
                }
            }
        }
        CHECK(res[1] < 1e-4);
        CHECK(res[0] / res[1] >= 4.0);
    }
}

TEST_CASE("normal-form residual: depth 0 is the Duhamel formula") {
    auto g = random_field(16, 16, 0.5, 0.5, 7);
    auto tr = integrate(small_config(2.0, {0, 1}, 2.5e-4, 5), g);
    NormalFormOptions o;
    o.depth_N = 0;
    auto rep = normal_form_residual(tr, o);
    CHECK(rep.max_rel_residual < 1e-4);
    CHECK(rep.lhs_norm.back() > 1e-2);
}

TEST_CASE("normal-form residual: depth 2 with the D-term expansion") {
    // relaxed partition so that D2 is populated in a small box
    SimConfig base;
    base.grid.num_modes = 5;
    base.sym = DispersionSymbol::fractional(2.0);
    base.poly.coeffs = {0, 1};
    base.t_end = 0.1;
    base.snapshot_stride = 5;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ph(0, 2 * M_PI);
    SpectralField g(5);
    for (int k = 1; k <= 5; ++k) g.pos(k) = std::polar(std::exp(-0.3 * k), ph(rng));
    NormalFormOptions o;
    o.depth_N = 2;
    o.depth_M = 2;
    o.constants.d1 = 0.5;
    o.constants.check = false;
    std::vector<double> res;
    bool frak_seen = false;
    for (double dt : {5e-4, 2.5e-4}) {
        base.dt = dt;
        auto rep = normal_form_residual(integrate(base, g), o);
        res.push_back(rep.max_rel_residual);
        for (auto& tm : rep.terms)
            if (tm.kind == TermKind::FrakB && tm.m == 1 && tm.tuples > 0) frak_seen = true;
    }
    CHECK(frak_seen);
    CHECK(res[1] < 1e-6);
    CHECK(res[0] / res[1] >= 4.0);
}

TEST_CASE("normal-form residual: quadrature preconditions") {
    auto g = random_field(16, 16, 0.5, 0.5, 7);
    auto cfg = small_config(2.0, {0, 1}, 1e-3, 25);  // four intervals
    auto tr = integrate(cfg, g);
    NormalFormOptions o;
    CHECK_NOTHROW(normal_form_residual(tr, o));
    tr.states.pop_back();
    tr.times.pop_back();  // three intervals
    CHECK_THROWS_AS(normal_form_residual(tr, o), QuadratureError);
    cfg.snapshot_stride = 100;  // a single interval
    CHECK_THROWS_AS(normal_form_residual(integrate(cfg, g), o), QuadratureError);
    o.depth_N = -1;
    CHECK_THROWS_AS(normal_form_residual(integrate(small_config(2.0, {0, 1}, 1e-3, 25), g), o),
                    std::invalid_argument);
}
