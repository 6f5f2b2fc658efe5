#include "dgbo/diagnostics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

namespace dgbo {

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("need two or more points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0) || !(y[i] > 0)) throw std::invalid_argument("log-log fit needs positive data");
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double den = n * sxx - sx * sx;
    if (den == 0) throw std::invalid_argument("degenerate abscissae");
    return (n * sxy - sx * sy) / den;
}

namespace {
std::string fmt(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(17) << v;
    return os.str();
}

// slope of log|f(xi)| over xi in (M/2, M], skipping empty modes
double tail_slope(const SpectralField& f) {
    std::vector<double> x, y;
    const int M = f.modes();
    for (int xi = M / 2 + 1; xi <= M; ++xi) {
        double a = std::abs(f.pos(xi));
        if (a > 0) {
            x.push_back(xi);
            y.push_back(a);
        }
    }
    if (x.size() < 2) return 0.0;
    return loglog_slope(x, y);
}
}  // namespace

// ---------------------------------------------------------------------------

std::string SmoothingTable::csv() const {
    std::ostringstream os;
    os << "t,a,diff_norm,free_norm\n";
    for (auto& r : rows)
        os << fmt(r.t) << ',' << fmt(r.a) << ',' << fmt(r.diff_norm) << ',' << fmt(r.free_norm)
           << '\n';
    return os.str();
}

SmoothingTable smoothing_table(const Trajectory& traj, const SpectralField& g, double s,
                               const std::vector<double>& a_grid) {
    const Trajectory& tr =
        traj.config.gauged ? traj : gauge_transform(traj, GaugeDirection::forward);
    SmoothingTable out;
    out.s = s;
    const int M = traj.config.grid.num_modes;
    const SpectralField g0 = g.resized(M);
    SpectralField last_diff(M);
    for (size_t i = 0; i < tr.states.size(); ++i) {
        const double t = tr.times[i];
        SpectralField lin = free_evolve(g0, traj.config.sym, t);
        SpectralField d = tr.states[i].resized(M);
        for (int xi = 1; xi <= M; ++xi) d.pos(xi) -= lin.pos(xi);
        for (double a : a_grid)
            out.rows.push_back({t, a, hs_norm(d, s + a), hs_norm(lin, s + a)});
        last_diff = d;
    }
    out.tail_slope_diff = tail_slope(last_diff);
    out.tail_slope_data = tail_slope(g0);
    out.observed_gain = out.tail_slope_data - out.tail_slope_diff;
    return out;
}

// ---------------------------------------------------------------------------

SpectralField duhamel_quadratic(const SpectralField& g, const DispersionSymbol& sym, double t) {
    const int M = g.modes();
    std::vector<std::pair<long, cplx>> supp;
    for (int xi = 1; xi <= M; ++xi) {
        cplx c = g.pos(xi);
        if (c != cplx{}) {
            supp.push_back({xi, c});
            supp.push_back({-xi, std::conj(c)});
        }
    }
    SpectralField out(2 * M);
    for (auto& [x1, g1] : supp)
        for (auto& [x2, g2] : supp) {
            const long xi = x1 + x2;
            if (xi <= 0) continue;
            const double w1 = sym(x1), w2 = sym(x2);
            const double Om = sym(xi) - w1 - w2;
            // (e^{i Om t} - 1)/Om = i t sinc(Om t/2) e^{i Om t/2}
            const double h = 0.5 * Om * t;
            const double sinc = h == 0 ? 1.0 : std::sin(h) / h;
            const cplx f = cplx(0, t) * sinc * std::polar(1.0, (w1 + w2) * t + h);
            out.pos(xi) += static_cast<double>(xi) * g1 * g2 * f;
        }
    return out;
}

std::string CounterexampleReport::csv() const {
    std::ostringstream os;
    os << "N,t_N,norm,g_norm\n";
    for (auto& r : rows)
        os << r.N << ',' << fmt(r.t_N) << ',' << fmt(r.norm) << ',' << fmt(r.g_norm) << '\n';
    return os.str();
}

CounterexampleReport counterexample_scan(const std::vector<long>& N_list, double s, double a,
                                         const DispersionSymbol& sym) {
    CounterexampleReport rep;
    rep.s = s;
    rep.a = a;
    rep.alpha = sym.kind == SymbolKind::fractional ? sym.alpha : 4.0;
    rep.expected = a + 1.0 - rep.alpha;
    std::vector<double> xs, ys;
    for (long N : N_list) {
        if (N < 3) throw std::invalid_argument("counterexample needs N >= 3");
        SpectralField g(static_cast<int>(N - 1));
        g.pos(N - 1) = std::pow(static_cast<double>(N), -s);
        g.pos(1) = 1.0;
        const long pair[2] = {N - 1, 1};
        const double Om = big_omega(pair, sym);
        const double tN = std::numbers::pi / Om;
        SpectralField d = duhamel_quadratic(g, sym, tN);
        CounterexampleRow r{N, tN, hs_norm(d, s + a), hs_norm(g, s)};
        rep.rows.push_back(r);
        xs.push_back(static_cast<double>(N));
        ys.push_back(r.norm);
    }
    if (xs.size() >= 2) rep.slope = loglog_slope(xs, ys);
    return rep;
}

// ---------------------------------------------------------------------------
// normal-form residual

namespace {

// m_k(theta) = int_{-1}^{1} s^k e^{-i theta s} ds, k = 0, 1, 2
std::array<cplx, 3> filon_moments(double th) {
    if (std::abs(th) < 1.0) {
        // series in theta; terms fall off like theta^{2j}/(2j)!
        double c0 = 0, c1 = 0, c2 = 0;
        double p = 1.0;  // theta^{2j} / (2j)!
        for (int j = 0; j < 12; ++j) {
            const double sgn = (j % 2) ? -1.0 : 1.0;
            c0 += sgn * p * 2.0 / (2 * j + 1);
            c2 += sgn * p * 2.0 / (2 * j + 3);
            // theta^{2j+1}/(2j+1)! = p * theta / (2j+1)
            c1 += sgn * p * th / (2 * j + 1) * 2.0 / (2 * j + 3);
            p *= th * th / ((2.0 * j + 1) * (2.0 * j + 2));
        }
        return {cplx(c0, 0), cplx(0, -c1), cplx(c2, 0)};
    }
    const double s = std::sin(th), c = std::cos(th);
    return {cplx(2 * s / th, 0), cplx(0, -2 * (s - th * c) / (th * th)),
            cplx(2 * ((th * th - 2) * s + 2 * th * c) / (th * th * th), 0)};
}

struct Tuple {
    std::vector<long> xs;
    long xi;
    cplx w;
    double Om;
};

struct TermGroup {
    NormalFormTerm info;
    bool boundary = false;
    // Tuples no boundary/recursion step picks up: an expanded D symbol that left
    // the D region, or a resonant tuple where integration by parts is skipped.
    // Empty under the checked default constants except for the first kind.
    bool rest = false;
    bool intermediate = false;  // a further level exists
    int nu = 0;
    std::vector<std::pair<TermSpec, cplx>> specs;
    std::vector<Tuple> tuples;
};

Region region_for(TermKind k) {
    switch (k) {
        case TermKind::R1: return Region::R1;
        case TermKind::R2: return Region::R2;
        case TermKind::N:
        case TermKind::B: return Region::N;
        case TermKind::FrakR: return Region::D1;
        case TermKind::FrakB:
        case TermKind::FrakN: return Region::D2;
        case TermKind::D: return Region::D1;  // D1 and D2, handled below
    }
    return Region::N;
}

// all sequences over `alphabet` of length len
std::vector<std::vector<int>> sequences(const std::vector<int>& alphabet, int len) {
    std::vector<std::vector<int>> out{{}};
    for (int i = 0; i < len; ++i) {
        std::vector<std::vector<int>> next;
        for (auto& s : out)
            for (int a : alphabet) {
                auto t = s;
                t.push_back(a);
                next.push_back(std::move(t));
            }
        out = std::move(next);
    }
    return out;
}

template <class F>
void parallel_for(size_t n, int threads, F&& f) {
    threads = std::max(1, std::min<int>(threads, static_cast<int>(n)));
    if (threads == 1) {
        for (size_t i = 0; i < n; ++i) f(i, 0);
        return;
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            for (size_t i = static_cast<size_t>(w); i < n; i += static_cast<size_t>(threads)) f(i, w);
        });
    for (auto& th : pool) th.join();
}

// Tuples of length nu with entries in [-M, M] \ 0 and sum in [1, M]; for each,
// the combined symbol of the group's specs.
void fill_group(TermGroup& grp, const Multipliers& eng, long M, int threads) {
    std::vector<long> firsts;
    for (long x = -M; x <= M; ++x)
        if (x != 0) firsts.push_back(x);
    std::vector<std::vector<Tuple>> part(firsts.size());
    const int nu = grp.nu;
    parallel_for(firsts.size(), threads, [&](size_t idx, int) {
        std::vector<long> xs(static_cast<size_t>(nu), 0);
        xs[0] = firsts[idx];
        auto& out = part[idx];
        // odometer over entries 2..nu-1; last entry fixed by the target sum
        std::vector<long> mid(static_cast<size_t>(std::max(0, nu - 2)), -M);
        while (true) {
            bool ok = true;
            long partial = xs[0];
            for (size_t i = 0; i < mid.size(); ++i) {
                if (mid[i] == 0) ok = false;
                xs[i + 1] = mid[i];
                partial += mid[i];
            }
            if (ok) {
                for (long xi = 1; xi <= M; ++xi) {
                    const long last = xi - partial;
                    if (last == 0 || last < -M || last > M) continue;
                    xs[static_cast<size_t>(nu - 1)] = last;
                    const Region reg = eng.region(xs);
                    const TermKind k = grp.info.kind;
                    const bool in_d = reg == Region::D1 || reg == Region::D2;
                    bool match;
                    if (grp.rest) {
                        const bool frak = k == TermKind::FrakN;
                        const Region parts = frak ? Region::D2 : Region::N;
                        const bool lost = grp.intermediate && reg == parts &&
                                          is_resonant(big_omega(xs, eng.symbol()), eng.constants());
                        match = lost || (frak && grp.info.m > 0 && !in_d);
                    } else {
                        match = k == TermKind::D ? in_d : reg == region_for(k);
                    }
                    if (!match) continue;
                    cplx w{};
                    for (auto& [spec, coef] : grp.specs)
                        w += coef * (grp.rest ? static_cast<double>(xi) *
                                                    to_cplx(k == TermKind::FrakN
                                                                ? eng.mfrak(spec.k, spec.l, xs)
                                                                : eng.mu_total(spec.k, xs))
                                              : to_cplx(eng.term_symbol(spec, xs)));
                    if (w == cplx{}) continue;
                    out.push_back({xs, xi, w, big_omega(xs, eng.symbol())});
                }
            }
            size_t i = 0;
            while (i < mid.size() && ++mid[i] > M) mid[i++] = -M;
            if (i == mid.size()) break;
        }
    });
    for (auto& p : part)
        for (auto& t : p) grp.tuples.push_back(std::move(t));
    grp.info.tuples = grp.tuples.size();
}

}  // namespace

std::string NormalFormReport::csv() const {
    std::ostringstream os;
    os << "t,lhs_norm,abs_residual,rel_residual";
    for (auto& tm : terms) os << ',' << tm.label;
    os << '\n';
    for (size_t i = 0; i < times.size(); ++i) {
        os << fmt(times[i]) << ',' << fmt(lhs_norm[i]) << ',' << fmt(abs_residual[i]) << ','
           << fmt(rel_residual[i]);
        for (auto& tm : terms) os << ',' << fmt(tm.norms[i]);
        os << '\n';
    }
    return os.str();
}

NormalFormReport normal_form_residual(const Trajectory& traj_in, const NormalFormOptions& opt) {
    if (opt.depth_N < 0 || opt.depth_M < 0) throw std::invalid_argument("negative depth");
    const Trajectory& traj =
        traj_in.config.gauged ? traj_in : gauge_transform(traj_in, GaugeDirection::forward);
    const size_t S = traj.states.size();
    if (S < 3 || (S - 1) % 2 != 0)
        throw QuadratureError("normal-form quadrature needs an even number (>= 2) of snapshot intervals");
    const double h = traj.times[1] - traj.times[0];
    if (!(h > 0)) throw QuadratureError("snapshot times must increase");
    for (size_t i = 1; i < S; ++i)
        if (std::abs((traj.times[i] - traj.times[i - 1]) - h) > 1e-9 * std::max(1.0, h))
            throw QuadratureError("snapshots must be uniformly spaced");

    const auto& cfg = traj.config;
    const long M = cfg.grid.num_modes;
    const DispersionSymbol& sym = cfg.sym;
    const cplx I(0, 1);

    std::vector<int> K;
    for (int k = 2; k <= static_cast<int>(cfg.poly.coeffs.size()); ++k)
        if (cfg.poly.coeffs[static_cast<size_t>(k - 1)] != 0) K.push_back(k);
    auto coef_of = [&](const std::vector<int>& ks) {
        double c = 1;
        for (int k : ks) c *= cfg.poly.coeffs[static_cast<size_t>(k - 1)];
        return c;
    };
    // interaction-picture coefficients: a_0 = -i, a_{n+1} = i a_n / (-1)^n;
    // the D-term expansion carries b_0 = 1, b_{m+1} = i b_m / (-1)^m
    auto unit = [&](cplx start, int n) {
        cplx a = start;
        for (int i = 0; i < n; ++i) a = I * a / ((i % 2) ? -1.0 : 1.0);
        return a;
    };

    // group specs by (label, nu)
    std::map<std::pair<std::string, int>, TermGroup> groups;
    auto add = [&](TermKind kind, int n, int m, const std::vector<int>& ks,
                   const std::vector<int>& ls, cplx coef, bool boundary, bool rest = false,
                   bool intermediate = false) {
        TermSpec spec{kind, ks, ls};
        const int v = spec.nu();
        std::string label =
            (rest ? std::string(kind == TermKind::FrakN ? "FrakRest" : "Rest")
                  : std::string(term_kind_name(kind))) +
            " n=" + std::to_string(n);
        if (kind == TermKind::FrakB || kind == TermKind::FrakR || kind == TermKind::FrakN)
            label += " m=" + std::to_string(m);
        label += " nu=" + std::to_string(v);
        auto& g = groups[{label, v}];
        g.info.label = label;
        g.info.n = n;
        g.info.m = m;
        g.info.kind = kind;
        g.boundary = boundary;
        g.rest = rest;
        g.intermediate = intermediate;
        g.nu = v;
        g.specs.push_back({spec, coef});
    };
    const int N = opt.depth_N;
    for (int n = 0; n <= N; ++n) {
        const cplx an = unit(cplx(0, -1), n);
        for (auto& ks : sequences(K, n + 1)) {
            const cplx c = an * coef_of(ks);
            if (n < N) {
                add(TermKind::B, n, 0, ks, {}, c, true);
                add(TermKind::N, n, 0, ks, {}, c, false, true, true);
            } else {
                add(TermKind::N, n, 0, ks, {}, c, false);
            }
            add(TermKind::R1, n, 0, ks, {}, c, false);
            add(TermKind::R2, n, 0, ks, {}, c, false);
            if (opt.depth_M == 0 || nu(ks) < 4) {
                if (nu(ks) >= 4) add(TermKind::D, n, 0, ks, {}, c, false);
                continue;
            }
            for (int m = 0; m <= opt.depth_M; ++m) {
                const cplx bm = unit(cplx(1, 0), m);
                for (auto& ls : sequences(K, m)) {
                    const cplx cl = c * bm * coef_of(ls);
                    if (m < opt.depth_M) add(TermKind::FrakB, n, m, ks, ls, cl, true);
                    else add(TermKind::FrakN, n, m, ks, ls, cl, false);
                    add(TermKind::FrakR, n, m, ks, ls, cl, false);
                    if (m > 0 || m < opt.depth_M)
                        add(TermKind::FrakN, n, m, ks, ls, cl, false, true, m < opt.depth_M);
                }
            }
        }
    }

    Multipliers eng(sym, opt.constants, false);
    eng.set_box(M);
    std::vector<TermGroup> terms;
    for (auto& [key, g] : groups) {
        if (g.nu < 2) continue;
        fill_group(g, eng, M, opt.threads);
        if (g.rest && g.tuples.empty()) continue;
        terms.push_back(std::move(g));
    }

    // states on xi in [-M, M], physical and interaction picture
    const size_t W = static_cast<size_t>(2 * M + 1);
    std::vector<std::vector<cplx>> U(S, std::vector<cplx>(W)), V(S, std::vector<cplx>(W));
    for (size_t p = 0; p < S; ++p) {
        const auto f = traj.states[p].resized(static_cast<int>(M));
        for (long xi = 1; xi <= M; ++xi) {
            const cplx u = f.pos(xi);
            const cplx v = u * std::polar(1.0, -traj.times[p] * sym(xi));
            U[p][static_cast<size_t>(M + xi)] = u;
            U[p][static_cast<size_t>(M - xi)] = std::conj(u);
            V[p][static_cast<size_t>(M + xi)] = v;
            V[p][static_cast<size_t>(M - xi)] = std::conj(v);
        }
    }
    auto prod = [&](const std::vector<cplx>& X, const std::vector<long>& xs) {
        cplx r = 1;
        for (long x : xs) r *= X[static_cast<size_t>(M + x)];
        return r;
    };

    // reported snapshots: even indices
    const size_t R = (S - 1) / 2 + 1;
    const double t0 = traj.times[0];
    const double hh = h;  // half panel width: a panel spans two snapshot intervals
    NormalFormReport rep;
    for (size_t r = 0; r < R; ++r) rep.times.push_back(traj.times[2 * r]);

    // contributions[term][r][xi-1]
    std::vector<std::vector<std::vector<cplx>>> contrib(
        terms.size(), std::vector<std::vector<cplx>>(R, std::vector<cplx>(static_cast<size_t>(M))));
    const int nthreads = std::max(1, opt.threads);
    for (size_t ti = 0; ti < terms.size(); ++ti) {
        auto& grp = terms[ti];
        std::vector<std::vector<std::vector<cplx>>> acc(
            static_cast<size_t>(nthreads),
            std::vector<std::vector<cplx>>(R, std::vector<cplx>(static_cast<size_t>(M))));
        parallel_for(grp.tuples.size(), nthreads, [&](size_t i, int w) {
            const Tuple& tp = grp.tuples[i];
            auto& out = acc[static_cast<size_t>(w)];
            const size_t o = static_cast<size_t>(tp.xi - 1);
            if (grp.boundary) {
                const cplx bg = tp.w * prod(U[0], tp.xs);
                for (size_t r = 0; r < R; ++r) {
                    const size_t p = 2 * r;
                    out[r][o] += tp.w * prod(U[p], tp.xs) -
                                 std::polar(1.0, (traj.times[p] - t0) * sym(tp.xi)) * bg;
                }
                return;
            }
            const auto mo = filon_moments(tp.Om * hh);
            const cplx W0 = hh * 0.5 * (mo[2] - mo[1]), W1 = hh * (mo[0] - mo[2]),
                       W2 = hh * 0.5 * (mo[2] + mo[1]);
            cplx phase = std::polar(1.0, -tp.Om * (t0 + hh));
            const cplx step = std::polar(1.0, -2.0 * tp.Om * hh);
            cplx run{};
            cplx pprev = prod(V[0], tp.xs);
            for (size_t r = 1; r < R; ++r) {
                const cplx pm = prod(V[2 * r - 1], tp.xs), pn = prod(V[2 * r], tp.xs);
                run += phase * (W0 * pprev + W1 * pm + W2 * pn);
                phase *= step;
                pprev = pn;
                out[r][o] += tp.w * run;
            }
        });
        for (size_t r = 0; r < R; ++r) {
            const double t = rep.times[r] - t0;
            for (long xi = 1; xi <= M; ++xi) {
                cplx s{};
                for (auto& a : acc) s += a[r][static_cast<size_t>(xi - 1)];
                if (!grp.boundary) s *= std::polar(1.0, t * sym(xi));
                contrib[ti][r][static_cast<size_t>(xi - 1)] = s;
            }
        }
    }

    for (size_t ti = 0; ti < terms.size(); ++ti) {
        auto info = terms[ti].info;
        for (size_t r = 0; r < R; ++r) {
            SpectralField f(static_cast<int>(M));
            f.data() = contrib[ti][r];
            info.norms.push_back(hs_norm(f, opt.s));
        }
        rep.terms.push_back(std::move(info));
    }
    const SpectralField g0 = traj.states[0].resized(static_cast<int>(M));
    for (size_t r = 0; r < R; ++r) {
        const double t = rep.times[r] - t0;
        SpectralField lhs = traj.states[2 * r].resized(static_cast<int>(M));
        SpectralField lin = free_evolve(g0, sym, t);
        SpectralField diff(static_cast<int>(M));
        for (long xi = 1; xi <= M; ++xi) {
            lhs.pos(xi) -= lin.pos(xi);
            cplx rhs{};
            for (auto& c : contrib) rhs += c[r][static_cast<size_t>(xi - 1)];
            diff.pos(xi) = lhs.pos(xi) - rhs;
        }
        const double ln = hs_norm(lhs, opt.s), ad = hs_norm(diff, opt.s);
        rep.lhs_norm.push_back(ln);
        rep.abs_residual.push_back(ad);
        rep.rel_residual.push_back(ln > 0 ? ad / ln : ad);
        if (r > 0) rep.max_rel_residual = std::max(rep.max_rel_residual, rep.rel_residual.back());
    }
    return rep;
}

}  // namespace dgbo
