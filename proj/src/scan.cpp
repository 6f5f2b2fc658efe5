#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <thread>

#include "dgbo/multipliers.hpp"
#include "dgbo/resonance.hpp"

namespace dgbo {

namespace {

struct Acc {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    std::vector<long> argmin, argmax;
    long long tuples = 0;
    std::vector<std::vector<long>> violations;

    void add(double r, std::span<const long> xs) {
        if (r < lo) {
            lo = r;
            argmin.assign(xs.begin(), xs.end());
        }
        if (r > hi) {
            hi = r;
            argmax.assign(xs.begin(), xs.end());
        }
    }
    void merge(const Acc& o) {
        if (o.lo < lo) {
            lo = o.lo;
            argmin = o.argmin;
        }
        if (o.hi > hi) {
            hi = o.hi;
            argmax = o.argmax;
        }
        tuples += o.tuples;
        violations.insert(violations.end(), o.violations.begin(), o.violations.end());
    }
};

double pw(double x, double a) { return std::pow(std::fabs(x), a); }

// Walks [-R,R]_*^n with the first coordinate restricted to `first`.
// When `sorted`, only tuples with x_1 <= x_2 <= ... are produced.
void walk(long R, size_t n, bool sorted, long first, std::vector<long>& xs, size_t pos,
          const std::function<void(std::span<const long>)>& f) {
    if (pos == n) {
        f(xs);
        return;
    }
    long start = pos == 0 ? first : (sorted ? xs[pos - 1] : -R);
    long stop = pos == 0 ? first : R;
    for (long v = start; v <= stop; ++v) {
        if (v == 0) continue;
        xs[pos] = v;
        walk(R, n, sorted, first, xs, pos + 1, f);
    }
}

Acc run_parallel(long R, size_t n, bool sorted, int threads,
                 const std::function<void(std::span<const long>, Acc&)>& visit) {
    std::vector<long> firsts;
    for (long v = -R; v <= R; ++v)
        if (v != 0) firsts.push_back(v);
    threads = std::max(1, threads);
    std::vector<Acc> parts(static_cast<size_t>(threads));
    auto work = [&](int w) {
        std::vector<long> xs(n);
        Acc& acc = parts[static_cast<size_t>(w)];
        for (size_t i = static_cast<size_t>(w); i < firsts.size(); i += static_cast<size_t>(threads))
            walk(R, n, sorted, firsts[i], xs, 0, [&](std::span<const long> t) { visit(t, acc); });
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    Acc total;
    for (auto& p : parts) total.merge(p);
    return total;
}

}  // namespace

ScanReport bound_scan(Lemma lemma, long range, const DispersionSymbol& sym,
                      const PartitionConstants& c, const ScanOptions& opt) {
    if (range < 1) throw std::invalid_argument("scan range must be positive");
    const double a = sym.alpha;
    Acc acc;
    switch (lemma) {
        case Lemma::L2_1:
            acc = run_parallel(range, 2, false, opt.threads, [&](std::span<const long> t, Acc& r) {
                long s = t[0] + t[1];
                if (s == 0) return;  // both sides vanish
                auto m = by_magnitude(t);
                double den = pw(double(m[0]), a) * std::min(std::labs(s), std::labs(m[1]));
                r.add(std::fabs(big_omega(t, sym)) / den, t);
                ++r.tuples;
            });
            break;
        case Lemma::L2_2:
            acc = run_parallel(range, 3, false, opt.threads, [&](std::span<const long> t, Acc& r) {
                double p[3] = {std::fabs(double(t[0] + t[1])), std::fabs(double(t[1] + t[2])),
                               std::fabs(double(t[0] + t[2]))};
                std::sort(p, p + 3);
                if (p[0] == 0.0) return;
                double den = pw(p[2], a - 1.0) * p[1] * p[0];
                r.add(std::fabs(big_omega(t, sym)) / den, t);
                ++r.tuples;
            });
            break;
        case Lemma::L2_3: {
            if (opt.arity < 4) throw std::invalid_argument("L2_3 scans need arity >= 4");
            // the classifier is permutation invariant, so multisets suffice
            acc = run_parallel(range, static_cast<size_t>(opt.arity), true, opt.threads,
                               [&](std::span<const long> t, Acc& r) {
                                   ++r.tuples;
                                   Region g;
                                   try {
                                       g = classify_region(t, sym, c);
                                   } catch (const PartitionError&) {
                                       r.violations.emplace_back(t.begin(), t.end());
                                       return;
                                   }
                                   auto m = by_magnitude(t);
                                   double w = std::fabs(big_omega(t, sym));
                                   long xi = 0;
                                   for (long x : t) xi += x;
                                   if (g == Region::N)
                                       r.add(w / (pw(double(m[0]), a) * bracket(double(xi - m[0]))), t);
                                   else if (g == Region::D2)
                                       r.add(w / (pw(double(m[0]), a) * rho(t)), t);
                               });
            break;
        }
        case Lemma::L5_1:
        case Lemma::L5_2: {
            std::vector<int> k = lemma == Lemma::L5_2 ? std::vector<int>{2, 2} : opt.k_list;
            Multipliers eng(sym, c, false);
            const int n = static_cast<int>(k.size()) - 1;
            acc = run_parallel(range, static_cast<size_t>(nu(k)), false, opt.threads,
                               [&](std::span<const long> t, Acc& r) {
                                   long xi = 0;
                                   for (long x : t) xi += x;
                                   if (xi == 0) return;
                                   if (lemma == Lemma::L5_2 &&
                                       classify_region(t, sym, c) != Region::R2)
                                       return;
                                   ++r.tuples;
                                   double v = std::abs(to_cplx(eng.mu_total(k, t)));
                                   if (v == 0.0) return;
                                   double w = lemma == Lemma::L5_2
                                                  ? pw(double(by_magnitude(t)[0]), a)
                                                  : pw(double(xi), n * (a - 1.0));
                                   r.add(v * w, t);
                               });
            break;
        }
    }
    ScanReport rep;
    rep.lemma = lemma_name(lemma);
    rep.range = range;
    rep.alpha = a;
    rep.tuples = acc.tuples;
    rep.ratio_min = std::isfinite(acc.lo) ? acc.lo : 0.0;
    rep.ratio_max = std::isfinite(acc.hi) ? acc.hi : 0.0;
    rep.argmin = acc.argmin;
    rep.argmax = acc.argmax;
    rep.violations = std::move(acc.violations);
    return rep;
}

}  // namespace dgbo
