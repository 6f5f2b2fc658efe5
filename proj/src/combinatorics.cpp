#include "dgbo/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace dgbo {

double max_equiv_ratio(const std::vector<double>& x) {
    if (x.empty()) throw std::invalid_argument("empty list");
    double prefix = 0.0, lhs = 0.0, rhs = 0.0;
    for (double v : x) {
        prefix += v;
        lhs = std::max(lhs, std::fabs(prefix));
        rhs = std::max(rhs, std::fabs(v));
    }
    if (rhs == 0.0) throw std::invalid_argument("all-zero list");
    return lhs / rhs;
}

namespace {

void zero_sum_walk(const std::vector<Rational>& a, unsigned used, size_t depth,
                   const Rational& prefix, const Rational& weight, Rational& acc) {
    const size_t N = a.size();
    if (depth + 1 == N) {
        acc += weight;  // the last slot carries no condition and no factor
        return;
    }
    for (size_t j = 0; j < N; ++j) {
        if (used & (1u << j)) continue;
        if (a[j] == 0) continue;
        Rational p = prefix + a[j];
        if (p == 0) continue;
        zero_sum_walk(a, used | (1u << j), depth + 1, p, weight / a[j], acc);
    }
}

}  // namespace

Rational zero_sum_identity(const std::vector<Rational>& a) {
    if (a.size() < 2) throw std::invalid_argument("zero_sum_identity needs N >= 2");
    if (a.size() > 20) throw std::invalid_argument("N too large to enumerate");
    Rational acc = 0;
    zero_sum_walk(a, 0u, 0, Rational(0), Rational(1), acc);
    return acc;
}

namespace {

struct ChainSum {
    const std::vector<Rational>& xi;
    std::vector<int> values;  // distinct block sizes
    std::vector<Rational> subset_sum;
    std::vector<Rational> factorial;
    int blocks = 0;
    std::unordered_map<unsigned long long, Rational> memo;

    ChainSum(const std::vector<int>& K, const std::vector<Rational>& x) : xi(x) {
        const size_t M = x.size();
        subset_sum.assign(size_t{1} << M, Rational(0));
        for (size_t s = 1; s < subset_sum.size(); ++s) {
            size_t low = static_cast<size_t>(__builtin_ctzll(s));
            subset_sum[s] = subset_sum[s & (s - 1)] + x[low];
        }
        factorial.assign(M + 1, Rational(1));
        for (size_t i = 1; i <= M; ++i) factorial[i] = factorial[i - 1] * static_cast<long>(i);
        values = K;
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        blocks = static_cast<int>(K.size());
    }

    // counts[v] = remaining copies of values[v]; packs into 4 bits each
    static unsigned long long key(unsigned mask, const std::vector<int>& counts) {
        unsigned long long k = mask;
        for (int c : counts) k = (k << 4) | static_cast<unsigned>(c);
        return k;
    }

    Rational eval(unsigned mask, std::vector<int>& counts, int placed) {
        const size_t M = xi.size();
        const unsigned full = static_cast<unsigned>((size_t{1} << M) - 1);
        if (placed == blocks) return mask == full ? Rational(1) : Rational(0);
        auto k = key(mask, counts);
        if (auto it = memo.find(k); it != memo.end()) return it->second;
        Rational acc = 0;
        const unsigned rest = full & ~mask;
        const bool last = placed + 1 == blocks;
        for (size_t v = 0; v < values.size(); ++v) {
            if (counts[v] == 0) continue;
            const int size = values[v];
            --counts[v];
            for (unsigned b = rest; b; b = (b - 1) & rest) {
                if (__builtin_popcount(b) != size) continue;
                if (last) {
                    acc += factorial[static_cast<size_t>(size)];
                    continue;
                }
                if (subset_sum[b] == 0) continue;
                const Rational& p = subset_sum[mask | b];
                if (p == 0) continue;
                Rational sub = eval(mask | b, counts, placed + 1);
                if (sub != 0) acc += sub * factorial[static_cast<size_t>(size)] / p;
            }
            ++counts[v];
        }
        memo.emplace(k, acc);
        return acc;
    }
};

void check_multiset(const std::vector<int>& K, const std::vector<Rational>& xi) {
    if (K.empty()) throw std::invalid_argument("empty multiset");
    long M = 0;
    for (int k : K) {
        if (k < 1) throw std::invalid_argument("multiset entries must be positive");
        M += k;
    }
    if (M != static_cast<long>(xi.size()))
        throw std::invalid_argument("length of xi must equal the sum of K");
    if (M > 12) throw std::invalid_argument("M too large to enumerate");
}

}  // namespace

Rational multiset_cancellation(const std::vector<int>& K, const std::vector<Rational>& xi) {
    check_multiset(K, xi);
    ChainSum cs(K, xi);
    std::vector<int> counts(cs.values.size(), 0);
    for (int k : K)
        ++counts[static_cast<size_t>(std::lower_bound(cs.values.begin(), cs.values.end(), k) -
                                     cs.values.begin())];
    for (int c : counts)
        if (c > 15) throw std::invalid_argument("multiplicity too large");
    return cs.eval(0u, counts, 0);
}

Rational multiset_cancellation_naive(const std::vector<int>& K, const std::vector<Rational>& xi) {
    check_multiset(K, xi);
    const size_t M = xi.size(), N = K.size();
    std::vector<int> pi = K;
    std::sort(pi.begin(), pi.end());
    Rational acc = 0;
    std::vector<Rational> x(N);
    do {
        std::vector<size_t> sigma(M);
        std::iota(sigma.begin(), sigma.end(), 0);
        do {
            size_t pos = 0;
            for (size_t i = 0; i < N; ++i) {
                x[i] = 0;
                for (int r = 0; r < pi[i]; ++r) x[i] += xi[sigma[pos++]];
            }
            bool ok = true;
            Rational prefix = 0, denom = 1;
            for (size_t i = 0; i + 1 < N && ok; ++i) {
                prefix += x[i];
                if (x[i] == 0 || prefix == 0) ok = false;
                denom *= prefix;
            }
            if (ok) acc += 1 / denom;
        } while (std::next_permutation(sigma.begin(), sigma.end()));
    } while (std::next_permutation(pi.begin(), pi.end()));
    return acc;
}

// ---------------------------------------------------------------------------

std::vector<Rational> random_zero_sum(size_t n, std::mt19937_64& rng) {
    std::uniform_int_distribution<long> num(-9, 9), den(1, 5);
    std::vector<Rational> a(n);
    Rational s = 0;
    for (size_t i = 0; i + 1 < n; ++i) {
        a[i] = Rational(num(rng), den(rng));
        a[i].canonicalize();
        s += a[i];
    }
    a[n - 1] = -s;
    return a;
}

namespace {
void multisets_rec(int max_M, int min_part, std::vector<int>& cur, int sum,
                   std::vector<std::vector<int>>& out) {
    if (cur.size() >= 2) out.push_back(cur);
    for (int k = min_part; sum + k <= max_M; ++k) {
        cur.push_back(k);
        multisets_rec(max_M, k, cur, sum + k, out);
        cur.pop_back();
    }
}

std::string show(const std::vector<Rational>& v) {
    std::ostringstream os;
    os << '(';
    for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ')';
    return os.str();
}
}  // namespace

std::vector<std::vector<int>> multisets_up_to(int max_M) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    multisets_rec(max_M, 1, cur, 0, out);
    return out;
}

LemmaCheckReport lemma_check(std::uint64_t seed, int zero_sum_trials, int max_N,
                             int multiset_trials, int max_M) {
    if (max_N > 10 || max_M > 10) throw std::invalid_argument("lemma_check sizes too large");
    LemmaCheckReport rep;
    rep.seed = seed;
    rep.zero_sum_trials = zero_sum_trials;
    rep.multiset_trials = multiset_trials;
    std::mt19937_64 rng(seed);
    for (int N = 2; N <= max_N; ++N)
        for (int t = 0; t < zero_sum_trials; ++t) {
            auto a = random_zero_sum(static_cast<size_t>(N), rng);
            ++rep.zero_sum_cases;
            if (zero_sum_identity(a) != 0)
                rep.violations.push_back("zero_sum N=" + std::to_string(N) + ": " + show(a));
        }
    for (const auto& K : multisets_up_to(max_M)) {
        const int M = std::accumulate(K.begin(), K.end(), 0);
        for (int t = 0; t < multiset_trials; ++t) {
            auto xi = random_zero_sum(static_cast<size_t>(M), rng);
            ++rep.multiset_cases;
            if (multiset_cancellation(K, xi) != 0) {
                std::string k;
                for (int v : K) k += (k.empty() ? "" : ",") + std::to_string(v);
                rep.violations.push_back("multiset K={" + k + "}: " + show(xi));
            }
        }
    }
    return rep;
}

}  // namespace dgbo
