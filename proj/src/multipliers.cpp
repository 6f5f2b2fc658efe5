#include "dgbo/multipliers.hpp"

#include <algorithm>
#include <cmath>

namespace dgbo {

const char* term_kind_name(TermKind k) {
    switch (k) {
        case TermKind::B: return "B";
        case TermKind::R1: return "R1";
        case TermKind::R2: return "R2";
        case TermKind::D: return "D";
        case TermKind::N: return "N";
        case TermKind::FrakB: return "FrakB";
        case TermKind::FrakR: return "FrakR";
        case TermKind::FrakN: return "FrakN";
    }
    return "?";
}

int nu(const std::vector<int>& k, const std::vector<int>& l) {
    if (k.empty()) throw std::invalid_argument("k list is empty");
    int v = k[0];
    for (size_t i = 1; i < k.size(); ++i) v += k[i] - 1;
    for (int x : l) v += x - 1;
    return v;
}

int TermSpec::nu() const { return dgbo::nu(k, l); }

int phi_k(std::span<const long> xs) {
    long s = 0;
    for (long x : xs) {
        if (x == 0) throw std::invalid_argument("phi_k is defined on nonzero frequencies");
        s += x;
    }
    int v = 1;
    for (long x : xs) v -= (x == s);
    return v;
}

std::vector<long> contract(std::span<const long> xs, int k, int j) {
    const int n = static_cast<int>(xs.size());
    if (k < 1 || j < 1 || j + k - 1 > n) throw std::out_of_range("elongation index out of range");
    std::vector<long> out;
    out.reserve(static_cast<size_t>(n - k + 1));
    for (int i = 0; i < j - 1; ++i) out.push_back(xs[static_cast<size_t>(i)]);
    long s = 0;
    for (int i = j - 1; i < j - 1 + k; ++i) s += xs[static_cast<size_t>(i)];
    out.push_back(s);
    for (int i = j - 1 + k; i < n; ++i) out.push_back(xs[static_cast<size_t>(i)]);
    return out;
}

Symbol elongate(Symbol f, int n, int k, int j) {
    if (k < 1 || j < 1 || j > n) throw std::out_of_range("elongation index out of range");
    const size_t arity = static_cast<size_t>(n + k - 1);
    return [f = std::move(f), k, j, arity](std::span<const long> xs) {
        if (xs.size() != arity) throw std::invalid_argument("elongated symbol arity mismatch");
        auto p = contract(xs, k, j);
        return f(p);
    };
}

// ---------------------------------------------------------------------------

namespace {
template <class R>
R from_long(long v) {
    return R(v);
}

bool has_zero(const std::vector<long>& v) {
    return std::find(v.begin(), v.end(), 0L) != v.end();
}

long sum_of(std::span<const long> xs) {
    long s = 0;
    for (long x : xs) s += x;
    return s;
}
}  // namespace

template <class R>
MultiplierEngine<R>::MultiplierEngine(DispersionSymbol sym, PartitionConstants c, bool memoize)
    : sym_(sym), c_(c), memoize_(memoize) {
    if constexpr (!std::is_same_v<R, double>) {
        if (!sym_.integer_valued())
            throw std::invalid_argument("exact multipliers need an integer-valued symbol");
    }
}

template <class R>
void MultiplierEngine<R>::set_box(long box) {
    std::lock_guard<std::mutex> lock(mutex_);
    box_ = box;
    memo_.clear();
}

template <class R>
R MultiplierEngine<R>::big_omega_value(std::span<const long> xs) const {
    if constexpr (std::is_same_v<R, double>) {
        return big_omega(xs, sym_);
    } else {
        return R(static_cast<long>(big_omega_exact(xs, sym_)));
    }
}

template <class R>
bool MultiplierEngine<R>::resonant(const R& w) const {
    if constexpr (std::is_same_v<R, double>) {
        return is_resonant(w, c_);
    } else {
        return w == 0;
    }
}

template <class R>
Cx<R> MultiplierEngine<R>::mu_level(const std::vector<int>& k, const std::vector<int>& j, size_t n,
                                    std::span<const long> xs) const {
    if (n == 0) return Cx<R>(from_long<R>(phi_k(xs)));
    const int kn = k[n];
    const int jn = j[n - 1];
    auto sub = xs.subspan(static_cast<size_t>(jn - 1), static_cast<size_t>(kn));
    int ph = phi_k(sub);
    if (ph == 0) return {};
    long S = sum_of(sub);
    if (box_ > 0 && std::labs(S) > box_) return {};
    auto parent = contract(xs, kn, jn);
    if (has_zero(parent)) return {};
    Cx<R> inner = mu_level(k, j, n - 1, parent);
    if (inner.is_zero()) return {};
    R w = big_omega_value(parent);
    if (resonant(w)) return {};
    if (classify_region(parent, sym_, c_) != Region::N) return {};
    R scale = from_long<R>(S * ph);
    if (n >= 2 && n % 2 == 0) scale = -scale;  // (-1)^{n-1}
    return (inner * scale / w).times_i();
}

template <class R>
Cx<R> MultiplierEngine<R>::mu_component(const std::vector<int>& k, const std::vector<int>& j,
                                        std::span<const long> xs) const {
    if (j.size() + 1 != k.size()) throw std::invalid_argument("j list must have length n");
    for (int x : k)
        if (x < 1) throw std::invalid_argument("k entries must be positive");
    for (size_t m = 0; m < j.size(); ++m) {
        std::vector<int> head(k.begin(), k.begin() + static_cast<long>(m) + 1);
        if (j[m] < 1 || j[m] > nu(head)) throw std::invalid_argument("malformed j list");
    }
    if (static_cast<int>(xs.size()) != nu(k)) throw std::invalid_argument("tuple length != nu_n");
    for (long x : xs)
        if (x == 0) throw std::invalid_argument("tuple has a zero entry");
    return mu_level(k, j, k.size() - 1, xs);
}

template <class R>
Cx<R> MultiplierEngine<R>::mu_total(const std::vector<int>& k, std::span<const long> xs) const {
    if (static_cast<int>(xs.size()) != nu(k)) throw std::invalid_argument("tuple length != nu_n");
    std::vector<long> key;
    if (memoize_) {
        key.reserve(k.size() + xs.size() + 1);
        for (int x : k) key.push_back(x);
        key.push_back(0);
        key.insert(key.end(), xs.begin(), xs.end());
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
    }
    const size_t n = k.size() - 1;
    std::vector<int> j(n, 1);
    std::vector<int> lim(n);
    for (size_t m = 0; m < n; ++m) {
        std::vector<int> head(k.begin(), k.begin() + static_cast<long>(m) + 1);
        lim[m] = nu(head);
    }
    Cx<R> acc;
    while (true) {
        acc += mu_level(k, j, n, xs);
        size_t m = 0;
        while (m < n && ++j[m] > lim[m]) j[m++] = 1;
        if (m == n) break;
    }
    if (memoize_) {
        std::lock_guard<std::mutex> lock(mutex_);
        memo_.emplace(std::move(key), acc);
    }
    return acc;
}

template <class R>
Cx<R> MultiplierEngine<R>::mfrak_level(const std::vector<int>& k, const std::vector<int>& l,
                                       size_t m, std::span<const long> xs) const {
    if (m == 0) return mu_total(k, xs);
    const int lm = l[m - 1];
    std::vector<int> lprev(l.begin(), l.begin() + static_cast<long>(m) - 1);
    const int prev_len = nu(k, lprev);
    Cx<R> acc;
    for (int j = 1; j <= prev_len; ++j) {
        auto sub = xs.subspan(static_cast<size_t>(j - 1), static_cast<size_t>(lm));
        int ph = phi_k(sub);
        if (ph == 0) continue;
        if (box_ > 0 && std::labs(sum_of(sub)) > box_) continue;
        auto parent = contract(xs, lm, j);
        if (has_zero(parent)) continue;
        R w = big_omega_value(parent);
        if (resonant(w)) continue;
        if (parent.size() < 4 || classify_region(parent, sym_, c_) != Region::D2) continue;
        Cx<R> inner = mfrak_level(k, l, m - 1, parent);
        if (inner.is_zero()) continue;
        acc += inner * from_long<R>(sum_of(sub) * ph) / w;
    }
    if (m >= 2 && m % 2 == 0) acc = -acc;
    return acc.times_i();
}

template <class R>
Cx<R> MultiplierEngine<R>::mfrak(const std::vector<int>& k, const std::vector<int>& l,
                                 std::span<const long> xs) const {
    if (static_cast<int>(xs.size()) != nu(k, l))
        throw std::invalid_argument("tuple length != nu_{n,m}");
    for (long x : xs)
        if (x == 0) throw std::invalid_argument("tuple has a zero entry");
    return mfrak_level(k, l, l.size(), xs);
}

template <class R>
Cx<R> MultiplierEngine<R>::term_symbol(const TermSpec& t, std::span<const long> xs) const {
    if (static_cast<int>(xs.size()) != t.nu()) throw std::invalid_argument("tuple length mismatch");
    for (long x : xs)
        if (x == 0) throw std::invalid_argument("tuple has a zero entry");
    const long xi = sum_of(xs);
    if (xi == 0) return {};
    const bool frak = t.kind == TermKind::FrakB || t.kind == TermKind::FrakR ||
                      t.kind == TermKind::FrakN;
    if (!frak && !t.l.empty()) throw std::invalid_argument("l list given for a plain term");
    Cx<R> m = frak ? mfrak(t.k, t.l, xs) : mu_total(t.k, xs);
    if (m.is_zero() || xs.size() < 2) return {};
    Region reg = classify_region(xs, sym_, c_);
    const R X = from_long<R>(xi);
    switch (t.kind) {
        case TermKind::B:
        case TermKind::FrakB: {
            if (reg != (t.kind == TermKind::B ? Region::N : Region::D2)) return {};
            R w = big_omega_value(xs);
            if (resonant(w)) return {};
            return (m * X / w).times_i();
        }
        case TermKind::R1: return reg == Region::R1 ? m * X : Cx<R>{};
        case TermKind::R2: return reg == Region::R2 ? m * X : Cx<R>{};
        case TermKind::D:
            return (reg == Region::D1 || reg == Region::D2) ? m * X : Cx<R>{};
        case TermKind::N: return reg == Region::N ? m * X : Cx<R>{};
        case TermKind::FrakR: return reg == Region::D1 ? m * X : Cx<R>{};
        case TermKind::FrakN: return reg == Region::D2 ? m * X : Cx<R>{};
    }
    return {};
}

template <class R>
Cx<R> MultiplierEngine<R>::r1_symmetrized(const std::vector<int>& K, std::span<const long> xs) const {
    if (K.empty()) throw std::invalid_argument("empty multiset");
    std::vector<int> theta = K;
    std::sort(theta.begin(), theta.end());
    int M = 1;
    for (int k : theta) M += k - 1;
    if (static_cast<int>(xs.size()) != M) throw std::invalid_argument("tuple length != 1 + sum(k-1)");
    Cx<R> acc;
    do {
        acc += term_symbol(TermSpec{TermKind::R1, theta, {}}, xs);
    } while (std::next_permutation(theta.begin(), theta.end()));
    return acc;
}

template <class R>
Cx<R> MultiplierEngine<R>::r1_symmetric_part(const std::vector<int>& K,
                                             std::span<const long> xs) const {
    std::vector<size_t> idx(xs.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::vector<long> y(xs.size());
    Cx<R> acc;
    long count = 0;
    do {
        for (size_t i = 0; i < idx.size(); ++i) y[i] = xs[idx[i]];
        acc += r1_symmetrized(K, y);
        ++count;
    } while (std::next_permutation(idx.begin(), idx.end()));
    return acc / from_long<R>(count);
}

template class MultiplierEngine<double>;
template class MultiplierEngine<mpq_class>;

}  // namespace dgbo
