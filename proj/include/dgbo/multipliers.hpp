#pragma once

#include <gmpxx.h>

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "dgbo/resonance.hpp"

namespace dgbo {

// Minimal complex number over an ordered field (double or mpq_class).
template <class R>
struct Cx {
    R re{0}, im{0};

    Cx() = default;
    Cx(R r, R i = R(0)) : re(std::move(r)), im(std::move(i)) {}

    Cx operator+(const Cx& o) const { return {re + o.re, im + o.im}; }
    Cx operator-(const Cx& o) const { return {re - o.re, im - o.im}; }
    Cx operator-() const { return {-re, -im}; }
    Cx operator*(const Cx& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
    Cx operator*(const R& s) const { return {re * s, im * s}; }
    Cx operator/(const R& s) const { return {re / s, im / s}; }
    Cx& operator+=(const Cx& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    Cx times_i() const { return {-im, re}; }
    Cx conj() const { return {re, -im}; }
    bool is_zero() const { return re == 0 && im == 0; }
    bool operator==(const Cx& o) const { return re == o.re && im == o.im; }
};

using GaussQ = Cx<mpq_class>;

inline cplx to_cplx(const Cx<double>& z) { return {z.re, z.im}; }
inline cplx to_cplx(const GaussQ& z) { return {z.re.get_d(), z.im.get_d()}; }

enum class TermKind { B, R1, R2, D, N, FrakB, FrakR, FrakN };
const char* term_kind_name(TermKind k);

struct TermSpec {
    TermKind kind = TermKind::B;
    std::vector<int> k;  // (k0, ..., kn)
    std::vector<int> l;  // (l1, ..., lm)

    int nu() const;  // nu_{n,m}
};

// nu_n = k0 + sum (k_i - 1), extended by the l's
int nu(const std::vector<int>& k, const std::vector<int>& l = {});

// 1 - #{j : xi_j = xi_1 + ... + xi_k}
int phi_k(std::span<const long> xs);

// (xi_1..xi_{j-1}, xi_j + ... + xi_{j+k-1}, xi_{j+k}, ...), j is 1-based
std::vector<long> contract(std::span<const long> xs, int k, int j);

using Symbol = std::function<cplx(std::span<const long>)>;
// X^k_j f for a symbol f of arity n; the result has arity n + k - 1
Symbol elongate(Symbol f, int n, int k, int j);

// Recursive normal-form multipliers. R = double evaluates in floating point;
// R = mpq_class evaluates exactly and needs an integer-valued symbol.
template <class R>
class MultiplierEngine {
public:
    MultiplierEngine(DispersionSymbol sym, PartitionConstants c, bool memoize = true);

    Cx<R> mu_component(const std::vector<int>& k, const std::vector<int>& j,
                       std::span<const long> xs) const;
    Cx<R> mu_total(const std::vector<int>& k, std::span<const long> xs) const;
    Cx<R> mfrak(const std::vector<int>& k, const std::vector<int>& l,
                std::span<const long> xs) const;
    Cx<R> term_symbol(const TermSpec& t, std::span<const long> xs) const;
    // sum of the R1 symbols over all distinct arrangements of the multiset K
    Cx<R> r1_symmetrized(const std::vector<int>& K, std::span<const long> xs) const;
    // the above averaged over all M! reorderings of xs: the part of the symbol
    // the multilinear operator actually sees
    Cx<R> r1_symmetric_part(const std::vector<int>& K, std::span<const long> xs) const;

    // Drop every contraction path whose contracted frequency leaves [-box, box]
    // (0 = no limit). This is the Galerkin truncation of the recursion.
    void set_box(long box);
    long box() const { return box_; }

    const DispersionSymbol& symbol() const { return sym_; }
    const PartitionConstants& constants() const { return c_; }
    Region region(std::span<const long> xs) const { return classify_region(xs, sym_, c_); }

private:
    R big_omega_value(std::span<const long> xs) const;
    bool resonant(const R& w) const;
    Cx<R> mu_level(const std::vector<int>& k, const std::vector<int>& j, size_t n,
                   std::span<const long> xs) const;
    Cx<R> mfrak_level(const std::vector<int>& k, const std::vector<int>& l, size_t m,
                      std::span<const long> xs) const;

    DispersionSymbol sym_;
    PartitionConstants c_;
    bool memoize_;
    long box_ = 0;
    mutable std::mutex mutex_;
    mutable std::map<std::vector<long>, Cx<R>> memo_;
};

extern template class MultiplierEngine<double>;
extern template class MultiplierEngine<mpq_class>;

using Multipliers = MultiplierEngine<double>;
using ExactMultipliers = MultiplierEngine<mpq_class>;

}  // namespace dgbo
