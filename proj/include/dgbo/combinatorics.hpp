#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace dgbo {

using Rational = mpq_class;

// max(|x1|, |x1+x2|, ...) / max(|x1|, ..., |xn|); always within [1/(2n), n]
double max_equiv_ratio(const std::vector<double>& x);

// sum over S_N of 1{a_s(i) != 0, a_s(1)+..+a_s(i) != 0, i < N} / (a_s(1)...a_s(N-1)),
// enumerated permutation by permutation (shared prefixes are reused)
Rational zero_sum_identity(const std::vector<Rational>& a);

// Multiset K given as the list of its elements (k values, repeats allowed).
// Evaluates the S_M x Perm(K) double sum. The fast version groups the
// permutations by the ordered chain of index sets they induce; the naive
// version walks every (sigma, pi) pair.
Rational multiset_cancellation(const std::vector<int>& K, const std::vector<Rational>& xi);
Rational multiset_cancellation_naive(const std::vector<int>& K, const std::vector<Rational>& xi);

// random rationals p/q (|p| <= 9, 1 <= q <= 5) with the last entry closing the sum to 0
std::vector<Rational> random_zero_sum(size_t n, std::mt19937_64& rng);

// all multisets of positive integers with at least two elements and sum <= max_M,
// each as a nondecreasing list
std::vector<std::vector<int>> multisets_up_to(int max_M);

struct LemmaCheckReport {
    std::uint64_t seed = 0;
    int zero_sum_trials = 0, multiset_trials = 0;
    long long zero_sum_cases = 0, multiset_cases = 0;
    // each violation: "zero_sum N=..: <vector>" or "multiset K=..: <vector>"
    std::vector<std::string> violations;
};

// zero_sum_identity on `zero_sum_trials` vectors for each N in 2..max_N and
// multiset_cancellation on `multiset_trials` vectors for each K in multisets_up_to(max_M)
LemmaCheckReport lemma_check(std::uint64_t seed, int zero_sum_trials, int max_N,
                             int multiset_trials, int max_M);

}  // namespace dgbo
