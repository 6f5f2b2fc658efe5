#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgbo/spectral.hpp"

namespace dgbo {

// Ordered tuple of nonzero integer frequencies.
class FreqTuple {
public:
    FreqTuple() = default;
    FreqTuple(std::initializer_list<long> xs) : FreqTuple(std::vector<long>(xs)) {}
    explicit FreqTuple(std::vector<long> xs);

    size_t size() const { return xs_.size(); }
    long operator[](size_t i) const { return xs_[i]; }
    const std::vector<long>& values() const { return xs_; }
    std::span<const long> span() const { return xs_; }
    long sum() const;
    // entries reordered by decreasing magnitude (xi_1^*, xi_2^*, ...)
    std::vector<long> by_magnitude() const;

private:
    std::vector<long> xs_;
};

std::vector<long> by_magnitude(std::span<const long> xs);

double omega(long xi, const DispersionSymbol& sym);
double big_omega(std::span<const long> xs, const DispersionSymbol& sym);
inline double big_omega(const FreqTuple& t, const DispersionSymbol& sym) {
    return big_omega(t.span(), sym);
}
// exact value for integer-valued symbols
long long big_omega_exact(std::span<const long> xs, const DispersionSymbol& sym);

inline double bracket(double x) { return std::sqrt(1.0 + x * x); }
double rho(std::span<const long> xs);
inline double rho(const FreqTuple& t) { return rho(t.span()); }

// Numeric stand-ins for ">>", "~" and ">~".
struct PartitionConstants {
    double sep = 4.0;        // |a| >> |b|  <=>  |a| >= sep*|b|
    double r2 = 0.25;        // case (b): |x3*|^a |x4*| >= r2 |x1*|^a <xi - x1*>
    double d1 = 0.0625;      // D1: |x3*| >= d1 |xi|; 1/4 lets resonant 5-tuples into D2
    double n_floor = 1e-3;   // asserted: |Omega| >= n_floor |x1*|^a <xi - x1*> on N (n >= 4)
    double n3_floor = 1e-3;  // asserted: |Omega_3| >= n3_floor |x1*|^a rho_3 on N_3
    double d2_floor = 1e-3;  // asserted: |Omega| >= d2_floor |x1*|^a rho on D2
    double resonant_tol = 1e-9;
    bool check = true;       // evaluate the asserted lower bounds
};

enum class Region { R1, R2, N, D1, D2 };
const char* region_name(Region r);

class PartitionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Region classify_region(std::span<const long> xs, const DispersionSymbol& sym,
                       const PartitionConstants& c);
inline Region classify_region(const FreqTuple& t, const DispersionSymbol& sym,
                              const PartitionConstants& c) {
    return classify_region(t.span(), sym, c);
}

bool is_resonant(double big_omega_value, const PartitionConstants& c);

// ---------------------------------------------------------------------------

enum class Lemma { L2_1, L2_2, L2_3, L5_1, L5_2 };
Lemma parse_lemma(const std::string& s);
const char* lemma_name(Lemma l);

struct ScanOptions {
    int arity = 4;                       // tuple length for L2_3
    std::vector<int> k_list = {2, 2};    // multiplier for L5_1
    int threads = 1;
};

struct ScanReport {
    std::string lemma;
    long range = 0;
    double alpha = 0.0;
    double ratio_min = 0.0, ratio_max = 0.0;
    std::vector<long> argmin, argmax;
    long long tuples = 0;
    std::vector<std::vector<long>> violations;

    static std::string csv_header();
    std::string csv_row() const;
};

ScanReport bound_scan(Lemma lemma, long range, const DispersionSymbol& sym,
                      const PartitionConstants& c, const ScanOptions& opt = {});

}  // namespace dgbo
