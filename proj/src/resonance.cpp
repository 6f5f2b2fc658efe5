#include "dgbo/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace dgbo {

FreqTuple::FreqTuple(std::vector<long> xs) : xs_(std::move(xs)) {
    if (xs_.empty()) throw std::invalid_argument("empty frequency tuple");
    for (long x : xs_)
        if (x == 0) throw std::invalid_argument("frequency tuples live on nonzero integers");
}

long FreqTuple::sum() const {
    long s = 0;
    for (long x : xs_) s += x;
    return s;
}

std::vector<long> FreqTuple::by_magnitude() const { return dgbo::by_magnitude(xs_); }

std::vector<long> by_magnitude(std::span<const long> xs) {
    std::vector<long> v(xs.begin(), xs.end());
    std::stable_sort(v.begin(), v.end(), [](long a, long b) { return std::labs(a) > std::labs(b); });
    return v;
}

double omega(long xi, const DispersionSymbol& sym) {
    if (xi == 0) throw std::invalid_argument("omega is evaluated on nonzero frequencies");
    return sym(xi);
}

double big_omega(std::span<const long> xs, const DispersionSymbol& sym) {
    if (sym.integer_valued()) return static_cast<double>(big_omega_exact(xs, sym));
    long s = 0;
    double acc = 0.0;
    for (long x : xs) {
        s += x;
        acc -= sym(x);
    }
    return acc + sym(s);
}

long long big_omega_exact(std::span<const long> xs, const DispersionSymbol& sym) {
    long s = 0;
    long long acc = 0;
    for (long x : xs) {
        s += x;
        acc -= sym.exact(x);
    }
    return acc + sym.exact(s);
}

double rho(std::span<const long> xs) {
    if (xs.size() < 2) throw std::invalid_argument("rho needs at least two frequencies");
    auto a = by_magnitude(xs);
    long tail = 0;
    for (size_t i = 1; i < a.size(); ++i) tail += a[i];
    return std::min(bracket(static_cast<double>(a[0] + a[1])), bracket(static_cast<double>(tail)));
}

const char* region_name(Region r) {
    switch (r) {
        case Region::R1: return "R1";
        case Region::R2: return "R2";
        case Region::N: return "N";
        case Region::D1: return "D1";
        case Region::D2: return "D2";
    }
    return "?";
}

bool is_resonant(double w, const PartitionConstants& c) { return std::fabs(w) < c.resonant_tol; }

namespace {
std::string tuple_text(std::span<const long> xs) {
    std::ostringstream os;
    os << '(';
    for (size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
    os << ')';
    return os.str();
}

double powa(long x, double a) { return std::pow(std::fabs(static_cast<double>(x)), a); }
}  // namespace

Region classify_region(std::span<const long> xs, const DispersionSymbol& sym,
                       const PartitionConstants& c) {
    const size_t n = xs.size();
    if (n < 2) throw std::invalid_argument("regions are defined for n >= 2");
    long xi = 0;
    for (long x : xs) {
        if (x == 0) throw std::invalid_argument("region of a tuple with a zero entry");
        xi += x;
    }
    if (n == 2) return Region::N;
    const double a = sym.alpha;

    if (n == 3) {
        for (long x : xs)
            if (x == xi) return Region::R1;
        long lo = std::labs(xs[0]), hi = lo;
        for (long x : xs) {
            lo = std::min(lo, std::labs(x));
            hi = std::max(hi, std::labs(x));
        }
        if (static_cast<double>(hi) < c.sep * static_cast<double>(lo)) return Region::R2;
        if (c.check) {
            double w = std::fabs(big_omega(xs, sym));
            double bound = c.n3_floor * powa(hi, a) * rho(xs);
            if (!(w >= bound))
                throw PartitionError("N_3 lower bound fails at " + tuple_text(xs));
        }
        return Region::N;
    }

    auto s = by_magnitude(xs);
    const double x1 = std::fabs(static_cast<double>(s[0]));
    const double x2 = std::fabs(static_cast<double>(s[1]));
    if (x1 >= c.sep * x2) {
        if (xi == s[0]) return Region::R1;
        double rest = bracket(static_cast<double>(xi - s[0]));
        if (powa(s[2], a) * std::fabs(static_cast<double>(s[3])) >= c.r2 * powa(s[0], a) * rest)
            return Region::R2;
        if (c.check) {
            double w = std::fabs(big_omega(xs, sym));
            if (!(w >= c.n_floor * powa(s[0], a) * rest))
                throw PartitionError("N lower bound fails at " + tuple_text(xs));
        }
        return Region::N;
    }
    if (std::fabs(static_cast<double>(s[2])) >= c.d1 * std::fabs(static_cast<double>(xi)))
        return Region::D1;
    if (c.check) {
        double w = std::fabs(big_omega(xs, sym));
        if (!(w >= c.d2_floor * powa(s[0], a) * rho(xs)))
            throw PartitionError("D2 lower bound fails at " + tuple_text(xs));
    }
    return Region::D2;
}

Lemma parse_lemma(const std::string& s) {
    if (s == "L2_1") return Lemma::L2_1;
    if (s == "L2_2") return Lemma::L2_2;
    if (s == "L2_3") return Lemma::L2_3;
    if (s == "L5_1") return Lemma::L5_1;
    if (s == "L5_2") return Lemma::L5_2;
    throw std::invalid_argument("unknown lemma '" + s + "'");
}

const char* lemma_name(Lemma l) {
    switch (l) {
        case Lemma::L2_1: return "L2_1";
        case Lemma::L2_2: return "L2_2";
        case Lemma::L2_3: return "L2_3";
        case Lemma::L5_1: return "L5_1";
        case Lemma::L5_2: return "L5_2";
    }
    return "?";
}

std::string ScanReport::csv_header() {
    return "lemma,range,alpha,ratio_min,ratio_max,argmin_tuple,argmax_tuple,violations";
}

std::string ScanReport::csv_row() const {
    auto fmt = [](const std::vector<long>& v) {
        std::ostringstream os;
        for (size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
        return os.str();
    };
    std::ostringstream os;
    os.precision(17);
    os << lemma << ',' << range << ',' << alpha << ',' << ratio_min << ',' << ratio_max << ','
       << fmt(argmin) << ',' << fmt(argmax) << ',' << violations.size();
    return os.str();
}

}  // namespace dgbo
