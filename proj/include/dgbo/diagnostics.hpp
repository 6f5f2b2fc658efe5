#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "dgbo/multipliers.hpp"
#include "dgbo/solver.hpp"

namespace dgbo {

// least-squares slope of log y against log x
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// ---------------------------------------------------------------------------
// smoothing

struct SmoothingRow {
    double t = 0.0, a = 0.0;
    double diff_norm = 0.0;  // |Gu(t) - S(t)g|_{H^{s+a}}
    double free_norm = 0.0;  // |S(t)g|_{H^{s+a}}
};

struct SmoothingTable {
    double s = 0.0;
    std::vector<SmoothingRow> rows;
    // spectral tail slopes of log|fhat(xi)| vs log xi at the last snapshot,
    // fitted over the upper half of the resolved modes
    double tail_slope_diff = 0.0, tail_slope_data = 0.0;
    // slope_diff - slope_data: the observed gain in decay
    double observed_gain = 0.0;

    std::string csv() const;
};

// Ungauged trajectories are gauge transformed first.
SmoothingTable smoothing_table(const Trajectory& traj, const SpectralField& g, double s,
                               const std::vector<double>& a_grid);

// ---------------------------------------------------------------------------
// quadratic Duhamel term int_0^t S(t-t') dx (S(t')g)^2 dt', summed exactly over
// the support of g. The output carries 2M modes.
SpectralField duhamel_quadratic(const SpectralField& g, const DispersionSymbol& sym, double t);

struct CounterexampleRow {
    long N = 0;
    double t_N = 0.0, norm = 0.0, g_norm = 0.0;
};

struct CounterexampleReport {
    double s = 0.0, a = 0.0, alpha = 0.0;
    std::vector<CounterexampleRow> rows;
    double slope = 0.0;     // fitted growth exponent
    double expected = 0.0;  // a + 1 - alpha

    std::string csv() const;
};

CounterexampleReport counterexample_scan(const std::vector<long>& N_list, double s, double a,
                                         const DispersionSymbol& sym);

// ---------------------------------------------------------------------------
// normal-form identity

class QuadratureError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct NormalFormOptions {
    int depth_N = 1;
    int depth_M = 0;
    double s = 0.0;  // Sobolev index of the reported norms
    PartitionConstants constants{};
    int threads = 1;
};

struct NormalFormTerm {
    std::string label;  // e.g. "B n=0", "N n=1", "FrakR n=2 m=1"
    int n = 0, m = 0;
    TermKind kind = TermKind::B;
    size_t tuples = 0;              // tuples with a nonzero symbol
    std::vector<double> norms;      // H^s norm of the contribution per reported time
};

struct NormalFormReport {
    std::vector<double> times;      // snapshots with an even index
    std::vector<double> lhs_norm;   // |u(t) - S(t)g|
    std::vector<double> abs_residual;
    std::vector<double> rel_residual;
    std::vector<NormalFormTerm> terms;
    double max_rel_residual = 0.0;

    std::string csv() const;
};

// Needs uniformly spaced snapshots with an even number of intervals.
NormalFormReport normal_form_residual(const Trajectory& traj, const NormalFormOptions& opt);

}  // namespace dgbo
