#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

namespace dgbo {

using cplx = std::complex<double>;

enum class SymbolKind { fractional, quintic };

// omega(xi) = |xi|^alpha * xi, or xi^5 for the quintic kind.
struct DispersionSymbol {
    SymbolKind kind = SymbolKind::fractional;
    double alpha = 2.0;

    static DispersionSymbol fractional(double alpha);
    static DispersionSymbol quintic();

    // true when omega takes integer values on integers (alpha == 2 or quintic)
    bool integer_valued() const;
    double operator()(long xi) const;
    long long exact(long xi) const;
};

struct Grid {
    int num_modes = 32;
    double dealias_fraction = 2.0 / 3.0;

    // physical sample count that keeps products of `degree` fields alias free
    int samples(int degree) const;
};

// Real mean-zero field. Only xi = 1..M are stored; negative modes are the
// conjugates. `mean` holds the xi = 0 coefficient (zero for valid states).
class SpectralField {
public:
    SpectralField() = default;
    explicit SpectralField(int M) : c_(static_cast<size_t>(M)) {}

    int modes() const { return static_cast<int>(c_.size()); }
    cplx operator[](long xi) const;
    cplx& pos(long xi) { return c_[static_cast<size_t>(xi - 1)]; }
    const cplx& pos(long xi) const { return c_[static_cast<size_t>(xi - 1)]; }
    std::vector<cplx>& data() { return c_; }
    const std::vector<cplx>& data() const { return c_; }

    // copy restricted / zero-extended to M modes
    SpectralField resized(int M) const;

    double mean = 0.0;

private:
    std::vector<cplx> c_;
};

class RealityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double hs_norm(const SpectralField& f, double s);
SpectralField free_evolve(const SpectralField& f, const DispersionSymbol& sym, double t);

// Coefficientwise product. Throws RealityError when m(-xi) != conj(m(xi))
// beyond `tol` (relative) on a resolved mode carrying energy.
SpectralField apply_multiplier(const SpectralField& f, const std::function<cplx(long)>& m,
                               double tol = 1e-12);
SpectralField project_mean_zero(SpectralField f);

// Real FFT between L physical samples on [0, 2pi) and Fourier coefficients
// normalised as in u(x) = sum_xi uhat(xi) e^{i xi x}.
class Transform {
public:
    explicit Transform(int samples);
    ~Transform();
    Transform(const Transform&) = delete;
    Transform& operator=(const Transform&) = delete;

    int samples() const { return n_; }
    std::vector<double> to_physical(const SpectralField& f) const;
    void to_physical(const SpectralField& f, std::vector<double>& out) const;
    // xi-weighted variant: samples of sum_xi w(xi) uhat(xi) e^{i xi x}
    void to_physical(const SpectralField& f, const std::vector<cplx>& weight,
                     std::vector<double>& out) const;
    SpectralField to_spectral(const std::vector<double>& u, int M) const;
    // raw coefficients xi = 0..M (mean included)
    void coefficients(const std::vector<double>& u, int M, std::vector<cplx>& out) const;

private:
    struct Impl;
    int n_;
    std::unique_ptr<Impl> impl_;
};

}  // namespace dgbo
