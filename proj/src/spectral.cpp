#include "dgbo/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace dgbo {

DispersionSymbol DispersionSymbol::fractional(double alpha) {
    if (!(alpha > 1.0 && alpha <= 2.0))
        throw std::invalid_argument("fractional symbol needs 1 < alpha <= 2");
    return {SymbolKind::fractional, alpha};
}

DispersionSymbol DispersionSymbol::quintic() { return {SymbolKind::quintic, 4.0}; }

bool DispersionSymbol::integer_valued() const {
    return kind == SymbolKind::quintic || alpha == 2.0;
}

double DispersionSymbol::operator()(long xi) const {
    if (xi == 0) return 0.0;
    if (integer_valued()) return static_cast<double>(exact(xi));
    double a = std::fabs(static_cast<double>(xi));
    return std::exp(alpha * std::log(a)) * static_cast<double>(xi);
}

long long DispersionSymbol::exact(long xi) const {
    long long x = xi;
    if (kind == SymbolKind::quintic) return x * x * x * x * x;
    if (alpha != 2.0) throw std::logic_error("omega is not integer valued for this alpha");
    return x * x * x;
}

namespace {
bool smooth_size(int n) {
    for (int p : {2, 3, 5})
        while (n % p == 0) n /= p;
    return n == 1;
}
}  // namespace

int Grid::samples(int degree) const {
    if (num_modes < 1) throw std::invalid_argument("grid needs at least one mode");
    if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0))
        throw std::invalid_argument("dealias_fraction must lie in (0,1]");
    int d = degree < 2 ? 2 : degree;
    long need = static_cast<long>(d + 1) * num_modes + 1;
    long byfrac = static_cast<long>(std::ceil(2.0 * num_modes / dealias_fraction)) + 1;
    long n = std::max(need, byfrac);
    if (n % 2) ++n;
    while (!smooth_size(static_cast<int>(n))) n += 2;
    return static_cast<int>(n);
}

cplx SpectralField::operator[](long xi) const {
    if (xi == 0) return mean;
    long a = xi < 0 ? -xi : xi;
    if (a > modes()) return 0.0;
    const cplx& v = c_[static_cast<size_t>(a - 1)];
    return xi > 0 ? v : std::conj(v);
}

SpectralField SpectralField::resized(int M) const {
    SpectralField out(M);
    out.mean = mean;
    for (int k = 1; k <= std::min(M, modes()); ++k) out.pos(k) = pos(k);
    return out;
}

double hs_norm(const SpectralField& f, double s) {
    double acc = f.mean * f.mean;
    for (int k = 1; k <= f.modes(); ++k)
        acc += 2.0 * std::pow(static_cast<double>(k), 2.0 * s) * std::norm(f.pos(k));
    return std::sqrt(acc);
}

SpectralField free_evolve(const SpectralField& f, const DispersionSymbol& sym, double t) {
    SpectralField out = f;
    for (int k = 1; k <= f.modes(); ++k) out.pos(k) *= std::polar(1.0, t * sym(k));
    return out;
}

SpectralField apply_multiplier(const SpectralField& f, const std::function<cplx(long)>& m,
                               double tol) {
    SpectralField out = f;
    cplx m0 = m(0);
    if (f.mean != 0.0 && std::fabs(m0.imag()) > tol * std::max(1.0, std::abs(m0)))
        throw RealityError("multiplier is not real at xi = 0");
    out.mean = f.mean * m0.real();
    for (int k = 1; k <= f.modes(); ++k) {
        cplx mp = m(k), mn = m(-k);
        double defect = std::abs(mn - std::conj(mp));
        if (f.pos(k) != 0.0 && defect > tol * std::max(1.0, std::abs(mp)))
            throw RealityError("multiplier breaks conjugate symmetry at xi = " +
                               std::to_string(k));
        out.pos(k) = f.pos(k) * mp;
    }
    return out;
}

SpectralField project_mean_zero(SpectralField f) {
    f.mean = 0.0;
    return f;
}

// ---------------------------------------------------------------------------

namespace {
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

struct Transform::Impl {
    double* real = nullptr;
    fftw_complex* spec = nullptr;
    fftw_plan fwd = nullptr, bwd = nullptr;
};

Transform::Transform(int samples) : n_(samples), impl_(std::make_unique<Impl>()) {
    if (n_ < 2 || n_ % 2) throw std::invalid_argument("Transform needs an even sample count");
    std::lock_guard<std::mutex> lock(plan_mutex());
    impl_->real = fftw_alloc_real(static_cast<size_t>(n_));
    impl_->spec = fftw_alloc_complex(static_cast<size_t>(n_ / 2 + 1));
    impl_->fwd = fftw_plan_dft_r2c_1d(n_, impl_->real, impl_->spec, FFTW_ESTIMATE);
    impl_->bwd = fftw_plan_dft_c2r_1d(n_, impl_->spec, impl_->real, FFTW_ESTIMATE);
}

Transform::~Transform() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(impl_->fwd);
    fftw_destroy_plan(impl_->bwd);
    fftw_free(impl_->real);
    fftw_free(impl_->spec);
}

std::vector<double> Transform::to_physical(const SpectralField& f) const {
    std::vector<double> out;
    to_physical(f, out);
    return out;
}

void Transform::to_physical(const SpectralField& f, std::vector<double>& out) const {
    static const std::vector<cplx> none;
    to_physical(f, none, out);
}

void Transform::to_physical(const SpectralField& f, const std::vector<cplx>& weight,
                            std::vector<double>& out) const {
    const int half = n_ / 2;
    if (f.modes() >= half) throw std::invalid_argument("too few samples for field");
    fftw_complex* s = impl_->spec;
    for (int k = 0; k <= half; ++k) s[k][0] = s[k][1] = 0.0;
    s[0][0] = f.mean;
    for (int k = 1; k <= f.modes(); ++k) {
        cplx v = f.pos(k);
        if (!weight.empty()) v *= weight[static_cast<size_t>(k)];
        s[k][0] = v.real();
        s[k][1] = v.imag();
    }
    fftw_execute(impl_->bwd);
    out.assign(impl_->real, impl_->real + n_);
}

void Transform::coefficients(const std::vector<double>& u, int M, std::vector<cplx>& out) const {
    if (static_cast<int>(u.size()) != n_) throw std::invalid_argument("sample count mismatch");
    if (M >= n_ / 2) throw std::invalid_argument("too few samples for requested modes");
    std::copy(u.begin(), u.end(), impl_->real);
    fftw_execute(impl_->fwd);
    out.resize(static_cast<size_t>(M + 1));
    const double inv = 1.0 / n_;
    for (int k = 0; k <= M; ++k)
        out[static_cast<size_t>(k)] = cplx(impl_->spec[k][0], impl_->spec[k][1]) * inv;
}

SpectralField Transform::to_spectral(const std::vector<double>& u, int M) const {
    std::vector<cplx> c;
    coefficients(u, M, c);
    SpectralField f(M);
    f.mean = c[0].real();
    for (int k = 1; k <= M; ++k) f.pos(k) = c[static_cast<size_t>(k)];
    return f;
}

}  // namespace dgbo
