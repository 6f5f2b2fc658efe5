#include "dgbo/solver.hpp"

#include <cmath>
#include <numbers>

namespace dgbo {

int PolynomialSpec::degree() const {
    int d = static_cast<int>(coeffs.size());
    while (d > 0 && coeffs[static_cast<size_t>(d - 1)] == 0.0) --d;
    return d;
}

void PolynomialSpec::validate() const {
    if (degree() < 2) throw std::invalid_argument("polynomial degree must be at least 2");
}

bool PolynomialSpec::is_zero() const { return degree() == 0; }

double PolynomialSpec::P(double x) const {
    double acc = 0.0;
    for (size_t k = coeffs.size(); k-- > 0;) acc = (acc + coeffs[k]) * x;
    return acc;
}

double PolynomialSpec::dP(double x) const {
    double acc = 0.0;
    for (size_t k = coeffs.size(); k-- > 0;) acc = acc * x + static_cast<double>(k + 1) * coeffs[k];
    return acc;
}

double PolynomialSpec::F(double x) const {
    double acc = 0.0;
    for (size_t k = coeffs.size(); k-- > 0;) acc = (acc + coeffs[k] / static_cast<double>(k + 2)) * x;
    return acc * x;
}

void SimConfig::validate() const {
    if (sym.kind == SymbolKind::fractional && !(sym.alpha > 1.0 && sym.alpha <= 2.0))
        throw std::invalid_argument("fractional symbol needs 1 < alpha <= 2");
    if (grid.num_modes < 1) throw std::invalid_argument("grid needs at least one mode");
    if (!(grid.dealias_fraction > 0.0 && grid.dealias_fraction <= 1.0))
        throw std::invalid_argument("dealias_fraction must lie in (0,1]");
    if (!poly.is_zero()) poly.validate();
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be nonnegative");
    if (snapshot_stride < 1) throw std::invalid_argument("snapshot_stride must be positive");
    if (contour_points < 4) throw std::invalid_argument("contour_points too small");
}

// ---------------------------------------------------------------------------

NonlinearOperator::NonlinearOperator(int modes, int samples, PolynomialSpec poly, bool gauged)
    : M_(modes), poly_(std::move(poly)), gauged_(gauged), tr_(samples) {
    int d = std::max(poly_.degree(), 1);
    if (samples < (d + 1) * M_ + 1)
        throw AliasingError("need at least " + std::to_string((d + 1) * M_ + 1) +
                            " samples for degree " + std::to_string(d) + " with " +
                            std::to_string(M_) + " modes");
    ik_.resize(static_cast<size_t>(M_ + 1));
    for (int k = 0; k <= M_; ++k) ik_[static_cast<size_t>(k)] = cplx(0.0, k);
}

double NonlinearOperator::apply(const SpectralField& f, SpectralField& out) const {
    if (f.modes() != M_) throw std::invalid_argument("field does not match operator grid");
    const int L = tr_.samples();
    out = SpectralField(M_);
    tr_.to_physical(f, u_);
    double mean_dp = 0.0;
    for (double x : u_) mean_dp += poly_.dP(x);
    mean_dp /= L;
    if (!gauged_) {
        w_.resize(static_cast<size_t>(L));
        for (int j = 0; j < L; ++j) w_[static_cast<size_t>(j)] = poly_.P(u_[static_cast<size_t>(j)]);
        tr_.coefficients(w_, M_, what_);
        for (int k = 1; k <= M_; ++k) out.pos(k) = -ik_[static_cast<size_t>(k)] * what_[static_cast<size_t>(k)];
    } else {
        tr_.to_physical(f, ik_, ux_);
        w_.resize(static_cast<size_t>(L));
        for (int j = 0; j < L; ++j) {
            size_t s = static_cast<size_t>(j);
            w_[s] = (poly_.dP(u_[s]) - mean_dp) * ux_[s];
        }
        tr_.coefficients(w_, M_, what_);
        for (int k = 1; k <= M_; ++k) out.pos(k) = -what_[static_cast<size_t>(k)];
    }
    return mean_dp;
}

SpectralField nonlinear_rhs(const SpectralField& f, const PolynomialSpec& poly, bool gauged) {
    Grid g{f.modes(), 2.0 / 3.0};
    return nonlinear_rhs(f, poly, gauged, g.samples(std::max(poly.degree(), 2)));
}

SpectralField nonlinear_rhs(const SpectralField& f, const PolynomialSpec& poly, bool gauged,
                            int samples) {
    NonlinearOperator op(f.modes(), samples, poly, gauged);
    SpectralField out;
    op.apply(f, out);
    return out;
}

// ---------------------------------------------------------------------------

EtdCoefficients etd_coefficients(cplx L, double h, int contour_points) {
    EtdCoefficients c;
    const cplx hL = h * L;
    c.E = std::exp(hL);
    c.E2 = std::exp(0.5 * hL);
    cplx q = 0.0, a = 0.0, b = 0.0, d = 0.0;
    for (int j = 0; j < contour_points; ++j) {
        double theta = 2.0 * std::numbers::pi * (j + 0.5) / contour_points;
        cplx z = hL + std::polar(1.0, theta);
        cplx ez = std::exp(z), z3 = z * z * z;
        q += (std::exp(0.5 * z) - 1.0) / z;
        a += (-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / z3;
        b += (2.0 + z + ez * (-2.0 + z)) / z3;
        d += (-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / z3;
    }
    const double w = h / contour_points;
    c.Q = q * w;
    c.f1 = a * w;
    c.f2 = b * w;
    c.f3 = d * w;
    return c;
}

std::array<cplx, 3> phi_functions(cplx z, int contour_points) {
    std::array<cplx, 3> acc{};
    for (int j = 0; j < contour_points; ++j) {
        double theta = 2.0 * std::numbers::pi * (j + 0.5) / contour_points;
        cplx t = z + std::polar(1.0, theta);
        cplx e = std::exp(t);
        cplx p1 = (e - 1.0) / t;
        cplx p2 = (p1 - 1.0) / t;
        cplx p3 = (p2 - 0.5) / t;
        acc[0] += p1;
        acc[1] += p2;
        acc[2] += p3;
    }
    for (auto& v : acc) v /= static_cast<double>(contour_points);
    return acc;
}

ExpRkCoefficients exprk_coefficients(cplx L, double h, int contour_points) {
    const cplx z = h * L;
    auto f = phi_functions(z, contour_points);
    auto g = phi_functions(0.5 * z, contour_points);
    ExpRkCoefficients c;
    c.E = std::exp(z);
    c.E2 = std::exp(0.5 * z);
    c.a21 = 0.5 * g[0];
    c.a32 = g[1];
    c.a31 = 0.5 * g[0] - g[1];
    c.a42 = f[1];
    c.a41 = f[0] - 2.0 * f[1];
    c.a52 = 0.5 * g[1] - f[2] + 0.25 * f[1] - 0.5 * g[2];
    c.a54 = 0.25 * g[1] - c.a52;
    c.a51 = 0.5 * g[0] - 2.0 * c.a52 - c.a54;
    c.b1 = f[0] - 3.0 * f[1] + 4.0 * f[2];
    c.b4 = -f[1] + 4.0 * f[2];
    c.b5 = 4.0 * f[1] - 8.0 * f[2];
    for (cplx* p : {&c.a21, &c.a31, &c.a32, &c.a41, &c.a42, &c.a51, &c.a52, &c.a54, &c.b1, &c.b4, &c.b5})
        *p *= h;
    return c;
}

namespace {

void check_state(const SpectralField& f, double guard, double t) {
    for (int k = 1; k <= f.modes(); ++k) {
        double a = std::abs(f.pos(k));
        if (!std::isfinite(a) || a > guard)
            throw BlowUpError("mode " + std::to_string(k) + " exceeded the overflow guard at t = " +
                                  std::to_string(t),
                              t);
    }
}

}  // namespace

Trajectory integrate(const SimConfig& cfg, const SpectralField& g) {
    cfg.validate();
    const int M = cfg.grid.num_modes;
    if (g.mean != 0.0) throw std::invalid_argument("initial data must be mean zero");
    SpectralField v = g.resized(M);

    Trajectory traj;
    traj.config = cfg;
    long long steps = std::llround(cfg.t_end / cfg.dt);
    if (steps < 1 && cfg.t_end > 0.0) steps = 1;
    const double h = steps > 0 ? cfg.t_end / static_cast<double>(steps) : cfg.dt;

    const bool ho = cfg.stepper == Stepper::exprk4_ho;
    std::vector<EtdCoefficients> cm(static_cast<size_t>(M + 1));
    std::vector<ExpRkCoefficients> co(static_cast<size_t>(M + 1));
    for (int k = 1; k <= M; ++k) {
        const cplx L(0.0, cfg.sym(k));
        if (ho)
            co[static_cast<size_t>(k)] = exprk_coefficients(L, h, cfg.contour_points);
        else
            cm[static_cast<size_t>(k)] = etd_coefficients(L, h, cfg.contour_points);
    }
    // the shift has L = 0
    const ExpRkCoefficients c0 = exprk_coefficients(0.0, h, cfg.contour_points);

    const bool linear = cfg.poly.is_zero();
    const int degree = std::max(cfg.poly.degree(), 2);
    std::unique_ptr<NonlinearOperator> op;
    if (!linear) op = std::make_unique<NonlinearOperator>(M, cfg.grid.samples(degree), cfg.poly, cfg.gauged);

    double shift = 0.0;
    traj.times.push_back(0.0);
    traj.states.push_back(v);
    traj.gauge_shift.push_back(0.0);

    SpectralField N1, N2, N3, N4, N5, U(M), A(M);
    auto ho_stage = [&](auto&& combine, SpectralField& out) {
        for (int k = 1; k <= M; ++k) U.pos(k) = combine(co[static_cast<size_t>(k)], k);
        return op->apply(U, out);
    };
    auto cm_stage = [&](auto&& combine, SpectralField& dst, SpectralField& out) {
        for (int k = 1; k <= M; ++k) dst.pos(k) = combine(cm[static_cast<size_t>(k)], k);
        return op->apply(dst, out);
    };
    for (long long n = 1; n <= steps; ++n) {
        if (linear) {
            for (int k = 1; k <= M; ++k)
                v.pos(k) *= ho ? co[static_cast<size_t>(k)].E : cm[static_cast<size_t>(k)].E;
        } else if (ho) {
            double s1 = op->apply(v, N1);
            ho_stage([&](const ExpRkCoefficients& e, int k) {
                return e.E2 * v.pos(k) + e.a21 * N1.pos(k);
            }, N2);
            ho_stage([&](const ExpRkCoefficients& e, int k) {
                return e.E2 * v.pos(k) + e.a31 * N1.pos(k) + e.a32 * N2.pos(k);
            }, N3);
            double s4 = ho_stage([&](const ExpRkCoefficients& e, int k) {
                return e.E * v.pos(k) + e.a41 * N1.pos(k) + e.a42 * (N2.pos(k) + N3.pos(k));
            }, N4);
            double s5 = ho_stage([&](const ExpRkCoefficients& e, int k) {
                return e.E2 * v.pos(k) + e.a51 * N1.pos(k) + e.a52 * (N2.pos(k) + N3.pos(k)) +
                       e.a54 * N4.pos(k);
            }, N5);
            for (int k = 1; k <= M; ++k) {
                const auto& e = co[static_cast<size_t>(k)];
                v.pos(k) = e.E * v.pos(k) + e.b1 * N1.pos(k) + e.b4 * N4.pos(k) + e.b5 * N5.pos(k);
            }
            // b2 = b3 = 0, so stages 2 and 3 do not feed the shift
            shift += (c0.b1 * s1 + c0.b4 * s4 + c0.b5 * s5).real();
        } else {
            double sv = op->apply(v, N1);
            double sa = cm_stage([&](const EtdCoefficients& e, int k) {
                return e.E2 * v.pos(k) + e.Q * N1.pos(k);
            }, A, N2);
            double sb = cm_stage([&](const EtdCoefficients& e, int k) {
                return e.E2 * v.pos(k) + e.Q * N2.pos(k);
            }, U, N3);
            double sc = cm_stage([&](const EtdCoefficients& e, int k) {
                return e.E2 * A.pos(k) + e.Q * (2.0 * N3.pos(k) - N1.pos(k));
            }, U, N4);
            for (int k = 1; k <= M; ++k) {
                const auto& e = cm[static_cast<size_t>(k)];
                v.pos(k) = e.E * v.pos(k) + e.f1 * N1.pos(k) + 2.0 * e.f2 * (N2.pos(k) + N3.pos(k)) +
                           e.f3 * N4.pos(k);
            }
            // with L = 0 the scheme is classical RK4
            shift += h * (sv + 2.0 * sa + 2.0 * sb + sc) / 6.0;
        }
        const double t = static_cast<double>(n) * h;
        check_state(v, cfg.overflow_guard, t);
        if (n % cfg.snapshot_stride == 0 || n == steps) {
            traj.times.push_back(t);
            traj.states.push_back(v);
            traj.gauge_shift.push_back(shift);
        }
    }
    return traj;
}

Trajectory gauge_transform(const Trajectory& traj, GaugeDirection dir) {
    Trajectory out = traj;
    const double sgn = dir == GaugeDirection::forward ? 1.0 : -1.0;
    for (size_t i = 0; i < out.states.size(); ++i) {
        SpectralField& f = out.states[i];
        const double c = traj.gauge_shift.at(i);
        for (int k = 1; k <= f.modes(); ++k) f.pos(k) *= std::polar(1.0, sgn * k * c);
    }
    return out;
}

Conserved conserved_quantities(const SpectralField& f, const PolynomialSpec& poly,
                               const DispersionSymbol& sym) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    Conserved q;
    q.mean = f.mean;
    double l2 = f.mean * f.mean, dirichlet = 0.0;
    for (int k = 1; k <= f.modes(); ++k) {
        double e = std::norm(f.pos(k));
        l2 += 2.0 * e;
        dirichlet += 2.0 * std::pow(static_cast<double>(k), sym.alpha) * e;
    }
    q.mass = two_pi * l2;
    double potential = 0.0;
    if (!poly.is_zero() && f.modes() > 0) {
        Grid g{f.modes(), 2.0 / 3.0};
        Transform tr(g.samples(poly.degree() + 1));
        auto u = tr.to_physical(f);
        for (double x : u) potential += poly.F(x);
        potential *= two_pi / static_cast<double>(u.size());
    }
    q.energy = 0.5 * two_pi * dirichlet - potential;
    return q;
}

}  // namespace dgbo
