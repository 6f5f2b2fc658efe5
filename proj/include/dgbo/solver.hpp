#pragma once

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgbo/spectral.hpp"

namespace dgbo {

// P(x) = sum_{k=1}^d c_k x^k, stored as coeffs[k-1] = c_k.
struct PolynomialSpec {
    std::vector<double> coeffs;

    int degree() const;
    void validate() const;  // d >= 2, c_d != 0
    bool is_zero() const;
    double P(double x) const;
    double dP(double x) const;
    double F(double x) const;  // antiderivative with F(0) = 0
};

enum class Stepper { etdrk4, exprk4_ho };

struct SimConfig {
    Grid grid;
    DispersionSymbol sym;
    PolynomialSpec poly;
    bool gauged = true;
    double dt = 1e-4;
    double t_end = 1.0;
    int snapshot_stride = 100;
    int contour_points = 32;
    Stepper stepper = Stepper::etdrk4;
    double overflow_guard = 1e6;

    void validate() const;
};

struct Trajectory {
    SimConfig config;
    std::vector<double> times;
    std::vector<SpectralField> states;
    std::vector<double> gauge_shift;  // c(t) = int_0^t mean(P'(u)) dt'
};

class AliasingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BlowUpError : public std::runtime_error {
public:
    BlowUpError(const std::string& what, double t) : std::runtime_error(what), time(t) {}
    double time;
};

// -dx P(u) (ungauged) or -P(P'(u)) dx u (gauged), truncated to the field's modes.
class NonlinearOperator {
public:
    NonlinearOperator(int modes, int samples, PolynomialSpec poly, bool gauged);
    // writes the right-hand side into `out`; returns the mean of P'(u)
    double apply(const SpectralField& f, SpectralField& out) const;
    int samples() const { return tr_.samples(); }

private:
    int M_;
    PolynomialSpec poly_;
    bool gauged_;
    Transform tr_;
    std::vector<cplx> ik_;
    mutable std::vector<double> u_, ux_, w_;
    mutable std::vector<cplx> what_;
};

SpectralField nonlinear_rhs(const SpectralField& f, const PolynomialSpec& poly, bool gauged);
// explicit sample count; throws AliasingError when it is too small for deg P
SpectralField nonlinear_rhs(const SpectralField& f, const PolynomialSpec& poly, bool gauged,
                            int samples);

// ETDRK4 (Cox-Matthews, contour-averaged coefficients) for one linear rate L at step h.
struct EtdCoefficients {
    cplx E, E2, Q, f1, f2, f3;
};
EtdCoefficients etd_coefficients(cplx L, double h, int contour_points);

// phi_1..phi_3 by averaging over a circle of radius 1 around z
std::array<cplx, 3> phi_functions(cplx z, int contour_points);

// Five-stage exponential Runge-Kutta of stiff order four (Hochbruck-Ostermann
// tableau, c = 0, 1/2, 1/2, 1, 1/2) for one linear rate L at step h.
// The a's and b's already carry the factor h.
struct ExpRkCoefficients {
    cplx E, E2;
    cplx a21, a31, a32, a41, a42, a51, a52, a54, b1, b4, b5;
};
ExpRkCoefficients exprk_coefficients(cplx L, double h, int contour_points);

Trajectory integrate(const SimConfig& cfg, const SpectralField& g);

enum class GaugeDirection { forward, inverse };
Trajectory gauge_transform(const Trajectory& traj, GaugeDirection dir);

struct Conserved {
    double mean = 0.0, mass = 0.0, energy = 0.0;
};
Conserved conserved_quantities(const SpectralField& f, const PolynomialSpec& poly,
                               const DispersionSymbol& sym);

}  // namespace dgbo
