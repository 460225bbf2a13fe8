#pragma once

#include <functional>
#include <stdexcept>

namespace iso {

/// Thrown when an iterative numerical routine runs out of budget.
struct NumericsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown by invert_monotone when the target is not bracketed.
struct BracketError : NumericsError {
    using NumericsError::NumericsError;
};

/// Curvature lower bound K, dimension upper bound N and diameter D.
///
/// N is dimensionless with N > 1, D is a length with D > 0.  For K > 0 the
/// diameter cannot exceed pi*sqrt((N-1)/K); equality is the rigid case where
/// the normalized sin^{N-1} density is forced.
struct CurvatureParams {
    double K;
    double N;
    double D;

    CurvatureParams(double K, double N, double D);

    /// Comparison curvature K/(N-1) entering every s-function argument.
    [[nodiscard]] double kappa() const { return K / (N - 1.0); }

    /// Largest admissible diameter (+inf unless K > 0).
    [[nodiscard]] static double max_diameter(double K, double N);
};

/// Absolute accuracy targets shared by the numerical routines.
struct Tolerance {
    double quad_tol = 1e-10;  // quadrature, absolute
    double root_tol = 1e-10;  // root finding, in the independent variable
    double opt_tol = 1e-9;    // scalar minimization bracket width

    void validate() const;
};

/// Extended nonnegative real: either a finite value or +infinity.
///
/// The sigma/tau comparison coefficients legally evaluate to +infinity past
/// the conjugate threshold; returning a tagged value forces callers to handle
/// that branch instead of silently propagating a floating special.
class ExtendedReal {
public:
    [[nodiscard]] static ExtendedReal finite(double v) { return {v, true}; }
    [[nodiscard]] static ExtendedReal infinite() { return {0.0, false}; }

    [[nodiscard]] bool is_finite() const { return finite_; }

    /// Finite value; throws std::logic_error on the infinite branch.
    [[nodiscard]] double value() const;

private:
    ExtendedReal(double v, bool finite) : v_(v), finite_(finite) {}
    double v_;
    bool finite_;
};

/// Comparison sine:
///
///   s_kappa(theta) = sin(sqrt(kappa) theta)/sqrt(kappa)    kappa > 0
///                  = theta                                 kappa = 0
///                  = sinh(sqrt(-kappa) theta)/sqrt(-kappa) kappa < 0
///
/// Defined for theta >= 0, and theta < pi/sqrt(kappa) when kappa > 0.
/// A unified series keeps the value continuous across kappa = 0.
[[nodiscard]] double s_kappa(double kappa, double theta);

/// Distortion coefficient sigma^{(t)}_{K,Ncal}(theta):
/// sin(t theta r)/sin(theta r) with r = sqrt(K/Ncal) for K > 0 (sinh for
/// K < 0), t for K = 0 or Ncal = +inf; equals t at theta = 0 and +infinity
/// once theta reaches pi/r.
[[nodiscard]] ExtendedReal sigma_coeff(double t, double K, double Ncal, double theta);

/// tau^{(t)}_{K,N}(theta) = t^{1/N} sigma^{(t)}_{K,N-1}(theta)^{1-1/N};
/// for N = 1 it is t when K <= 0 and +infinity when K > 0.
[[nodiscard]] ExtendedReal tau_coeff(double t, double K, double N, double theta);

/// Adaptive quadrature of a continuous f over [a, b] to absolute accuracy
/// tol.quad_tol.  Fixed 15-point Gauss-Legendre rule with interval bisection;
/// throws NumericsError when the refinement budget is exhausted.
[[nodiscard]] double integrate(const std::function<double(double)>& f, double a,
                               double b, const Tolerance& tol = {});

/// Solves g(x) = target for a continuous strictly increasing g on [lo, hi].
/// Bracketed bisection with secant acceleration; iterates until both the
/// bracket width and the residual |g(x) - target| fall below tol.root_tol.
/// Throws BracketError if target lies outside [g(lo), g(hi)].
[[nodiscard]] double invert_monotone(const std::function<double(double)>& g,
                                     double target, double lo, double hi,
                                     const Tolerance& tol = {});

namespace detail {

/// s_kappa on the closed admissible interval: for kappa > 0 permits theta up
/// to pi/sqrt(kappa) (inclusive, with a little float slack) and clamps the
/// result at 0.  Evaluating model densities at the domain ends of the rigid
/// case K > 0, D = pi*sqrt((N-1)/K) needs exactly this closure.
[[nodiscard]] double s_kappa_closed(double kappa, double theta);

}  // namespace detail

}  // namespace iso
