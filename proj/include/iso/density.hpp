#pragma once

#include <cstdint>
#include <vector>

#include "iso/kernel.hpp"

namespace iso {

/// Sharp pointwise lower envelope for unit-mass admissible densities on
/// [0, D]:
///
///   f(x) = [ int_0^x (s(D-y)/s(D-x))^{N-1} dy
///          + int_x^D (s(y)/s(x))^{N-1} dy ]^{-1},   s = s_{K/(N-1)},
///
/// strictly positive and unimodal-symmetric inside, zero at x = 0 and x = D.
[[nodiscard]] double lower_envelope(const CurvatureParams& p, double x,
                                    const Tolerance& tol = {});

/// Extremal model density with bending point a in (0, D):
///
///   h_a(x) = f(a) (s(D-x)/s(D-a))^{N-1}   for x <= a,
///            f(a) (s(x)/s(a))^{N-1}       for x >= a.
///
/// Integrates to 1 over [0, D], touches the lower envelope exactly at a.
class ModelDensity {
public:
    ModelDensity(CurvatureParams params, double a, const Tolerance& tol = {});

    /// Pointwise value; throws std::domain_error for x outside [0, D].
    [[nodiscard]] double operator()(double x) const;

    [[nodiscard]] const CurvatureParams& params() const { return params_; }
    [[nodiscard]] double bending_point() const { return a_; }
    /// Value at the bending point, equal to the lower envelope there.
    [[nodiscard]] double bend_value() const { return f_a_; }

private:
    CurvatureParams params_;
    double a_;
    double c_left_;   // f(a)/s(D-a)^{N-1}
    double c_right_;  // f(a)/s(a)^{N-1}
    double f_a_;
};

/// Candidate density sampled on the uniform grid x_j = j D/(M-1), j < M,
/// evaluated between nodes by linear interpolation.  Unit mass is an
/// invariant up to the stated normalization tolerance on the trapezoidal sum.
class TabulatedDensity {
public:
    TabulatedDensity(double D, std::vector<double> values, double norm_tol = 1e-4);

    /// Samples a callable at M uniform nodes spanning [0, D].
    static TabulatedDensity sample(const std::function<double(double)>& f,
                                   double D, int points, double norm_tol = 1e-4);

    /// Linear interpolation; throws std::domain_error outside [0, D].
    [[nodiscard]] double operator()(double x) const;

    [[nodiscard]] double domain() const { return D_; }
    [[nodiscard]] int size() const { return static_cast<int>(values_.size()); }
    [[nodiscard]] double spacing() const { return dx_; }
    [[nodiscard]] double node(int j) const { return j + 1 == size() ? D_ : j * dx_; }
    [[nodiscard]] const std::vector<double>& values() const { return values_; }
    [[nodiscard]] double max_value() const;
    [[nodiscard]] double trapezoid_mass() const;

private:
    double D_;
    double dx_;
    std::vector<double> values_;
};

enum class CheckKind { mcp_lower, mcp_upper, cd };

/// Outcome of a validator sweep.  worst_violation is the signed margin of
/// the tightest inequality after normalization (negative means violated);
/// witness holds the grid points achieving it (x0, x1 and, for CD checks,
/// the intermediate point).
struct ValidationReport {
    bool passed = true;
    double worst_violation = 0.0;
    double witness_x0 = 0.0;
    double witness_x1 = 0.0;
    double witness_xm = 0.0;  // CD only; 0 otherwise
    CheckKind witness_kind = CheckKind::mcp_lower;
    long checks_run = 0;
    double check_tol = 0.0;
};

/// Two-sided ratio test on all grid pairs x0 <= x1:
///
///   (s(D-x1)/s(D-x0))^{N-1} <= h(x1)/h(x0) <= (s(x1)/s(x0))^{N-1}.
///
/// Margins are normalized by h(x0); 0/0 endpoint bounds are vacuous and
/// skipped.  Passes iff the worst margin is >= -check_tol.
[[nodiscard]] ValidationReport validate_mcp(const TabulatedDensity& h,
                                            const CurvatureParams& p,
                                            double check_tol = 1e-9);

/// Distorted-concavity test of h^{1/(N-1)} on grid triples: for nodes
/// x0 < xm < x1 with t = (xm-x0)/(x1-x0),
///
///   h(xm)^{1/(N-1)} >= sigma^{(1-t)}(x1-x0) h(x0)^{1/(N-1)}
///                    + sigma^{(t)}(x1-x0)  h(x1)^{1/(N-1)}.
///
/// Up to 17 interior nodes are tested per pair; keeping the intermediate
/// point on the grid avoids interpolation bias in the margins.  Margins are
/// normalized by the left-hand side.
[[nodiscard]] ValidationReport validate_cd(const TabulatedDensity& h,
                                           const CurvatureParams& p,
                                           double check_tol = 1e-9);

/// Uniform upper bound for unit-mass admissible densities on [0, D]:
/// N/D for K >= 0, else 1/(D int_0^1 sigma^{(t)}_{K,N-1}(D)^{N-1} dt).
[[nodiscard]] double sup_bound(const CurvatureParams& p, const Tolerance& tol = {});

/// Normalized convex combination of k model densities with bending points
/// and weights drawn deterministically from the seed.  The admissibility
/// inequalities are ratio constraints closed under nonnegative combinations,
/// so the output always passes validate_mcp.
[[nodiscard]] TabulatedDensity random_mcp_density(const CurvatureParams& p,
                                                  std::uint64_t seed, int k,
                                                  int points,
                                                  const Tolerance& tol = {});

}  // namespace iso
