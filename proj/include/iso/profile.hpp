#pragma once

#include <optional>
#include <vector>

#include "iso/kernel.hpp"

namespace iso {

/// One row of a profile table: volume fraction v, bending point of the
/// optimal model density, profile value there, and (sharp mode with K > 0
/// only) the minimizing sub-diameter.
struct ProfilePoint {
    double v = 0.0;
    double a = 0.0;
    double value = 0.0;
    std::optional<double> d_bar;
};

enum class ProfileMode { restricted, sharp };

struct ProfileTable {
    CurvatureParams params;
    Tolerance tol;
    ProfileMode mode = ProfileMode::restricted;
    std::vector<ProfilePoint> rows;
};

/// Mass of the model density with bending point a left of a:
/// v(a) = f(a)/s(D-a)^{N-1} * int_0^a s(D-x)^{N-1} dx, a strictly increasing
/// bijection of (0, D) onto (0, 1).
[[nodiscard]] double volume_of_a(const CurvatureParams& p, double a,
                                 const Tolerance& tol = {});

/// Inverse of volume_of_a: the unique bending point whose model density puts
/// mass v on its left.  Satisfies a(1-v) = D - a(v).
[[nodiscard]] double a_of_volume(const CurvatureParams& p, double v,
                                 const Tolerance& tol = {});

/// v(a)/f(a) = int_0^a (s(D-x)/s(D-a))^{N-1} dx, strictly increasing on
/// [0, D) with value 0 at a = 0; throws std::domain_error at a = D.
[[nodiscard]] double volume_envelope_ratio(const CurvatureParams& p, double a,
                                           const Tolerance& tol = {});

/// Optimal perimeter over unit-mass admissible densities supported on
/// exactly [0, D]: the lower envelope evaluated at a_of_volume(v).
[[nodiscard]] ProfilePoint profile_restricted(const CurvatureParams& p, double v,
                                              const Tolerance& tol = {});

/// Optimal perimeter with the support length free to shrink below D.  For
/// K <= 0 this coincides with the restricted profile; for K > 0 the value is
/// minimized over sub-diameters D' in (0, D] (coarse log-spaced scan plus
/// golden-section refinement) and d_bar reports the best D' found.
[[nodiscard]] ProfilePoint profile_sharp(const CurvatureParams& p, double v,
                                         const Tolerance& tol = {});

/// Tabulates one ProfilePoint per entry of v_grid (sorted, distinct,
/// inside (0, 1)).
[[nodiscard]] ProfileTable profile_table(const CurvatureParams& p,
                                         const std::vector<double>& v_grid,
                                         ProfileMode mode,
                                         const Tolerance& tol = {});

}  // namespace iso
