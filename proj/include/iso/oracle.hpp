#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iso/density.hpp"
#include "iso/kernel.hpp"

namespace iso {

/// Thrown when no grid set meets the requested volume window.
struct InfeasibleVolumeError : NumericsError {
    using NumericsError::NumericsError;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Ordered union of disjoint closed intervals inside [0, D].
class IntervalSet {
public:
    IntervalSet() = default;
    IntervalSet(std::vector<Interval> intervals, double D);

    [[nodiscard]] const std::vector<Interval>& intervals() const { return intervals_; }
    [[nodiscard]] double domain() const { return D_; }
    [[nodiscard]] bool empty() const { return intervals_.empty(); }

private:
    std::vector<Interval> intervals_;
    double D_ = 0.0;
};

/// Non-owning view of a density on [0, D]; adapts model densities,
/// tabulated densities, or any callable.
class DensityRef {
public:
    DensityRef(const ModelDensity& m);
    DensityRef(const TabulatedDensity& t);
    DensityRef(double D, std::function<double(double)> f);

    [[nodiscard]] double operator()(double x) const { return f_(x); }
    [[nodiscard]] double domain() const { return D_; }

private:
    double D_;
    std::function<double(double)> f_;
};

/// Perimeter of an interval union: the density summed over boundary points
/// interior to (0, D).  Boundary points at 0 or D contribute nothing.
[[nodiscard]] double perimeter(const DensityRef& h, const IntervalSet& set);

/// Mass of the union under the density, by quadrature per interval.
[[nodiscard]] double volume(const DensityRef& h, const IntervalSet& set,
                            const Tolerance& tol = {});

/// Result of one constrained minimization run.
struct BruteForceResult {
    double min_perimeter = 0.0;
    IntervalSet witness;
    double witness_volume = 0.0;
    int grid = 0;
    double vol_tol = 0.0;
};

/// Minimal perimeter over unions of up to max_intervals intervals with
/// endpoints on a uniform grid of `grid` cells, keeping candidates whose
/// grid volume lies within vol_tol of v.  Exhaustive for max_intervals <= 2;
/// beyond that, seeded random restarts with local endpoint moves extend the
/// search.  vol_tol <= 0 selects the default 2 * sup(h) * spacing.  Throws
/// InfeasibleVolumeError when the window cannot be met.
[[nodiscard]] BruteForceResult min_perimeter_bruteforce(
    const DensityRef& h, double v, int max_intervals, int grid,
    double vol_tol = 0.0, std::uint64_t seed = 0);

/// Aggregate of a sharpness run: the model density at the optimal bending
/// point must match the restricted profile value, and random admissible
/// densities must not beat it beyond the discretization tolerance.
struct OracleReport {
    double min_perimeter = 0.0;
    IntervalSet witness;
    double reference = 0.0;
    double margin = 0.0;
    double model_abs_err = 0.0;
    int trials = 0;
    std::uint64_t seed = 0;
    int grid = 0;
    double vol_tol = 0.0;
    double pass_tol = 0.0;
    bool passed = false;
};

struct SharpnessOptions {
    double pass_tol = 5e-3;
    double vol_tol = 0.0;  // <= 0: brute-force default
    int density_points = 401;
    Tolerance tol{};
};

/// Runs min_perimeter_bruteforce on the model density pinned at a(v) and on
/// `trials` generated admissible densities; reports the worst margin against
/// the restricted profile value.
[[nodiscard]] OracleReport verify_sharpness(const CurvatureParams& p, double v,
                                            int trials, std::uint64_t seed,
                                            int grid,
                                            const SharpnessOptions& opts = {});

struct RigidityEntry {
    std::string label;
    double min_perimeter = 0.0;
    double gap = 0.0;           // min_perimeter - reference
    double dist_to_model_v = 0.0;     // sup distance to the model at a(v)
    double dist_to_model_1mv = 0.0;   // sup distance to the model at a(1-v)
    bool near_optimal = false;  // gap <= eps
};

struct RigidityReport {
    double reference = 0.0;
    double eps = 0.0;
    std::vector<RigidityEntry> entries;
};

/// Empirical equality-case probe: densities whose brute-force minimum comes
/// within eps of the profile value are measured against the two extremal
/// model densities.  Distances are reported raw; no stability rate is
/// asserted.
[[nodiscard]] RigidityReport rigidity_probe(const CurvatureParams& p, double v,
                                            double eps, int trials,
                                            std::uint64_t seed, int grid = 512,
                                            int density_points = 401,
                                            const Tolerance& tol = {});

}  // namespace iso
