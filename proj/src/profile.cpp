#include "iso/profile.hpp"

#include <algorithm>
#include <cmath>

#include "iso/density.hpp"

namespace iso {

namespace {

using detail::s_kappa_closed;

struct SideIntegrals {
    double left_ratio;   // int_0^a s(D-x)^{N-1} dx / s(D-a)^{N-1}
    double right_ratio;  // int_a^D s(x)^{N-1} dx / s(a)^{N-1}
};

SideIntegrals side_integrals(const CurvatureParams& p, double a,
                             const Tolerance& tol) {
    const double kappa = p.kappa();
    const double n1 = p.N - 1.0;
    auto integrand = [kappa, n1](double u) {
        return std::pow(s_kappa_closed(kappa, u), n1);
    };
    const double left = integrate(integrand, p.D - a, p.D, tol);
    const double right = integrate(integrand, a, p.D, tol);
    return {left / std::pow(s_kappa_closed(kappa, p.D - a), n1),
            right / std::pow(s_kappa_closed(kappa, a), n1)};
}

// golden-section minimization of phi over [lo, hi] down to bracket width w
double golden_min(const std::function<double(double)>& phi, double lo, double hi,
                  double width, double* best_val) {
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = hi - kInvPhi * (hi - lo);
    double x2 = lo + kInvPhi * (hi - lo);
    double f1 = phi(x1), f2 = phi(x2);
    while (hi - lo > width) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kInvPhi * (hi - lo);
            f1 = phi(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kInvPhi * (hi - lo);
            f2 = phi(x2);
        }
    }
    if (f1 <= f2) {
        *best_val = f1;
        return x1;
    }
    *best_val = f2;
    return x2;
}

}  // namespace

double volume_of_a(const CurvatureParams& p, double a, const Tolerance& tol) {
    if (!(a > 0.0 && a < p.D))
        throw std::domain_error("volume_of_a: a outside (0, D)");
    const auto si = side_integrals(p, a, tol);
    return si.left_ratio / (si.left_ratio + si.right_ratio);
}

double a_of_volume(const CurvatureParams& p, double v, const Tolerance& tol) {
    if (!(v > 0.0 && v < 1.0))
        throw std::invalid_argument("a_of_volume: v outside (0, 1)");
    tol.validate();
    const double eps = std::min(tol.root_tol, 1e-6 * p.D);
    const double lo = eps;
    const double hi = p.D - eps;
    auto g = [&](double a) { return volume_of_a(p, a, tol); };
    // the map is onto (0, 1); clamp the measure-zero sliver beyond the bracket
    if (v <= g(lo)) return lo;
    if (v >= g(hi)) return hi;
    return invert_monotone(g, v, lo, hi, tol);
}

double volume_envelope_ratio(const CurvatureParams& p, double a,
                             const Tolerance& tol) {
    if (!(a >= 0.0 && a < p.D))
        throw std::domain_error("volume_envelope_ratio: a outside [0, D)");
    if (a == 0.0) return 0.0;
    return side_integrals(p, a, tol).left_ratio;
}

ProfilePoint profile_restricted(const CurvatureParams& p, double v,
                                const Tolerance& tol) {
    const double a = a_of_volume(p, v, tol);
    return {v, a, lower_envelope(p, a, tol), std::nullopt};
}

ProfilePoint profile_sharp(const CurvatureParams& p, double v,
                           const Tolerance& tol) {
    if (p.K <= 0.0) return profile_restricted(p, v, tol);

    // coarse scan over log-spaced sub-diameters, then golden-section
    // refinement around the best bracket; convexity in D' is not relied on
    constexpr int kScan = 64;
    const double delta = p.D / 1024.0;
    auto value_at = [&](double dprime) {
        return profile_restricted(CurvatureParams(p.K, p.N, dprime), v, tol).value;
    };

    std::vector<double> ds(kScan), vals(kScan);
    const double log_ratio = std::log(delta / p.D);
    for (int i = 0; i < kScan; ++i) {
        ds[i] = (i + 1 == kScan)
                    ? p.D
                    : p.D * std::exp(log_ratio * static_cast<double>(kScan - 1 - i) /
                                     (kScan - 1));
        vals[i] = value_at(ds[i]);
    }
    const auto best =
        static_cast<int>(std::min_element(vals.begin(), vals.end()) - vals.begin());

    const double lo = ds[std::max(0, best - 1)];
    const double hi = ds[std::min(kScan - 1, best + 1)];
    double refined_val = 0.0;
    const double width = std::max(tol.opt_tol, 1e-12 * p.D);
    const double refined_d = golden_min(value_at, lo, hi, width, &refined_val);

    double d_bar = ds[best];
    double val = vals[best];
    if (refined_val < val) {
        d_bar = refined_d;
        val = refined_val;
    }
    const double a = a_of_volume(CurvatureParams(p.K, p.N, d_bar), v, tol);
    return {v, a, val, d_bar};
}

ProfileTable profile_table(const CurvatureParams& p,
                           const std::vector<double>& v_grid, ProfileMode mode,
                           const Tolerance& tol) {
    for (std::size_t i = 0; i < v_grid.size(); ++i) {
        if (!(v_grid[i] > 0.0 && v_grid[i] < 1.0))
            throw std::invalid_argument("profile_table: v outside (0, 1)");
        if (i > 0 && !(v_grid[i] > v_grid[i - 1]))
            throw std::invalid_argument("profile_table: v_grid must be sorted and distinct");
    }
    ProfileTable table{p, tol, mode, {}};
    table.rows.reserve(v_grid.size());
    for (double v : v_grid)
        table.rows.push_back(mode == ProfileMode::restricted
                                 ? profile_restricted(p, v, tol)
                                 : profile_sharp(p, v, tol));
    return table;
}

}  // namespace iso
