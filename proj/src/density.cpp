#include "iso/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

namespace iso {

namespace {

using detail::s_kappa_closed;

// int_{t0}^{t1} s_kappa(u)^{N-1} du
double s_pow_integral(double kappa, double n1, double t0, double t1,
                      const Tolerance& tol) {
    return integrate(
        [kappa, n1](double u) { return std::pow(s_kappa_closed(kappa, u), n1); },
        t0, t1, tol);
}

double uniform01(std::mt19937_64& eng) {
    // explicit mapping keeps draws identical across standard libraries
    double u;
    do {
        u = static_cast<double>(eng() >> 11) * 0x1.0p-53;
    } while (u == 0.0);
    return u;
}

}  // namespace

double lower_envelope(const CurvatureParams& p, double x, const Tolerance& tol) {
    if (!(x >= 0.0 && x <= p.D))
        throw std::domain_error("lower_envelope: x outside [0, D]");
    if (x == 0.0 || x == p.D) return 0.0;

    const double kappa = p.kappa();
    const double n1 = p.N - 1.0;
    const double sd = std::pow(s_kappa_closed(kappa, p.D - x), n1);
    const double su = std::pow(s_kappa_closed(kappa, x), n1);
    const double left = s_pow_integral(kappa, n1, p.D - x, p.D, tol);   // int_0^x s(D-y)^{N-1}
    const double right = s_pow_integral(kappa, n1, x, p.D, tol);        // int_x^D s(y)^{N-1}
    return 1.0 / (left / sd + right / su);
}

ModelDensity::ModelDensity(CurvatureParams params, double a, const Tolerance& tol)
    : params_(params), a_(a) {
    if (!(a > 0.0 && a < params_.D))
        throw std::domain_error("ModelDensity: bending point outside (0, D)");

    const double kappa = params_.kappa();
    const double n1 = params_.N - 1.0;
    const double sla = std::pow(s_kappa_closed(kappa, params_.D - a), n1);
    const double sra = std::pow(s_kappa_closed(kappa, a), n1);
    const double left = s_pow_integral(kappa, n1, params_.D - a, params_.D, tol);
    const double right = s_pow_integral(kappa, n1, a, params_.D, tol);

    // the three forms share the same denominator; each is arranged so the
    // small s-power divides its own branch only
    c_left_ = 1.0 / (left + sla * (right / sra));
    c_right_ = 1.0 / (sra * (left / sla) + right);
    f_a_ = 1.0 / (left / sla + right / sra);
}

double ModelDensity::operator()(double x) const {
    if (!(x >= 0.0 && x <= params_.D))
        throw std::domain_error("ModelDensity: x outside [0, D]");
    const double kappa = params_.kappa();
    const double n1 = params_.N - 1.0;
    if (x < a_)
        return c_left_ * std::pow(s_kappa_closed(kappa, params_.D - x), n1);
    return c_right_ * std::pow(s_kappa_closed(kappa, x), n1);
}

TabulatedDensity::TabulatedDensity(double D, std::vector<double> values,
                                   double norm_tol)
    : D_(D), values_(std::move(values)) {
    if (!(D_ > 0.0)) throw std::invalid_argument("TabulatedDensity: require D > 0");
    if (values_.size() < 3)
        throw std::invalid_argument("TabulatedDensity: require at least 3 samples");
    for (double v : values_)
        if (!(std::isfinite(v) && v >= 0.0))
            throw std::invalid_argument("TabulatedDensity: values must be finite and >= 0");
    dx_ = D_ / static_cast<double>(values_.size() - 1);
    const double mass = trapezoid_mass();
    if (!(std::abs(mass - 1.0) <= norm_tol))
        throw std::invalid_argument("TabulatedDensity: trapezoidal mass is not 1");
}

TabulatedDensity TabulatedDensity::sample(const std::function<double(double)>& f,
                                          double D, int points, double norm_tol) {
    if (points < 3)
        throw std::invalid_argument("TabulatedDensity::sample: require points >= 3");
    std::vector<double> v(static_cast<std::size_t>(points));
    const double dx = D / static_cast<double>(points - 1);
    for (int j = 0; j < points; ++j)
        v[static_cast<std::size_t>(j)] = f(j + 1 == points ? D : j * dx);
    return TabulatedDensity(D, std::move(v), norm_tol);
}

double TabulatedDensity::operator()(double x) const {
    if (!(x >= 0.0 && x <= D_))
        throw std::domain_error("TabulatedDensity: x outside [0, D]");
    const auto m = static_cast<std::size_t>(values_.size() - 1);
    const double pos = x / dx_;
    auto i = static_cast<std::size_t>(pos);
    if (i >= m) return values_[m];
    const double w = pos - static_cast<double>(i);
    return values_[i] * (1.0 - w) + values_[i + 1] * w;
}

double TabulatedDensity::max_value() const {
    return *std::max_element(values_.begin(), values_.end());
}

double TabulatedDensity::trapezoid_mass() const {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < values_.size(); ++i)
        acc += 0.5 * (values_[i] + values_[i + 1]);
    return acc * dx_;
}

ValidationReport validate_mcp(const TabulatedDensity& h, const CurvatureParams& p,
                              double check_tol) {
    if (std::abs(h.domain() - p.D) > 1e-12 * std::max(1.0, p.D))
        throw std::invalid_argument("validate_mcp: density domain differs from D");

    const int m = h.size();
    const double kappa = p.kappa();
    const double n1 = p.N - 1.0;
    const auto& hv = h.values();

    std::vector<double> s_up(m), s_down(m), pow_up(m), pow_down(m);
    double s_scale = 0.0;
    for (int j = 0; j < m; ++j) {
        s_up[j] = s_kappa_closed(kappa, h.node(j));
        s_down[j] = s_kappa_closed(kappa, p.D - h.node(j));
        pow_up[j] = std::pow(s_up[j], n1);
        pow_down[j] = std::pow(s_down[j], n1);
        s_scale = std::max({s_scale, s_up[j], s_down[j]});
    }
    const double suph = h.max_value();
    const double s_skip = 1e-7 * s_scale;
    const double h_skip = 1e-7 * suph;
    const double h_tiny = 1e-13 * suph;

    ValidationReport rep;
    rep.check_tol = check_tol;
    rep.worst_violation = std::numeric_limits<double>::infinity();

    auto record = [&](double margin, int i, int j, CheckKind kind) {
        ++rep.checks_run;
        if (margin < rep.worst_violation) {
            rep.worst_violation = margin;
            rep.witness_x0 = h.node(i);
            rep.witness_x1 = h.node(j);
            rep.witness_xm = 0.0;
            rep.witness_kind = kind;
        }
    };

    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const double h0 = hv[i], h1 = hv[j];

            // lower bound: h1 * sd[i] >= h0 * sd[j]
            if (s_down[i] <= s_skip) {
                // infinite ratio bound: vacuous 0/0 if h0 also vanishes
                if (h0 > h_skip) record(-1.0, i, j, CheckKind::mcp_lower);
            } else if (h0 <= h_tiny) {
                const double res = h1 * pow_down[i] - h0 * pow_down[j];
                if (res < -h_tiny * pow_down[i])
                    record(res / (h1 * pow_down[i] + h0 * pow_down[j]), i, j,
                           CheckKind::mcp_lower);
            } else {
                record((h1 * pow_down[i] - h0 * pow_down[j]) / (h0 * pow_down[i]),
                       i, j, CheckKind::mcp_lower);
            }

            // upper bound: h1 * su[i] <= h0 * su[j]
            if (s_up[i] <= s_skip) {
                // bound is +infinity, nothing to check
            } else if (h0 <= h_tiny) {
                const double res = h0 * pow_up[j] - h1 * pow_up[i];
                if (res < -h_tiny * pow_up[i])
                    record(res / (h0 * pow_up[j] + h1 * pow_up[i]), i, j,
                           CheckKind::mcp_upper);
            } else {
                record((h0 * pow_up[j] - h1 * pow_up[i]) / (h0 * pow_up[i]), i, j,
                       CheckKind::mcp_upper);
            }
        }
    }

    if (rep.checks_run == 0) rep.worst_violation = 0.0;
    rep.passed = rep.worst_violation >= -check_tol;
    return rep;
}

ValidationReport validate_cd(const TabulatedDensity& h, const CurvatureParams& p,
                             double check_tol) {
    if (std::abs(h.domain() - p.D) > 1e-12 * std::max(1.0, p.D))
        throw std::invalid_argument("validate_cd: density domain differs from D");

    const int m = h.size();
    const double inv_n1 = 1.0 / (p.N - 1.0);
    const auto& hv = h.values();

    std::vector<double> hp(m);
    for (int j = 0; j < m; ++j) hp[j] = std::pow(hv[j], inv_n1);
    const double scale = *std::max_element(hp.begin(), hp.end());
    const double floor = 1e-12 * scale;

    constexpr int kMaxInterior = 17;

    ValidationReport rep;
    rep.check_tol = check_tol;
    rep.worst_violation = std::numeric_limits<double>::infinity();

    auto record = [&](double margin, int i, int j, int mid) {
        ++rep.checks_run;
        if (margin < rep.worst_violation) {
            rep.worst_violation = margin;
            rep.witness_x0 = h.node(i);
            rep.witness_x1 = h.node(j);
            rep.witness_xm = h.node(mid);
            rep.witness_kind = CheckKind::cd;
        }
    };

    for (int i = 0; i < m; ++i) {
        for (int j = i + 2; j < m; ++j) {
            const double theta = h.node(j) - h.node(i);
            const int interior = j - i - 1;
            const int take = std::min(interior, kMaxInterior);
            for (int r = 1; r <= take; ++r) {
                const int mid =
                    i + std::max(1, std::min(interior,
                                             (r * (j - i)) / (take + 1)));
                const double t = (h.node(mid) - h.node(i)) / theta;
                const ExtendedReal c0 = sigma_coeff(1.0 - t, p.K, p.N - 1.0, theta);
                const ExtendedReal c1 = sigma_coeff(t, p.K, p.N - 1.0, theta);

                double rhs = 0.0;
                bool violated = false;
                for (const auto& [c, hval] : {std::pair{c0, hp[i]}, {c1, hp[j]}}) {
                    if (c.is_finite())
                        rhs += c.value() * hval;
                    else if (hval > floor)
                        violated = true;  // infinite coefficient on positive mass
                }
                if (violated) {
                    record(-1.0, i, j, mid);
                    continue;
                }
                const double lhs = hp[mid];
                if (lhs >= floor)
                    record((lhs - rhs) / lhs, i, j, mid);
                else if (rhs > lhs + floor)
                    record((lhs - rhs) / rhs, i, j, mid);
            }
        }
    }

    if (rep.checks_run == 0) rep.worst_violation = 0.0;
    rep.passed = rep.worst_violation >= -check_tol;
    return rep;
}

double sup_bound(const CurvatureParams& p, const Tolerance& tol) {
    if (p.K >= 0.0) return p.N / p.D;
    const double n1 = p.N - 1.0;
    const double integral = integrate(
        [&](double t) {
            return std::pow(sigma_coeff(t, p.K, n1, p.D).value(), n1);
        },
        0.0, 1.0, tol);
    return 1.0 / (p.D * integral);
}

TabulatedDensity random_mcp_density(const CurvatureParams& p, std::uint64_t seed,
                                    int k, int points, const Tolerance& tol) {
    if (k < 1) throw std::invalid_argument("random_mcp_density: require k >= 1");
    if (points < 3)
        throw std::invalid_argument("random_mcp_density: require points >= 3");

    std::mt19937_64 eng(seed);
    std::vector<ModelDensity> parts;
    parts.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
        parts.emplace_back(p, uniform01(eng) * p.D, tol);
    std::vector<double> w(static_cast<std::size_t>(k));
    double wsum = 0.0;
    for (auto& wi : w) wsum += (wi = uniform01(eng));
    for (auto& wi : w) wi /= wsum;

    std::vector<double> values(static_cast<std::size_t>(points), 0.0);
    const double dx = p.D / static_cast<double>(points - 1);
    for (int j = 0; j < points; ++j) {
        const double x = (j + 1 == points) ? p.D : j * dx;
        double acc = 0.0;
        for (int i = 0; i < k; ++i)
            acc += w[static_cast<std::size_t>(i)] * parts[static_cast<std::size_t>(i)](x);
        values[static_cast<std::size_t>(j)] = acc;
    }

    // the combination has unit mass exactly; the trapezoidal sum of the
    // samples only up to O(dx^2), so widen the constructor tolerance for
    // coarse grids
    double trap = 0.0;
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
        trap += 0.5 * (values[i] + values[i + 1]);
    trap *= dx;
    const double drift = std::abs(trap - 1.0);
    if (drift > 0.05)
        throw NumericsError("random_mcp_density: grid too coarse to represent density");
    return TabulatedDensity(p.D, std::move(values), std::max(1e-4, 1.5 * drift));
}

}  // namespace iso
