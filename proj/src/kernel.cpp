#include "iso/kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace iso {

namespace {

constexpr double kPi = std::numbers::pi;

// 15-point Gauss-Legendre nodes (positive half) and weights on [-1, 1].
constexpr std::array<double, 8> kGlNode = {
    0.0,
    2.01194093997434514e-01,
    3.94151347077563385e-01,
    5.70972172608538830e-01,
    7.24417731360170070e-01,
    8.48206583410427206e-01,
    9.37273392400705951e-01,
    9.87992518020485377e-01,
};
constexpr std::array<double, 8> kGlWeight = {
    2.02578241925560898e-01,
    1.98431485327111246e-01,
    1.86161000015561878e-01,
    1.66269205816993781e-01,
    1.39570677926153908e-01,
    1.07159220467171773e-01,
    7.03660474881080689e-02,
    3.07532419961186465e-02,
};

double gl15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double acc = kGlWeight[0] * f(c);
    for (std::size_t i = 1; i < kGlNode.size(); ++i) {
        const double dx = h * kGlNode[i];
        acc += kGlWeight[i] * (f(c - dx) + f(c + dx));
    }
    return acc * h;
}

}  // namespace

CurvatureParams::CurvatureParams(double K, double N, double D) : K(K), N(N), D(D) {
    if (!(std::isfinite(K) && std::isfinite(N) && std::isfinite(D)))
        throw std::invalid_argument("CurvatureParams: K, N, D must be finite");
    if (!(N > 1.0))
        throw std::invalid_argument("CurvatureParams: require N > 1");
    if (!(D > 0.0))
        throw std::invalid_argument("CurvatureParams: require D > 0");
    if (K > 0.0) {
        const double dmax = max_diameter(K, N);
        if (D > dmax * (1.0 + 1e-12))
            throw std::invalid_argument(
                "CurvatureParams: K > 0 requires D <= pi*sqrt((N-1)/K)");
    }
}

double CurvatureParams::max_diameter(double K, double N) {
    if (K <= 0.0) return std::numeric_limits<double>::infinity();
    return kPi * std::sqrt((N - 1.0) / K);
}

void Tolerance::validate() const {
    if (!(quad_tol > 0.0 && root_tol > 0.0 && opt_tol > 0.0))
        throw std::invalid_argument("Tolerance: all fields must be positive");
}

double ExtendedReal::value() const {
    if (!finite_) throw std::logic_error("ExtendedReal: value() on infinite branch");
    return v_;
}

double s_kappa(double kappa, double theta) {
    if (!(theta >= 0.0))
        throw std::domain_error("s_kappa: require theta >= 0");
    if (kappa > 0.0 && theta >= kPi / std::sqrt(kappa))
        throw std::domain_error("s_kappa: theta >= pi/sqrt(kappa)");

    const double z = kappa * theta * theta;
    if (std::abs(z) < 1e-10) {
        // common series of both branches: theta (1 - z/6 + z^2/120 - ...)
        return theta * (1.0 - z / 6.0 + z * z / 120.0);
    }
    if (kappa > 0.0) {
        const double r = std::sqrt(kappa);
        return std::sin(r * theta) / r;
    }
    const double r = std::sqrt(-kappa);
    return std::sinh(r * theta) / r;
}

double detail::s_kappa_closed(double kappa, double theta) {
    if (!(theta >= 0.0))
        throw std::domain_error("s_kappa: require theta >= 0");
    if (kappa > 0.0) {
        const double tmax = kPi / std::sqrt(kappa);
        if (theta > tmax * (1.0 + 1e-12))
            throw std::domain_error("s_kappa: theta beyond pi/sqrt(kappa)");
        if (theta >= tmax) return 0.0;
    }
    return s_kappa(kappa, theta);
}

ExtendedReal sigma_coeff(double t, double K, double Ncal, double theta) {
    if (!(t >= 0.0 && t <= 1.0))
        throw std::invalid_argument("sigma_coeff: require t in [0, 1]");
    if (!(Ncal > 0.0))
        throw std::invalid_argument("sigma_coeff: require Ncal > 0");
    if (!(theta >= 0.0))
        throw std::invalid_argument("sigma_coeff: require theta >= 0");

    if (theta == 0.0) return ExtendedReal::finite(t);
    if (K == 0.0 || std::isinf(Ncal)) return ExtendedReal::finite(t);

    if (K > 0.0) {
        const double r = std::sqrt(K / Ncal);
        if (theta >= kPi / r) return ExtendedReal::infinite();
        return ExtendedReal::finite(std::sin(t * theta * r) / std::sin(theta * r));
    }
    const double r = std::sqrt(-K / Ncal);
    return ExtendedReal::finite(std::sinh(t * theta * r) / std::sinh(theta * r));
}

ExtendedReal tau_coeff(double t, double K, double N, double theta) {
    if (!(N >= 1.0))
        throw std::invalid_argument("tau_coeff: require N >= 1");
    if (N == 1.0)
        return K <= 0.0 ? ExtendedReal::finite(t) : ExtendedReal::infinite();

    const ExtendedReal s = sigma_coeff(t, K, N - 1.0, theta);
    if (!s.is_finite()) return ExtendedReal::infinite();
    const double inv_n = std::isinf(N) ? 0.0 : 1.0 / N;
    return ExtendedReal::finite(std::pow(t, inv_n) *
                                std::pow(s.value(), 1.0 - inv_n));
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const Tolerance& tol) {
    tol.validate();
    if (!(a <= b)) throw std::invalid_argument("integrate: require a <= b");
    if (a == b) return 0.0;

    struct Segment {
        double a, b, coarse, tol;
    };

    std::vector<Segment> work;
    work.push_back({a, b, gl15(f, a, b), tol.quad_tol});
    double total = 0.0;
    int budget = 40000;

    while (!work.empty()) {
        const Segment s = work.back();
        work.pop_back();
        const double m = 0.5 * (s.a + s.b);
        const double left = gl15(f, s.a, m);
        const double right = gl15(f, m, s.b);
        const double fine = left + right;
        if (std::abs(fine - s.coarse) <= s.tol) {
            total += fine;
            continue;
        }
        if ((budget -= 2) < 0)
            throw NumericsError("integrate: refinement budget exhausted");
        work.push_back({s.a, m, left, 0.5 * s.tol});
        work.push_back({m, s.b, right, 0.5 * s.tol});
    }
    return total;
}

double invert_monotone(const std::function<double(double)>& g, double target,
                       double lo, double hi, const Tolerance& tol) {
    tol.validate();
    if (!(lo <= hi)) throw std::invalid_argument("invert_monotone: require lo <= hi");

    double fa = g(lo) - target;
    double fb = g(hi) - target;
    if (fa > 0.0 || fb < 0.0)
        throw BracketError("invert_monotone: target outside [g(lo), g(hi)]");
    if (fa == 0.0) return lo;
    if (fb == 0.0) return hi;

    double a = lo, b = hi;
    const double rt = tol.root_tol;

    for (int it = 0; it < 256 && b > a; ++it) {
        double x;
        // secant proposal on even iterations, plain bisection otherwise; the
        // alternation guarantees the bracket keeps halving
        if (it % 2 == 0 && fb != fa) {
            x = b - fb * (b - a) / (fb - fa);
            const double guard = 1e-3 * (b - a);
            if (!(x >= a + guard && x <= b - guard)) x = 0.5 * (a + b);
        } else {
            x = 0.5 * (a + b);
        }
        const double fx = g(x) - target;
        if (fx == 0.0) return x;
        if (fx < 0.0) {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        if (b - a <= rt) {
            const double res = std::min(-fa, fb);
            if (res <= rt) return (-fa <= fb) ? a : b;
        }
    }
    if (std::min(-fa, fb) <= rt) return (-fa <= fb) ? a : b;
    throw NumericsError("invert_monotone: no convergence within iteration budget");
}

}  // namespace iso
