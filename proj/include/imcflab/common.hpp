#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace imcflab {

inline constexpr double kPi = 3.14159265358979323846;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RadiusOutOfDomain : Error { using Error::Error; };
struct PoleSingularity : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };
struct NonGraphical : Error { using Error::Error; };
struct FlowBreakdown : Error { using Error::Error; };
struct StepTooLarge : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };
struct SupportViolation : Error { using Error::Error; };
struct NotEnoughTimeNodes : Error { using Error::Error; };
struct InterpolationDegenerate : Error { using Error::Error; };
struct CaseMassMismatch : Error { using Error::Error; };
struct LapseSingular : Error { using Error::Error; };
struct FamilyTooSmall : Error { using Error::Error; };
struct ParameterNotDecreasing : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };

/// 17 significant digits: round-trips doubles and keeps emitted files byte-stable.
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline double sq(double x) { return x * x; }

/// d/dt on a uniform grid, 4th order: centered 5-point stencil inside,
/// one-sided 5-point stencils at the two nodes next to each end.
/// Falls back to 2nd order when fewer than 5 samples are available.
inline std::vector<double> time_derivative(const std::vector<double>& f, double dt) {
    const int n = static_cast<int>(f.size());
    std::vector<double> d(n, 0.0);
    if (n < 2) throw NotEnoughTimeNodes("time_derivative: need at least 2 nodes");
    if (n < 5) {
        d[0] = (f[1] - f[0]) / dt;
        d[n - 1] = (f[n - 1] - f[n - 2]) / dt;
        for (int k = 1; k + 1 < n; ++k) d[k] = (f[k + 1] - f[k - 1]) / (2.0 * dt);
        if (n >= 3) {
            d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dt);
            d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dt);
        }
        return d;
    }
    const double c = 1.0 / (12.0 * dt);
    d[0] = c * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
    d[1] = c * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
    for (int k = 2; k + 2 < n; ++k)
        d[k] = c * (f[k - 2] - 8.0 * f[k - 1] + 8.0 * f[k + 1] - f[k + 2]);
    d[n - 2] = -c * (-3.0 * f[n - 1] - 10.0 * f[n - 2] + 18.0 * f[n - 3] - 6.0 * f[n - 4] + f[n - 5]);
    d[n - 1] = -c * (-25.0 * f[n - 1] + 48.0 * f[n - 2] - 36.0 * f[n - 3] + 16.0 * f[n - 4] - 3.0 * f[n - 5]);
    return d;
}

/// Composite Simpson weights on a uniform grid (3/8 block at the tail when the
/// interval count is odd); trapezoid for a single interval.
inline std::vector<double> simpson_weights(int n_nodes, double dt) {
    std::vector<double> w(n_nodes, 0.0);
    if (n_nodes <= 1) return w;
    int n_int = n_nodes - 1;
    if (n_int == 1) {
        w[0] = w[1] = 0.5 * dt;
        return w;
    }
    int simpson_ints = (n_int % 2 == 0) ? n_int : n_int - 3;
    for (int i = 0; i + 2 <= simpson_ints; i += 2) {
        w[i] += dt / 3.0;
        w[i + 1] += 4.0 * dt / 3.0;
        w[i + 2] += dt / 3.0;
    }
    if (simpson_ints < n_int) {
        int i = simpson_ints;  // trailing 3/8 rule over 3 intervals
        w[i] += 3.0 * dt / 8.0;
        w[i + 1] += 9.0 * dt / 8.0;
        w[i + 2] += 9.0 * dt / 8.0;
        w[i + 3] += 3.0 * dt / 8.0;
    }
    return w;
}

inline std::vector<double> trapezoid_weights(int n_nodes, double dt) {
    std::vector<double> w(n_nodes, dt);
    if (n_nodes == 0) return w;
    w.front() = 0.5 * dt;
    w.back() = 0.5 * dt;
    if (n_nodes == 1) w[0] = 0.0;
    return w;
}

inline double dot_weights(const std::vector<double>& w, const std::vector<double>& f) {
    double s = 0.0;
    for (size_t i = 0; i < w.size(); ++i) s += w[i] * f[i];
    return s;
}

}  // namespace imcflab
