#pragma once

#include <cmath>
#include <vector>

#include "imcflab/common.hpp"

namespace imcflab {

/// Staggered pole-free colatitude grid theta_j = (j+1/2)*pi/N with midpoint
/// quadrature weights normalized so that sum(w) = 4*pi exactly; this makes
/// integrals of theta-independent fields over round spheres exact.
struct AxisymGrid {
    int n = 0;
    double dtheta = 0.0;
    std::vector<double> theta;
    std::vector<double> w;

    AxisymGrid() = default;

    explicit AxisymGrid(int n_theta) : n(n_theta) {
        if (n_theta < 2) throw ValidationError("AxisymGrid: need at least 2 nodes");
        dtheta = kPi / n;
        theta.resize(n);
        w.resize(n);
        double sum_sin = 0.0;
        for (int j = 0; j < n; ++j) {
            theta[j] = (j + 0.5) * dtheta;
            sum_sin += std::sin(theta[j]);
        }
        for (int j = 0; j < n; ++j) w[j] = 4.0 * kPi * std::sin(theta[j]) / sum_sin;
    }

    bool same_as(const AxisymGrid& o) const { return n == o.n; }
};

/// Parity of an axisymmetric field under reflection at the poles:
/// +1 for even fields (scalars, rho, T_thth, T_phph), -1 for odd ones
/// (theta-derivatives, T_thph).
enum class Parity : int { even = +1, odd = -1 };

namespace detail {

inline double ghost_value(const std::vector<double>& f, int j, Parity p) {
    const int n = static_cast<int>(f.size());
    const double s = (p == Parity::even) ? 1.0 : -1.0;
    if (j >= 0 && j < n) return f[j];
    if (j < 0) return s * f[-1 - j];       // mirror across theta = 0
    return s * f[2 * n - 1 - j];           // mirror across theta = pi
}

}  // namespace detail

inline std::vector<double> dtheta_fd(const AxisymGrid& g, const std::vector<double>& f, Parity p) {
    if (static_cast<int>(f.size()) != g.n) throw GridMismatch("dtheta_fd: size mismatch");
    std::vector<double> d(g.n);
    for (int j = 0; j < g.n; ++j)
        d[j] = (detail::ghost_value(f, j + 1, p) - detail::ghost_value(f, j - 1, p)) / (2.0 * g.dtheta);
    return d;
}

/// 4th-order centered first derivative with parity ghosts.
inline std::vector<double> dtheta_fd4(const AxisymGrid& g, const std::vector<double>& f, Parity p) {
    if (static_cast<int>(f.size()) != g.n) throw GridMismatch("dtheta_fd4: size mismatch");
    std::vector<double> d(g.n);
    for (int j = 0; j < g.n; ++j)
        d[j] = (detail::ghost_value(f, j - 2, p) - 8.0 * detail::ghost_value(f, j - 1, p) +
                8.0 * detail::ghost_value(f, j + 1, p) - detail::ghost_value(f, j + 2, p)) /
               (12.0 * g.dtheta);
    return d;
}

inline std::vector<double> d2theta_fd(const AxisymGrid& g, const std::vector<double>& f, Parity p) {
    if (static_cast<int>(f.size()) != g.n) throw GridMismatch("d2theta_fd: size mismatch");
    std::vector<double> d(g.n);
    for (int j = 0; j < g.n; ++j)
        d[j] = (detail::ghost_value(f, j + 1, p) - 2.0 * f[j] + detail::ghost_value(f, j - 1, p)) /
               (g.dtheta * g.dtheta);
    return d;
}

/// Cubic (4-point Lagrange) interpolation of a grid field at theta_eval in (0, pi),
/// extended across the poles by parity.
inline double interp_cubic(const AxisymGrid& g, const std::vector<double>& f, Parity p,
                           double theta_eval) {
    const double x = theta_eval / g.dtheta - 0.5;   // node index coordinate
    int b = static_cast<int>(std::floor(x));
    if (b < -1) b = -1;
    if (b > g.n - 1) b = g.n - 1;
    const double s = x - b;
    const double fm1 = detail::ghost_value(f, b - 1, p);
    const double f0 = detail::ghost_value(f, b, p);
    const double f1 = detail::ghost_value(f, b + 1, p);
    const double f2 = detail::ghost_value(f, b + 2, p);
    const double wm1 = -s * (s - 1.0) * (s - 2.0) / 6.0;
    const double w0 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
    const double w1 = -(s + 1.0) * s * (s - 2.0) / 2.0;
    const double w2 = (s + 1.0) * s * (s - 1.0) / 6.0;
    return wm1 * fm1 + w0 * f0 + w1 * f1 + w2 * f2;
}

}  // namespace imcflab
