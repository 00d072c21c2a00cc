#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

#include "imcflab/common.hpp"
#include "imcflab/grid.hpp"
#include "imcflab/profile.hpp"

namespace imcflab {

/// One leaf as an axisymmetric radial graph r = rho(theta) over the unit sphere.
///
/// Induced metric   g = (rho'^2/V + rho^2) dtheta^2 + rho^2 sin^2(theta) dphi^2,
/// normal covector  n = dr - rho' dtheta,  |n|^2 = V + rho'^2/rho^2,
/// and A_ab = -<nabla_a X_b, nu> expanded with the ambient Christoffels; all
/// curvature fields close over the 2-jet (rho, rho', rho'') so round graphs are
/// reproduced to rounding.
struct SurfaceState {
    AxisymGrid grid;
    WarpedProfile profile;
    std::vector<double> rho, drho, d2rho;
    std::vector<double> V, Vp;
    std::vector<double> g_thth, g_phph;          // E, G
    std::vector<double> nnorm, tilt;             // |n|, v = |n|/sqrt(V)
    std::vector<double> A_thth, A_phph;
    std::vector<double> lam_th, lam_ph;          // principal curvatures by direction
    std::vector<double> lam1, lam2;              // sorted, lam1 <= lam2
    std::vector<double> H;
    std::vector<double> K;                       // intrinsic Gauss curvature
    std::vector<double> amb_R, amb_Rc_nn, amb_K12;
    std::vector<double> E_th, G_th;              // d/dtheta of metric coefficients
    double area = 0.0;

    int n() const { return grid.n; }
};

inline SurfaceState surface_geometry(const WarpedProfile& profile, const AxisymGrid& grid,
                                     const std::vector<double>& rho, double tilt_cap = 1e3) {
    if (static_cast<int>(rho.size()) != grid.n)
        throw GridMismatch("surface_geometry: rho size != grid size");
    SurfaceState s;
    s.grid = grid;
    s.profile = profile;
    s.rho = rho;
    s.drho = dtheta_fd(grid, rho, Parity::even);
    s.d2rho = d2theta_fd(grid, rho, Parity::even);
    const int n = grid.n;
    s.V.resize(n); s.Vp.resize(n);
    s.g_thth.resize(n); s.g_phph.resize(n);
    s.nnorm.resize(n); s.tilt.resize(n);
    s.A_thth.resize(n); s.A_phph.resize(n);
    s.lam_th.resize(n); s.lam_ph.resize(n);
    s.lam1.resize(n); s.lam2.resize(n);
    s.H.resize(n); s.K.resize(n);
    s.amb_R.resize(n); s.amb_Rc_nn.resize(n); s.amb_K12.resize(n);
    s.E_th.resize(n); s.G_th.resize(n);

    for (int j = 0; j < n; ++j) {
        const double r = rho[j], rp = s.drho[j], rpp = s.d2rho[j];
        const double th = grid.theta[j];
        const double st = std::sin(th), ct = std::cos(th);
        const ProfileEval pe = profile.eval(r);
        const double V = pe.V, Vp = pe.Vp;
        s.V[j] = V; s.Vp[j] = Vp;

        const double E = rp * rp / V + r * r;
        const double G = r * r * st * st;
        const double n2 = V + rp * rp / (r * r);
        const double nn = std::sqrt(n2);
        const double v = nn / std::sqrt(V);
        if (v > tilt_cap)
            throw NonGraphical("surface_geometry: tilt factor " + fmt17(v) + " exceeds cap");

        const double A11 = (-rpp + (Vp / (2.0 * V)) * rp * rp + r * V + 2.0 * rp * rp / r) / nn;
        const double A22 = st * (r * V * st - rp * ct) / nn;
        const double l1 = A11 / E, l2 = A22 / G;

        s.g_thth[j] = E; s.g_phph[j] = G;
        s.nnorm[j] = nn; s.tilt[j] = v;
        s.A_thth[j] = A11; s.A_phph[j] = A22;
        s.lam_th[j] = l1; s.lam_ph[j] = l2;
        s.lam1[j] = std::min(l1, l2); s.lam2[j] = std::max(l1, l2);
        s.H[j] = l1 + l2;

        const double K_tan = (1.0 - V) / (r * r);
        const double K_rad = -Vp / (2.0 * r);
        s.amb_K12[j] = (K_tan * r * r + K_rad * rp * rp / V) / E;
        s.amb_Rc_nn[j] = (2.0 * V * K_rad + (rp * rp / (r * r)) * (K_rad + K_tan)) / n2;
        s.amb_R[j] = 2.0 * K_tan - 2.0 * Vp / r;

        // intrinsic Gauss curvature of E dtheta^2 + G dphi^2 from the 2-jet
        const double Eth = 2.0 * rp * rpp / V - Vp * rp * rp * rp / (V * V) + 2.0 * r * rp;
        const double Gth = 2.0 * r * rp * st * st + 2.0 * r * r * st * ct;
        const double Gthth = 2.0 * (rp * rp + r * rpp) * st * st + 8.0 * r * rp * st * ct +
                             2.0 * r * r * (ct * ct - st * st);
        s.E_th[j] = Eth; s.G_th[j] = Gth;
        s.K[j] = -Gthth / (2.0 * E * G) + Gth * (Eth * G + E * Gth) / (4.0 * E * E * G * G);
    }

    double a = 0.0;
    for (int j = 0; j < n; ++j)
        a += std::sqrt(s.g_thth[j] * s.g_phph[j]) / std::sin(grid.theta[j]) * grid.w[j];
    s.area = a;
    return s;
}

inline double surface_integral(const SurfaceState& s, const std::vector<double>& f) {
    if (f.size() != s.rho.size()) throw GridMismatch("surface_integral: sample size mismatch");
    double acc = 0.0;
    for (int j = 0; j < s.n(); ++j)
        acc += f[j] * std::sqrt(s.g_thth[j] * s.g_phph[j]) / std::sin(s.grid.theta[j]) * s.grid.w[j];
    return acc;
}

struct SurfaceOperators {
    std::vector<double> grad2;      // |grad f|^2_g
    std::vector<double> laplacian;  // divergence-form Delta_g f
};

/// Divergence-form Laplacian with zero pole fluxes: surface_integral(laplacian)
/// telescopes to 0 exactly.
inline SurfaceOperators surface_operators(const SurfaceState& s, const std::vector<double>& f) {
    if (f.size() != s.rho.size()) throw GridMismatch("surface_operators: sample size mismatch");
    const int n = s.n();
    const double dth = s.grid.dtheta;
    SurfaceOperators out;
    out.grad2.resize(n);
    out.laplacian.resize(n);
    std::vector<double> df = dtheta_fd(s.grid, f, Parity::even);
    std::vector<double> coef(n);  // sqrt(det g) g^{thth} = sqrt(G/E)
    for (int j = 0; j < n; ++j) {
        out.grad2[j] = df[j] * df[j] / s.g_thth[j];
        coef[j] = std::sqrt(s.g_phph[j] / s.g_thth[j]);
    }
    std::vector<double> flux(n + 1, 0.0);  // flux[j] at theta_{j-1/2}; poles carry none
    for (int j = 1; j < n; ++j)
        flux[j] = 0.5 * (coef[j - 1] + coef[j]) * (f[j] - f[j - 1]) / dth;
    for (int j = 0; j < n; ++j) {
        const double sdet = std::sqrt(s.g_thth[j] * s.g_phph[j]);
        out.laplacian[j] = (flux[j + 1] - flux[j]) / (dth * sdet);
    }
    return out;
}

struct ScalarHessian {
    std::vector<double> thth, phph;  // (nabla^2 f)_ab; thph vanishes by axisymmetry
};

inline ScalarHessian scalar_hessian(const SurfaceState& s, const std::vector<double>& f) {
    if (f.size() != s.rho.size()) throw GridMismatch("scalar_hessian: sample size mismatch");
    const int n = s.n();
    std::vector<double> df = dtheta_fd(s.grid, f, Parity::even);
    std::vector<double> d2f = d2theta_fd(s.grid, f, Parity::even);
    ScalarHessian h;
    h.thth.resize(n);
    h.phph.resize(n);
    for (int j = 0; j < n; ++j) {
        const double G111 = s.E_th[j] / (2.0 * s.g_thth[j]);
        const double G122 = -s.G_th[j] / (2.0 * s.g_thth[j]);
        h.thth[j] = d2f[j] - G111 * df[j];
        h.phph[j] = -G122 * df[j];
    }
    return h;
}

/// Intrinsic diameter upper estimate: meridian polyline segments plus azimuthal
/// great-circle arcs, maximized over node pairs at azimuth separation 0 and pi.
inline double diameter(const SurfaceState& s) {
    const int n = s.n();
    const double dth = s.grid.dtheta;
    std::vector<double> seg(n);  // meridian length attributed to node j
    for (int j = 0; j < n; ++j) seg[j] = std::sqrt(s.g_thth[j]) * dth;
    std::vector<double> arc(n);  // meridian arclength from the north pole to node j
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        arc[j] = acc + 0.5 * seg[j];
        acc += seg[j];
    }
    const double S = acc;
    std::vector<double> par(n);  // half-circumference of the parallel at node j
    for (int j = 0; j < n; ++j) par[j] = kPi * std::sqrt(s.g_phph[j]);

    double diam = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double same_phi = std::abs(arc[i] - arc[j]);
            double anti = std::min(arc[i] + arc[j], 2.0 * S - arc[i] - arc[j]);
            const int lo = std::min(i, j), hi = std::max(i, j);
            for (int c = lo; c <= hi; ++c)
                anti = std::min(anti, std::abs(arc[i] - arc[c]) + par[c] + std::abs(arc[c] - arc[j]));
            diam = std::max(diam, std::max(same_phi, anti));
        }
    }
    return diam;
}

/// CSV columns: theta, rho, H, lambda1, lambda2, K, Rc_nn, K12, area_element.
inline void write_surface_csv(const SurfaceState& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("write_surface_csv: cannot open " + path);
    out << "theta,rho,H,lambda1,lambda2,K,Rc_nn,K12,area_element\n";
    for (int j = 0; j < s.n(); ++j) {
        const double ae = std::sqrt(s.g_thth[j] * s.g_phph[j]);
        out << fmt17(s.grid.theta[j]) << ',' << fmt17(s.rho[j]) << ',' << fmt17(s.H[j]) << ','
            << fmt17(s.lam1[j]) << ',' << fmt17(s.lam2[j]) << ',' << fmt17(s.K[j]) << ','
            << fmt17(s.amb_Rc_nn[j]) << ',' << fmt17(s.amb_K12[j]) << ',' << fmt17(ae) << '\n';
    }
}

}  // namespace imcflab
