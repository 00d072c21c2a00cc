#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "imcflab/common.hpp"
#include "imcflab/flow.hpp"
#include "imcflab/surface.hpp"
#include "imcflab/tensor_calc.hpp"

namespace imcflab {

enum class MassVariant { euclidean, hyperbolic };

inline std::string to_string(MassVariant v) {
    return v == MassVariant::euclidean ? "euclidean" : "hyperbolic";
}

/// m = sqrt(|Sigma|/(16 pi)^3) (16 pi - int F^2 dmu), F^2 = H^2 (euclidean)
/// or H^2 - 4 (hyperbolic).
inline double hawking_mass(const SurfaceState& s, MassVariant v) {
    std::vector<double> h2(s.n());
    for (int j = 0; j < s.n(); ++j) h2[j] = s.H[j] * s.H[j];
    double q = surface_integral(s, h2);
    if (v == MassVariant::hyperbolic) q -= 4.0 * s.area;
    const double c = 16.0 * kPi;
    return std::sqrt(s.area / (c * c * c)) * (c - q);
}

/// Generic numeric table with an identity tag; one row per retained time node.
struct NamedTable {
    std::string tag;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const {
        for (size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return static_cast<int>(i);
        throw Error("NamedTable: no column " + name);
    }
    std::vector<double> col(const std::string& name) const {
        const int c = column(name);
        std::vector<double> out(rows.size());
        for (size_t r = 0; r < rows.size(); ++r) out[r] = rows[r][c];
        return out;
    }
    double max_abs(const std::string& name) const {
        double m = 0.0;
        for (double x : col(name)) m = std::max(m, std::abs(x));
        return m;
    }
};

inline void write_table_csv(const NamedTable& t, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("write_table_csv: cannot open " + path);
    out << t.tag << '\n';
    for (size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << '\n';
    for (const auto& row : t.rows) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << fmt17(row[i]);
        out << '\n';
    }
}

namespace detail {

/// Rows retained in residual tables: nodes where the time stencil is centered.
struct RowRange {
    int lo = 0, hi = -1;  // inclusive
};

inline RowRange interior_rows(int n_nodes) {
    if (n_nodes < 3) throw NotEnoughTimeNodes("identity tables need at least 3 time nodes");
    if (n_nodes >= 6) return {2, n_nodes - 3};
    return {1, n_nodes - 2};
}

inline std::vector<double> leaf_H2(const SurfaceState& s) {
    std::vector<double> f(s.n());
    for (int j = 0; j < s.n(); ++j) f[j] = s.H[j] * s.H[j];
    return f;
}

inline std::vector<double> leaf_A2(const SurfaceState& s) {
    std::vector<double> f(s.n());
    for (int j = 0; j < s.n(); ++j) f[j] = s.lam1[j] * s.lam1[j] + s.lam2[j] * s.lam2[j];
    return f;
}

}  // namespace detail

inline std::vector<double> mass_series(const FlowRecord& rec, MassVariant v) {
    std::vector<double> m(rec.n_nodes());
    for (int k = 0; k < rec.n_nodes(); ++k) m[k] = hawking_mass(rec.states[k], v);
    return m;
}

/// d/dt int F^2 dmu = (16 pi)^{3/2} |Sigma_t|^{-1/2} (m/2 - dm/dt), plus the
/// model limit (16 pi / r0) m_T e^{-t/2} with m_T the final-leaf mass.
inline NamedTable geroch_diagnostics(const FlowRecord& rec, MassVariant v) {
    const int nn = rec.n_nodes();
    const auto rr = detail::interior_rows(nn);
    std::vector<double> Q(nn), m(nn), area(nn);
    for (int k = 0; k < nn; ++k) {
        const SurfaceState& s = rec.states[k];
        Q[k] = surface_integral(s, detail::leaf_H2(s));
        if (v == MassVariant::hyperbolic) Q[k] -= 4.0 * s.area;
        m[k] = hawking_mass(s, v);
        area[k] = s.area;
    }
    const std::vector<double> dQ = time_derivative(Q, rec.dt());
    const std::vector<double> dm = time_derivative(m, rec.dt());
    const double m_T = m.back();
    NamedTable t;
    t.tag = "lemma=dtintEstimate";
    t.columns = {"t", "lhs_dt_intH2", "rhs_mass_form", "residual", "limit_model"};
    const double c32 = std::pow(16.0 * kPi, 1.5);
    for (int k = rr.lo; k <= rr.hi; ++k) {
        const double rhs = c32 / std::sqrt(area[k]) * (0.5 * m[k] - dm[k]);
        const double lim = 16.0 * kPi / rec.r0 * m_T * std::exp(-0.5 * rec.times[k]);
        t.rows.push_back({rec.times[k], dQ[k], rhs, dQ[k] - rhs, lim});
    }
    return t;
}

/// Nine integral columns per time node, hyperbolic offsets applied per variant,
/// plus the model limits for the Ricci and K12 columns and the printed K12
/// limit (whose sign differs between the two settings' displays).
inline NamedTable corollary_integral_table(const FlowRecord& rec, MassVariant v) {
    const bool hyp = v == MassVariant::hyperbolic;
    NamedTable t;
    t.tag = hyp ? "corollary=GoToZeroHyperbolic" : "corollary=GoToZero";
    t.columns = {"t",      "int_gradH2_H2", "int_shear2", "int_R",  "int_Rc",
                 "int_K12", "int_H2",        "int_A2",     "int_l1l2", "euler",
                 "rc_limit_model", "k12_limit_model", "k12_limit_printed"};
    const double m_T = hawking_mass(rec.states.back(), v);
    for (int k = 0; k < rec.n_nodes(); ++k) {
        const SurfaceState& s = rec.states[k];
        const int n = s.n();
        const SurfaceOperators ops = surface_operators(s, s.H);
        std::vector<double> gh(n), sh(n), rr(n), rc(n), k12(n), h2(n), a2(n), ll(n);
        for (int j = 0; j < n; ++j) {
            gh[j] = ops.grad2[j] / (s.H[j] * s.H[j]);
            sh[j] = sq(s.lam1[j] - s.lam2[j]);
            rr[j] = s.amb_R[j] + (hyp ? 6.0 : 0.0);
            rc[j] = s.amb_Rc_nn[j] + (hyp ? 2.0 : 0.0);
            k12[j] = s.amb_K12[j] + (hyp ? 1.0 : 0.0);
            h2[j] = s.H[j] * s.H[j] - (hyp ? 4.0 : 0.0);
            a2[j] = s.lam1[j] * s.lam1[j] + s.lam2[j] * s.lam2[j] - (hyp ? 2.0 : 0.0);
            ll[j] = s.lam1[j] * s.lam2[j] - (hyp ? 1.0 : 0.0);
        }
        const double lim = 8.0 * kPi / rec.r0 * m_T * std::exp(-0.5 * rec.times[k]);
        t.rows.push_back({rec.times[k], surface_integral(s, gh), surface_integral(s, sh),
                          surface_integral(s, rr), surface_integral(s, rc),
                          surface_integral(s, k12), surface_integral(s, h2),
                          surface_integral(s, a2), surface_integral(s, ll),
                          surface_integral(s, s.K) / (2.0 * kPi), -lim, lim,
                          hyp ? lim : -lim});
    }
    return t;
}

struct AverageEvolutionTables {
    NamedTable avg_prop;    // dHbar/dt vs average of the full evolution equation
    NamedTable avg_evol;    // dHbar/dt vs -avg((|A|^2+Rc)/H)
    NamedTable avg_evol2;   // d(avg H^2)/dt vs -2 avg(|grad H|^2/H^2 + |A|^2 + Rc)
    NamedTable limits;      // computed derivatives vs model limits
};

inline AverageEvolutionTables average_evolution_residuals(const FlowRecord& rec,
                                                          MassVariant v = MassVariant::euclidean) {
    const int nn = rec.n_nodes();
    const auto rr = detail::interior_rows(nn);
    std::vector<double> Hbar(nn), H2bar(nn), rhs_full(nn), rhs_noLap(nn), rhs2(nn), rhs2_printed(nn);
    for (int k = 0; k < nn; ++k) {
        const SurfaceState& s = rec.states[k];
        const int n = s.n();
        std::vector<double> invH(n);
        for (int j = 0; j < n; ++j) invH[j] = 1.0 / s.H[j];
        const SurfaceOperators lap = surface_operators(s, invH);
        const SurfaceOperators gH = surface_operators(s, s.H);
        std::vector<double> a2 = detail::leaf_A2(s);
        std::vector<double> f_full(n), f_noLap(n), f2(n), f2p(n);
        for (int j = 0; j < n; ++j) {
            const double drive = (a2[j] + s.amb_Rc_nn[j]) / s.H[j];
            f_full[j] = -lap.laplacian[j] - drive;
            f_noLap[j] = -drive;
            const double q = gH.grad2[j] / (s.H[j] * s.H[j]);
            f2[j] = -2.0 * (q + a2[j] + s.amb_Rc_nn[j]);
            f2p[j] = -2.0 * (2.0 * q + a2[j] + s.amb_Rc_nn[j]);
        }
        Hbar[k] = surface_integral(s, s.H) / s.area;
        H2bar[k] = surface_integral(s, detail::leaf_H2(s)) / s.area;
        rhs_full[k] = surface_integral(s, f_full) / s.area;
        rhs_noLap[k] = surface_integral(s, f_noLap) / s.area;
        rhs2[k] = surface_integral(s, f2) / s.area;
        rhs2_printed[k] = surface_integral(s, f2p) / s.area;
    }
    const std::vector<double> dHbar = time_derivative(Hbar, rec.dt());
    const std::vector<double> dH2bar = time_derivative(H2bar, rec.dt());
    const double m_T = hawking_mass(rec.states.back(), v);
    const bool hyp = v == MassVariant::hyperbolic;

    AverageEvolutionTables out;
    out.avg_prop.tag = "lemma=AvgIntProp";
    out.avg_prop.columns = {"t", "lhs_dHbar_dt", "rhs_avg_dHdt", "residual"};
    out.avg_evol.tag = "lemma=AvgIntEvol";
    out.avg_evol.columns = {"t", "lhs_dHbar_dt", "rhs_avg_drive", "residual"};
    out.avg_evol2.tag = "lemma=AvgIntEvol2";
    out.avg_evol2.columns = {"t", "lhs_dH2bar_dt", "rhs", "residual", "rhs_printed",
                             "residual_printed"};
    out.limits.tag = "corollary=GoToZero2";
    out.limits.columns = {"t",          "dH2bar_dt", "limit_dH2bar", "limit_dH2bar_printed",
                          "dHbar_dt",   "limit_dHbar", "limit_dHbar_printed"};
    for (int k = rr.lo; k <= rr.hi; ++k) {
        const double t = rec.times[k];
        out.avg_prop.rows.push_back({t, dHbar[k], rhs_full[k], dHbar[k] - rhs_full[k]});
        out.avg_evol.rows.push_back({t, dHbar[k], rhs_noLap[k], dHbar[k] - rhs_noLap[k]});
        out.avg_evol2.rows.push_back({t, dH2bar[k], rhs2[k], dH2bar[k] - rhs2[k], rhs2_printed[k],
                                      dH2bar[k] - rhs2_printed[k]});
        const double u = 2.0 * m_T / rec.r0 * std::exp(-0.5 * t);
        const double base = 4.0 / (rec.r0 * rec.r0) * std::exp(-t);
        const double lim2 = -base * (1.0 - 1.5 * u);
        const double lim2_printed = -base * (1.0 - u);
        const double Hbar_lim = std::sqrt(std::max(base * (1.0 - u) + (hyp ? 4.0 : 0.0), 1e-300));
        const double lim1 = lim2 / (2.0 * Hbar_lim);
        const double lim1_printed =
            -std::sqrt(std::max(1.0 - u, 0.0)) * std::exp(-0.5 * t) / rec.r0;
        out.limits.rows.push_back({t, dH2bar[k], lim2, lim2_printed, dHbar[k], lim1, lim1_printed});
    }
    return out;
}

struct WeakRicciResult {
    double lhs = 0.0, rhs = 0.0, residual = 0.0;
};

/// int_a^b int 2 phi Rc dmu dt  =  int_{S_a} phi H^2 - int_{S_b} phi H^2
///   + int_a^b int (d_t phi H^2 - 2 phi |grad H|^2/H^2 - 2 g(grad phi, grad H)/H
///                  + phi (H^2 - 2|A|^2)) dmu dt,
/// trapezoid in t (superconvergent for compactly supported phi).
inline WeakRicciResult weak_ricci_residual(const FlowRecord& rec,
                                           const std::vector<std::vector<double>>& phi, int a_idx,
                                           int b_idx) {
    const int nn = rec.n_nodes(), n = rec.grid.n;
    if (a_idx < 0 || b_idx > nn - 1 || b_idx - a_idx < 3)
        throw NotEnoughTimeNodes("weak_ricci_residual: bad time window");
    if (static_cast<int>(phi.size()) != nn) throw GridMismatch("weak_ricci_residual: phi rows");
    for (int k : {a_idx, a_idx + 1, b_idx - 1, b_idx})
        for (int j = 0; j < n; ++j)
            if (phi[k][j] != 0.0)
                throw SupportViolation("weak_ricci_residual: phi must vanish at the first/last two time nodes");

    const int m = b_idx - a_idx + 1;
    const std::vector<double> wt = trapezoid_weights(m, rec.dt());
    std::vector<std::vector<double>> dphi_dt(m, std::vector<double>(n));
    for (int j = 0; j < n; ++j) {
        std::vector<double> series(m);
        for (int k = 0; k < m; ++k) series[k] = phi[a_idx + k][j];
        const std::vector<double> d = time_derivative(series, rec.dt());
        for (int k = 0; k < m; ++k) dphi_dt[k][j] = d[k];
    }

    WeakRicciResult res;
    double volume_term = 0.0;
    for (int k = 0; k < m; ++k) {
        const SurfaceState& s = rec.states[a_idx + k];
        const SurfaceOperators gH = surface_operators(s, s.H);
        const std::vector<double> dphi_th = dtheta_fd(rec.grid, phi[a_idx + k], Parity::even);
        const std::vector<double> dH_th = dtheta_fd(rec.grid, s.H, Parity::even);
        std::vector<double> f_lhs(n), f_rhs(n);
        const std::vector<double> a2 = detail::leaf_A2(s);
        for (int j = 0; j < n; ++j) {
            const double ph = phi[a_idx + k][j];
            const double H = s.H[j];
            f_lhs[j] = 2.0 * ph * s.amb_Rc_nn[j];
            const double grad_pair = dphi_th[j] * dH_th[j] / s.g_thth[j];
            f_rhs[j] = dphi_dt[k][j] * H * H - 2.0 * ph * gH.grad2[j] / (H * H) -
                       2.0 * grad_pair / H + ph * (H * H - 2.0 * a2[j]);
        }
        res.lhs += wt[k] * surface_integral(s, f_lhs);
        volume_term += wt[k] * surface_integral(s, f_rhs);
    }
    auto boundary = [&](int k) {
        const SurfaceState& s = rec.states[k];
        std::vector<double> f(n);
        for (int j = 0; j < n; ++j) f[j] = phi[k][j] * s.H[j] * s.H[j];
        return surface_integral(s, f);
    };
    res.rhs = boundary(a_idx) - boundary(b_idx) + volume_term;
    res.residual = res.lhs - res.rhs;
    return res;
}

/// C-infinity bump in t supported strictly inside (t_{a+2}, t_{b-2}); exact
/// zeros at the window's first/last two nodes so the support precondition holds.
inline std::vector<std::vector<double>> time_bump_lattice(const FlowRecord& rec, int a_idx,
                                                          int b_idx) {
    const int nn = rec.n_nodes(), n = rec.grid.n;
    std::vector<std::vector<double>> phi(nn, std::vector<double>(n, 0.0));
    const double lo = rec.times[a_idx + 2], hi = rec.times[b_idx - 2];
    for (int k = 0; k < nn; ++k) {
        const double t = rec.times[k];
        if (!(t > lo && t < hi)) continue;
        const double s = (2.0 * t - lo - hi) / (hi - lo);
        const double val = std::exp(1.0 - 1.0 / (1.0 - s * s));
        for (int j = 0; j < n; ++j) phi[k][j] = val;
    }
    return phi;
}

struct RicciMargins {
    double margin_laplacian = 0.0;       // as displayed, pointwise H^4 denominator
    double margin_hessian = 0.0;         // Hessian form, H1^4 denominators
    double margin_hessian_H0 = 0.0;      // same with H0^4 on the Hessian term
    double pde_residual_printed = 0.0;   // ||(d_t - Lap/H^2)H^2 + 2|A|^2 + 2Rc||_{L2}^2
    double pde_residual_corrected = 0.0; // same with the +6|grad H|^2/H^2 term restored
};

inline RicciMargins ricci_inequality_margin(const FlowRecord& rec) {
    const int nn = rec.n_nodes(), n = rec.grid.n;
    if (nn < 2) throw NotEnoughTimeNodes("ricci_inequality_margin: need at least 2 time nodes");
    const std::vector<double> wt = simpson_weights(nn, rec.dt());
    const double H0 = rec.H_min, H1 = rec.H_max;

    // time part on the gauge lattice: (d/dt H^2)^2 with measure r0^2 e^t dsigma
    std::vector<std::vector<double>> psi(nn, std::vector<double>(n));
    for (int j = 0; j < n; ++j) {
        std::vector<double> h2(nn);
        for (int k = 0; k < nn; ++k) h2[k] = sq(rec.gauge.H[k][j]);
        const std::vector<double> d = time_derivative(h2, rec.dt());
        for (int k = 0; k < nn; ++k) psi[k][j] = d[k];
    }

    double lhs_core = 0.0, lhs_hess_extra = 0.0;
    double rhs_dt = 0.0, rhs_lap = 0.0, rhs_hess_H1 = 0.0, rhs_hess_H0 = 0.0;
    double q0 = 0.0, q_sup = 0.0;
    double pde_printed = 0.0, pde_corrected = 0.0;
    for (int k = 0; k < nn; ++k) {
        const SurfaceState& s = rec.states[k];
        const std::vector<double> a2 = detail::leaf_A2(s);
        std::vector<double> h2 = detail::leaf_H2(s);
        const SurfaceOperators opsH = surface_operators(s, s.H);
        const SurfaceOperators opsH2 = surface_operators(s, h2);
        const ScalarHessian hess = scalar_hessian(s, h2);
        std::vector<double> f_core(n), f_hess(n), f_lap(n), f_h1(n), f_h0(n), fq(n);
        for (int j = 0; j < n; ++j) {
            const double rc = s.amb_Rc_nn[j];
            f_core[j] = 4.0 * rc * rc + 8.0 * a2[j] * std::abs(rc) + 4.0 * a2[j] * a2[j];
            const double grad_h2_sq = opsH2.grad2[j];
            f_hess[j] = std::abs(rc) * grad_h2_sq / sq(sq(H1));
            f_lap[j] = sq(opsH2.laplacian[j]) / sq(h2[j]);
            const double hess2 = sq(hess.thth[j] / s.g_thth[j]) + sq(hess.phph[j] / s.g_phph[j]);
            f_h1[j] = hess2 / sq(sq(H1));
            f_h0[j] = hess2 / sq(sq(H0));
            fq[j] = opsH.grad2[j] / sq(s.H[j]);
        }
        const double r0et = rec.r0 * rec.r0 * std::exp(rec.times[k]);
        double psi2 = 0.0, pr = 0.0, co = 0.0;
        for (int j = 0; j < n; ++j) {
            psi2 += sq(psi[k][j]) * rec.grid.w[j];
            // linear-PDE residuals, fields carried to the gauge lattice
            const double th = rec.gauge.Theta[k][j];
            const double lapH2 = interp_cubic(rec.grid, opsH2.laplacian, Parity::even, th);
            const double a2g = sq(rec.gauge.lam1[k][j]) + sq(rec.gauge.lam2[k][j]);
            const double qg = interp_cubic(rec.grid, fq, Parity::even, th);
            const double Hg = rec.gauge.H[k][j];
            const double base = psi[k][j] - lapH2 / sq(Hg) + 2.0 * a2g + 2.0 * rec.gauge.Rc_nn[k][j];
            pr += sq(base) * rec.grid.w[j];
            co += sq(base + 6.0 * qg) * rec.grid.w[j];
        }
        rhs_dt += wt[k] * r0et * psi2;
        pde_printed += wt[k] * r0et * pr;
        pde_corrected += wt[k] * r0et * co;
        lhs_core += wt[k] * surface_integral(s, f_core);
        lhs_hess_extra += wt[k] * surface_integral(s, f_hess);
        rhs_lap += wt[k] * surface_integral(s, f_lap);
        rhs_hess_H1 += wt[k] * surface_integral(s, f_h1);
        rhs_hess_H0 += wt[k] * surface_integral(s, f_h0);
        const double qk = surface_integral(s, fq);
        if (k == 0) q0 = qk;
        q_sup = std::max(q_sup, qk);
    }
    RicciMargins m;
    m.margin_laplacian = lhs_core + q0 - (rhs_dt + rhs_lap + q_sup);
    m.margin_hessian = lhs_core + lhs_hess_extra + q0 - (rhs_dt + rhs_hess_H1 + q_sup);
    m.margin_hessian_H0 = lhs_core + lhs_hess_extra + q0 - (rhs_dt + rhs_hess_H0 + q_sup);
    m.pde_residual_printed = pde_printed;
    m.pde_residual_corrected = pde_corrected;
    return m;
}

/// Per-time int |DA|^2 r0^2 e^t dsigma (sigma-covariant), the umbilic deviation
/// factor, and the interpolation bound with the realized ||D^2 A|| constant.
inline NamedTable second_ff_gradient_decay(const FlowRecord& rec) {
    const int nn = rec.n_nodes(), n = rec.grid.n;
    const LeafMetric2 sigma = LeafMetric2::round_sigma(rec.grid);
    const std::vector<double> wt = simpson_weights(nn, rec.dt());
    const std::vector<double> zeros(n, 0.0);
    std::vector<double> int_da2(nn), dev(nn);
    double a2_global = 0.0;
    for (int k = 0; k < nn; ++k) {
        const Tensor2 A = make_sym2(rec.gauge.A_xx[k], zeros, rec.gauge.A_pp[k]);
        const Tensor3 DA = covariant_derivative(A, sigma);
        const Tensor4 D2A = covariant_derivative(DA, sigma);
        const std::vector<double> nda = tensor_norm2(DA, sigma);
        const std::vector<double> nd2a = tensor_norm2(D2A, sigma);
        const double r0et = rec.r0 * rec.r0 * std::exp(rec.times[k]);
        double s_da = 0.0, s_d2a = 0.0, s_dev = 0.0;
        const double mu = std::exp(-0.5 * rec.times[k]) / rec.r0;
        for (int j = 0; j < n; ++j) {
            s_da += nda[j] * rec.grid.w[j];
            s_d2a += nd2a[j] * rec.grid.w[j];
            const double d = std::max(sq(rec.gauge.lam1[k][j] - mu), sq(rec.gauge.lam2[k][j] - mu));
            s_dev += 2.0 * d * rec.grid.w[j];
        }
        int_da2[k] = r0et * s_da;
        dev[k] = std::sqrt(r0et * s_dev);
        a2_global += wt[k] * r0et * s_d2a;
    }
    const double sqrtA2 = std::sqrt(std::sqrt(std::max(a2_global, 0.0)));
    NamedTable t;
    t.tag = "corollary=2ndFundFormDerToZero";
    t.columns = {"t", "int_DA2", "deviation", "bound"};
    for (int k = 0; k < nn; ++k)
        t.rows.push_back({rec.times[k], int_da2[k], dev[k], sqrtA2 * sqrtA2 * dev[k]});
    return t;
}

/// int F^2 dmu bracket from the mass extremes: 16 pi (1 - sqrt(16pi/|S0|) m e^{-t/2}).
struct MassBracket {
    double max_violation = 0.0;  // positive when the bracket fails
};

inline MassBracket mass_bracket_check(const FlowRecord& rec, MassVariant v) {
    const std::vector<double> m = mass_series(rec, v);
    const double m1 = *std::min_element(m.begin(), m.end());
    const double m2 = *std::max_element(m.begin(), m.end());
    const double area0 = rec.states.front().area;
    MassBracket out;
    for (int k = 0; k < rec.n_nodes(); ++k) {
        const SurfaceState& s = rec.states[k];
        double q = surface_integral(s, detail::leaf_H2(s));
        if (v == MassVariant::hyperbolic) q -= 4.0 * s.area;
        const double c = 16.0 * kPi;
        const double root = std::sqrt(c / area0) * std::exp(-0.5 * rec.times[k]);
        const double lo = c * (1.0 - root * m2);
        const double hi = c * (1.0 - root * m1);
        out.max_violation = std::max({out.max_violation, lo - q, q - hi});
    }
    return out;
}

}  // namespace imcflab
