#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "imcflab/common.hpp"
#include "imcflab/grid.hpp"
#include "imcflab/profile.hpp"
#include "imcflab/surface.hpp"
#include "imcflab/tensor_calc.hpp"

namespace imcflab {

enum class Provenance { exact, pde };

inline std::string to_string(Provenance p) { return p == Provenance::exact ? "exact" : "pde"; }

/// Gauge fields on the (x_j, t_k) lattice of IMCF flow-line labels.  Labels are
/// an area-preserving parameterization of Sigma_0 advected by the flow, so
/// dmu_t = r0^2 e^t dsigma holds exactly and the leaf metric obeys
/// dg/dt = (2/H) A without tangential drift.  For round leaves the labels are
/// the grid colatitudes and these arrays equal the per-state fields.
struct GaugeFields {
    // [k][j] with k the time node, j the label node
    std::vector<std::vector<double>> Theta;          // graph colatitude of label j at t_k
    std::vector<std::vector<double>> lam_th, lam_ph; // principal curvatures by direction
    std::vector<std::vector<double>> lam1, lam2;     // sorted
    std::vector<std::vector<double>> H;              // lam_th + lam_ph
    std::vector<std::vector<double>> Rc_nn, R;       // ambient samples along flow lines
    std::vector<std::vector<double>> g_xx, g_pp;     // leaf metric, transported
    std::vector<std::vector<double>> A_xx, A_pp;     // lam * g
};

struct ClassBounds {
    double H0 = 0.01, H1 = 100.0, A1 = 1e4, D = 100.0, C = 1e4;
};

struct FlowRecord {
    WarpedProfile profile;
    AxisymGrid grid;
    double T = 0.0;
    int n_t = 0;
    std::vector<double> times;
    std::vector<SurfaceState> states;
    GaugeFields gauge;
    double r0 = 0.0;
    Provenance provenance = Provenance::exact;
    double H_min = 0.0, H_max = 0.0;
    double area_max_rel_err = 0.0;

    double dt() const { return n_t > 0 ? T / n_t : 0.0; }
    int n_nodes() const { return n_t + 1; }
};

namespace detail {

inline void check_flow_state(const SurfaceState& s) {
    for (double h : s.H)
        if (!(h > 0.0)) throw FlowBreakdown("flow: mean curvature lost positivity");
}

inline std::vector<double> drift_field(const SurfaceState& s) {
    std::vector<double> d(s.n());
    for (int j = 0; j < s.n(); ++j)
        d[j] = -s.drho[j] / (s.rho[j] * s.rho[j] * s.nnorm[j] * s.H[j]);
    return d;
}

struct FlowRhs {
    std::vector<double> drho, dTheta;
};

inline FlowRhs flow_rhs(const WarpedProfile& p, const AxisymGrid& g, const std::vector<double>& rho,
                        const std::vector<double>& Theta, double tilt_cap) {
    SurfaceState s = surface_geometry(p, g, rho, tilt_cap);
    check_flow_state(s);
    FlowRhs r;
    r.drho.resize(g.n);
    for (int j = 0; j < g.n; ++j) r.drho[j] = s.nnorm[j] / s.H[j];
    if (!Theta.empty()) {
        const std::vector<double> drift = drift_field(s);
        r.dTheta.resize(Theta.size());
        for (size_t i = 0; i < Theta.size(); ++i)
            r.dTheta[i] = interp_cubic(g, drift, Parity::odd, Theta[i]);
    }
    return r;
}

inline void rk4_step(const WarpedProfile& p, const AxisymGrid& g, std::vector<double>& rho,
                     std::vector<double>& Theta, double h, double tilt_cap) {
    const size_t n = rho.size(), nt = Theta.size();
    auto axpy = [](const std::vector<double>& y, const std::vector<double>& d, double a) {
        std::vector<double> out(y.size());
        for (size_t i = 0; i < y.size(); ++i) out[i] = y[i] + a * d[i];
        return out;
    };
    FlowRhs k1 = flow_rhs(p, g, rho, Theta, tilt_cap);
    FlowRhs k2 = flow_rhs(p, g, axpy(rho, k1.drho, 0.5 * h), axpy(Theta, k1.dTheta, 0.5 * h), tilt_cap);
    FlowRhs k3 = flow_rhs(p, g, axpy(rho, k2.drho, 0.5 * h), axpy(Theta, k2.dTheta, 0.5 * h), tilt_cap);
    FlowRhs k4 = flow_rhs(p, g, axpy(rho, k3.drho, h), axpy(Theta, k3.dTheta, h), tilt_cap);
    for (size_t j = 0; j < n; ++j)
        rho[j] += h / 6.0 * (k1.drho[j] + 2.0 * k2.drho[j] + 2.0 * k3.drho[j] + k4.drho[j]);
    for (size_t i = 0; i < nt; ++i)
        Theta[i] += h / 6.0 * (k1.dTheta[i] + 2.0 * k2.dTheta[i] + 2.0 * k3.dTheta[i] + k4.dTheta[i]);
}

/// Diffusion-type CFL bound for the quasilinear graph equation.
inline double cfl_dt(const SurfaceState& s) {
    double b = std::numeric_limits<double>::infinity();
    for (int j = 0; j < s.n(); ++j) {
        const double cand = 0.25 * s.H[j] * s.tilt[j] * s.rho[j] * s.rho[j] *
                            s.grid.dtheta * s.grid.dtheta / std::sqrt(s.V[j]);
        b = std::min(b, cand);
    }
    return b;
}

inline bool is_round(const std::vector<double>& rho) {
    double lo = rho[0], hi = rho[0];
    for (double r : rho) {
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    return hi - lo <= 1e-12 * std::max(1.0, std::abs(hi));
}

}  // namespace detail

/// One explicit RK4 step of the radial-graph IMCF system d rho/dt = |n|/H.
/// Guards: FlowBreakdown on H <= 0 or tilt cap, StepTooLarge when the post-step
/// area strays more than 1% from e^{dt} times the pre-step area.
inline std::vector<double> imcf_step(const WarpedProfile& p, const SurfaceState& state, double dt,
                                     double tilt_cap = 1e3) {
    detail::check_flow_state(state);
    std::vector<double> rho = state.rho, none;
    try {
        detail::rk4_step(p, state.grid, rho, none, dt, tilt_cap);
        const SurfaceState after = surface_geometry(p, state.grid, rho, tilt_cap);
        const double expected = state.area * std::exp(dt);
        if (std::abs(after.area - expected) > 0.01 * expected)
            throw StepTooLarge("imcf_step: area moved off e^{dt} law by more than 1%");
    } catch (const RadiusOutOfDomain& e) {
        throw FlowBreakdown(std::string("imcf_step: ") + e.what());
    } catch (const NonGraphical& e) {
        throw FlowBreakdown(std::string("imcf_step: ") + e.what());
    }
    return rho;
}

/// Exact foliation by centered spheres, r(t) = r0 e^{t/2}; valid in every
/// warped product since dr/dt = sqrt(V)/H = r/2.
inline FlowRecord exact_round_flow(const WarpedProfile& p, double r0, double T, int n_t,
                                   int n_theta) {
    if (!(r0 > p.r_min)) throw RadiusOutOfDomain("exact_round_flow: r0 inside r_min");
    if (n_t < 1) throw ValidationError("exact_round_flow: n_t >= 1");
    FlowRecord rec;
    rec.profile = p;
    rec.grid = AxisymGrid(n_theta);
    rec.T = T;
    rec.n_t = n_t;
    rec.r0 = r0;
    rec.provenance = Provenance::exact;
    const int nn = rec.n_nodes(), n = rec.grid.n;
    rec.times.resize(nn);
    rec.states.reserve(nn);
    auto& gf = rec.gauge;
    auto alloc = [&](std::vector<std::vector<double>>& f) { f.assign(nn, std::vector<double>(n)); };
    alloc(gf.Theta); alloc(gf.lam_th); alloc(gf.lam_ph); alloc(gf.lam1); alloc(gf.lam2);
    alloc(gf.H); alloc(gf.Rc_nn); alloc(gf.R); alloc(gf.g_xx); alloc(gf.g_pp);
    alloc(gf.A_xx); alloc(gf.A_pp);
    rec.H_min = std::numeric_limits<double>::infinity();
    rec.H_max = 0.0;
    for (int k = 0; k < nn; ++k) {
        const double t = k * rec.dt();
        rec.times[k] = t;
        const double r = r0 * std::exp(0.5 * t);
        std::vector<double> rho(n, r);
        SurfaceState s = surface_geometry(p, rec.grid, rho);
        const AmbientCurvatures ac = ambient_curvatures(p, r);
        const double lam = std::sqrt(s.V[0]) / r;
        for (int j = 0; j < n; ++j) {
            const double st = std::sin(rec.grid.theta[j]);
            gf.Theta[k][j] = rec.grid.theta[j];
            gf.lam_th[k][j] = lam;
            gf.lam_ph[k][j] = lam;
            gf.lam1[k][j] = lam;
            gf.lam2[k][j] = lam;
            gf.H[k][j] = 2.0 * lam;
            gf.Rc_nn[k][j] = ac.Rc_nn;
            gf.R[k][j] = ac.R;
            gf.g_xx[k][j] = r * r;
            gf.g_pp[k][j] = r * r * st * st;
            gf.A_xx[k][j] = lam * r * r;
            gf.A_pp[k][j] = lam * r * r * st * st;
        }
        rec.H_min = std::min(rec.H_min, 2.0 * lam);
        rec.H_max = std::max(rec.H_max, 2.0 * lam);
        const double rel = std::abs(r * r / (r0 * r0 * std::exp(t)) - 1.0);
        rec.area_max_rel_err = std::max(rec.area_max_rel_err, rel);
        rec.states.push_back(std::move(s));
    }
    return rec;
}

/// Time-stepped axisymmetric radial-graph IMCF.  Integrates rho on the grid and
/// flow-line labels Theta alongside; the record's gauge metric is transported by
/// g(t) = g(0) exp(int 2 lambda / H) with a trapezoid rule shared with the
/// sandwich diagnostics.  The area law is enforced to 1e-4 relative, retrying
/// with halved substeps up to 3 times.
inline FlowRecord run_imcf(const WarpedProfile& p, const AxisymGrid& grid,
                           const std::vector<double>& rho0, double T, int n_t,
                           double tilt_cap = 1e3) {
    if (n_t < 1) throw ValidationError("run_imcf: n_t >= 1");
    SurfaceState s0 = surface_geometry(p, grid, rho0, tilt_cap);
    detail::check_flow_state(s0);
    const double r0 = std::sqrt(s0.area / (4.0 * kPi));
    const int n = grid.n;
    const double dt_rec = T / n_t;

    // Initial labels: area-preserving relabel of the initial leaf.  The
    // cumulative area is inverted in the cos(theta) domain, where the label
    // density is smooth and bounded away from zero at the poles; on round data
    // the inversion returns the grid colatitudes exactly.
    std::vector<double> Theta0(n);
    if (detail::is_round(rho0)) {
        Theta0 = grid.theta;
    } else {
        std::vector<double> node_area(n);
        for (int j = 0; j < n; ++j)
            node_area[j] = std::sqrt(s0.g_thth[j] * s0.g_phph[j]) / std::sin(grid.theta[j]) * grid.w[j];
        std::vector<double> cum(n + 1, 0.0), cb(n + 1);  // at cell boundaries theta = j*dtheta
        for (int j = 0; j <= n; ++j) cb[j] = std::cos(j * grid.dtheta);
        for (int j = 0; j < n; ++j) cum[j + 1] = cum[j] + node_area[j];
        for (int i = 0; i < n; ++i) {
            const double target = s0.area * 0.5 * (1.0 - std::cos(grid.theta[i]));
            int c = int(std::upper_bound(cum.begin(), cum.end(), target) - cum.begin()) - 1;
            c = std::clamp(c, 0, n - 1);
            const double frac = (target - cum[c]) / node_area[c];
            const double cosTheta = cb[c] + (cb[c + 1] - cb[c]) * frac;
            Theta0[i] = std::acos(std::clamp(cosTheta, -1.0, 1.0));
        }
    }

    for (int attempt = 0; attempt <= 3; ++attempt) {
        FlowRecord rec;
        rec.profile = p;
        rec.grid = grid;
        rec.T = T;
        rec.n_t = n_t;
        rec.r0 = r0;
        rec.provenance = Provenance::pde;
        const int nn = rec.n_nodes();
        rec.times.resize(nn);
        auto& gf = rec.gauge;
        auto alloc = [&](std::vector<std::vector<double>>& f) { f.assign(nn, std::vector<double>(n)); };
        alloc(gf.Theta); alloc(gf.lam_th); alloc(gf.lam_ph); alloc(gf.lam1); alloc(gf.lam2);
        alloc(gf.H); alloc(gf.Rc_nn); alloc(gf.R); alloc(gf.g_xx); alloc(gf.g_pp);
        alloc(gf.A_xx); alloc(gf.A_pp);
        rec.states.clear();
        rec.states.reserve(nn);
        rec.H_min = std::numeric_limits<double>::infinity();
        rec.H_max = 0.0;
        rec.area_max_rel_err = 0.0;

        std::vector<double> rho = rho0, Theta = Theta0;
        SurfaceState cur = s0;

        auto sample_gauge = [&](int k, const SurfaceState& st) {
            for (int i = 0; i < n; ++i) {
                const double th = Theta[i];
                const double lt = interp_cubic(grid, st.lam_th, Parity::even, th);
                const double lp = interp_cubic(grid, st.lam_ph, Parity::even, th);
                gf.Theta[k][i] = th;
                gf.lam_th[k][i] = lt;
                gf.lam_ph[k][i] = lp;
                gf.lam1[k][i] = std::min(lt, lp);
                gf.lam2[k][i] = std::max(lt, lp);
                gf.H[k][i] = lt + lp;
                gf.Rc_nn[k][i] = interp_cubic(grid, st.amb_Rc_nn, Parity::even, th);
                gf.R[k][i] = interp_cubic(grid, st.amb_R, Parity::even, th);
                if (k == 0) {
                    const double E = interp_cubic(grid, st.g_thth, Parity::even, th);
                    const double G = interp_cubic(grid, st.g_phph, Parity::even, th);
                    const double dthdx = r0 * r0 * std::sin(grid.theta[i]) / std::sqrt(E * G);
                    gf.g_xx[k][i] = E * dthdx * dthdx;
                    gf.g_pp[k][i] = G;
                } else {
                    const double f_th = dt_rec * (gf.lam_th[k - 1][i] / gf.H[k - 1][i] +
                                                  gf.lam_th[k][i] / gf.H[k][i]);
                    const double f_ph = dt_rec * (gf.lam_ph[k - 1][i] / gf.H[k - 1][i] +
                                                  gf.lam_ph[k][i] / gf.H[k][i]);
                    gf.g_xx[k][i] = gf.g_xx[k - 1][i] * std::exp(f_th);
                    gf.g_pp[k][i] = gf.g_pp[k - 1][i] * std::exp(f_ph);
                }
                gf.A_xx[k][i] = gf.lam_th[k][i] * gf.g_xx[k][i];
                gf.A_pp[k][i] = gf.lam_ph[k][i] * gf.g_pp[k][i];
            }
        };

        bool area_ok = true;
        rec.times[0] = 0.0;
        sample_gauge(0, cur);
        rec.states.push_back(cur);
        for (int k = 0; k < n_t && area_ok; ++k) {
            const double dt_stable = detail::cfl_dt(cur);
            int n_sub = std::max(1, static_cast<int>(std::ceil(dt_rec / dt_stable)));
            n_sub <<= attempt;
            const double h = dt_rec / n_sub;
            try {
                for (int ss = 0; ss < n_sub; ++ss)
                    detail::rk4_step(p, grid, rho, Theta, h, tilt_cap);
                cur = surface_geometry(p, grid, rho, tilt_cap);
            } catch (const RadiusOutOfDomain& e) {
                throw FlowBreakdown(std::string("run_imcf: ") + e.what());
            } catch (const NonGraphical& e) {
                throw FlowBreakdown(std::string("run_imcf: ") + e.what());
            }
            detail::check_flow_state(cur);
            const double t = (k + 1) * dt_rec;
            rec.times[k + 1] = t;
            sample_gauge(k + 1, cur);
            rec.states.push_back(cur);
            const double rel = std::abs(cur.area / (s0.area * std::exp(t)) - 1.0);
            rec.area_max_rel_err = std::max(rec.area_max_rel_err, rel);
            if (rel > 1e-4) area_ok = false;
        }
        if (!area_ok) continue;
        for (const SurfaceState& st : rec.states)
            for (double h : st.H) {
                rec.H_min = std::min(rec.H_min, h);
                rec.H_max = std::max(rec.H_max, h);
            }
        return rec;
    }
    throw NoConvergence("run_imcf: area law not met after 3 substep halvings");
}

struct ClassReport {
    double H_realized_min = 0.0, H_realized_max = 0.0;
    double A_W22 = 0.0;
    double Rc_W12 = 0.0;
    double R_L2 = 0.0;
    double diam_max = 0.0;
    double K_final_max = 0.0;
    bool H_in_bounds = false, A_ok = false, Rc_ok = false, R_ok = false, diam_ok = false, K_ok = false;
    bool pass = false;
};

/// Realized class-membership data: H range, ||A||_{W^{2,2}} with sigma-covariant
/// derivatives and measure r0^2 e^t dsigma dt, ||Rc(nu,nu)||_{W^{1,2}} and
/// ||R||_{L^2} with respect to the flat gauge metric, diameters, and |K| on the
/// final leaf.
inline ClassReport class_membership_report(const FlowRecord& rec, const ClassBounds& b) {
    ClassReport rep;
    rep.H_realized_min = rec.H_min;
    rep.H_realized_max = rec.H_max;
    const int nn = rec.n_nodes(), n = rec.grid.n;
    const double r0 = rec.r0;
    const LeafMetric2 sigma = LeafMetric2::round_sigma(rec.grid);
    const std::vector<double> wt = simpson_weights(nn, rec.dt());
    const std::vector<double> zeros(n, 0.0);

    // sigma-covariant W^{2,2} of A on the gauge lattice
    std::vector<Tensor2> A(nn), At(nn), Att(nn);
    for (int k = 0; k < nn; ++k) A[k] = make_sym2(rec.gauge.A_xx[k], zeros, rec.gauge.A_pp[k]);
    for (int c = 0; c < 4; ++c) {
        for (int k = 0; k < nn; ++k) {
            At[k].comp[c].resize(n);
            Att[k].comp[c].resize(n);
        }
        for (int j = 0; j < n; ++j) {
            std::vector<double> series(nn);
            for (int k = 0; k < nn; ++k) series[k] = A[k].comp[c][j];
            std::vector<double> d1 = time_derivative(series, rec.dt());
            std::vector<double> d2 = time_derivative(d1, rec.dt());
            for (int k = 0; k < nn; ++k) {
                At[k].comp[c][j] = d1[k];
                Att[k].comp[c][j] = d2[k];
            }
        }
    }
    double a_w22 = 0.0, rc_w12 = 0.0, r_l2 = 0.0;
    for (int k = 0; k < nn; ++k) {
        const double et = std::exp(rec.times[k]);
        const Tensor3 DA = covariant_derivative(A[k], sigma);
        const Tensor4 D2A = covariant_derivative(DA, sigma);
        const Tensor3 DAt = covariant_derivative(At[k], sigma);
        std::vector<double> dens = tensor_norm2(A[k], sigma);
        std::vector<double> n_da = tensor_norm2(DA, sigma);
        std::vector<double> n_d2a = tensor_norm2(D2A, sigma);
        std::vector<double> n_at = tensor_norm2(At[k], sigma);
        std::vector<double> n_dat = tensor_norm2(DAt, sigma);
        std::vector<double> n_att = tensor_norm2(Att[k], sigma);
        double leaf = 0.0;
        for (int j = 0; j < n; ++j)
            leaf += (dens[j] + n_da[j] + n_d2a[j] + n_at[j] + n_dat[j] + n_att[j]) * rec.grid.w[j];
        a_w22 += wt[k] * r0 * r0 * et * leaf;

        // delta-background norms of Rc(nu,nu) and R
        const double dvol = 0.5 * r0 * r0 * r0 * et;  // (r0^3/2) e^t per unit solid angle
        const double dtt = 4.0 / (r0 * r0), dthth = std::exp(-rec.times[k]) / (r0 * r0);
        std::vector<double> rc_t(n), rc_th = dtheta_fd(rec.grid, rec.gauge.Rc_nn[k], Parity::even);
        for (int j = 0; j < n; ++j) {
            std::vector<double> series(nn);
            // time derivative of Rc along label j (computed below once per j would be
            // cheaper; kept simple at desk scale)
            for (int kk = 0; kk < nn; ++kk) series[kk] = rec.gauge.Rc_nn[kk][j];
            rc_t[j] = time_derivative(series, rec.dt())[k];
        }
        double leaf_rc = 0.0, leaf_r = 0.0;
        for (int j = 0; j < n; ++j) {
            const double f = rec.gauge.Rc_nn[k][j];
            leaf_rc += (f * f + dtt * rc_t[j] * rc_t[j] + dthth * rc_th[j] * rc_th[j]) * rec.grid.w[j];
            leaf_r += sq(rec.gauge.R[k][j]) * rec.grid.w[j];
        }
        rc_w12 += wt[k] * dvol * leaf_rc;
        r_l2 += wt[k] * dvol * leaf_r;
    }
    rep.A_W22 = std::sqrt(a_w22);
    rep.Rc_W12 = std::sqrt(rc_w12);
    rep.R_L2 = std::sqrt(r_l2);

    for (const SurfaceState& st : rec.states) rep.diam_max = std::max(rep.diam_max, diameter(st));
    for (double k : rec.states.back().K) rep.K_final_max = std::max(rep.K_final_max, std::abs(k));

    rep.H_in_bounds = rec.H_min >= b.H0 && rec.H_max <= b.H1;
    rep.A_ok = rep.A_W22 <= b.A1;
    rep.Rc_ok = rep.Rc_W12 <= b.C;
    rep.R_ok = rep.R_L2 <= b.C;
    rep.diam_ok = rep.diam_max <= b.D;
    rep.K_ok = rep.K_final_max <= b.C;
    rep.pass = rep.H_in_bounds && rep.A_ok && rep.Rc_ok && rep.R_ok && rep.diam_ok && rep.K_ok;
    return rep;
}

namespace detail {

inline void write_field_csv(const std::string& path, const FlowRecord& rec,
                            const std::vector<std::vector<double>>& field) {
    std::ofstream out(path);
    if (!out) throw Error("write_field_csv: cannot open " + path);
    out << "t";
    for (int j = 0; j < rec.grid.n; ++j) out << ",theta_" << fmt17(rec.grid.theta[j]);
    out << '\n';
    for (int k = 0; k < rec.n_nodes(); ++k) {
        out << fmt17(rec.times[k]);
        for (int j = 0; j < rec.grid.n; ++j) out << ',' << fmt17(field[k][j]);
        out << '\n';
    }
}

}  // namespace detail

/// One CSV per field, rows t_k and columns theta_j.
inline void write_record_csvs(const FlowRecord& rec, const std::string& dir) {
    const int nn = rec.n_nodes(), n = rec.grid.n;
    std::vector<std::vector<double>> rho(nn, std::vector<double>(n)), Hs = rho;
    for (int k = 0; k < nn; ++k)
        for (int j = 0; j < n; ++j) {
            rho[k][j] = rec.states[k].rho[j];
            Hs[k][j] = rec.states[k].H[j];
        }
    detail::write_field_csv(dir + "/rho.csv", rec, rho);
    detail::write_field_csv(dir + "/H_graph.csv", rec, Hs);
    detail::write_field_csv(dir + "/H.csv", rec, rec.gauge.H);
    detail::write_field_csv(dir + "/g_thth.csv", rec, rec.gauge.g_xx);
    detail::write_field_csv(dir + "/g_phph.csv", rec, rec.gauge.g_pp);
    detail::write_field_csv(dir + "/A_thth.csv", rec, rec.gauge.A_xx);
    detail::write_field_csv(dir + "/A_phph.csv", rec, rec.gauge.A_pp);
    detail::write_field_csv(dir + "/lambda1.csv", rec, rec.gauge.lam1);
    detail::write_field_csv(dir + "/lambda2.csv", rec, rec.gauge.lam2);
}

}  // namespace imcflab
