#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "imcflab/common.hpp"
#include "imcflab/flow.hpp"
#include "imcflab/mass.hpp"

namespace imcflab {

enum class ChainStage { ghat, g1, g2, g3 };
enum class CaseTag { pmt_flat, rpi_schwarzschild, pmt_hyperbolic, rpi_adss };
enum class SobolevOrder { L2, W12 };
enum class DerivativeMode { delta_covariant, coordinate_partial };
enum class G3BaseSlice { final_slice, zero_slice };

inline std::string to_string(ChainStage s) {
    switch (s) {
        case ChainStage::ghat: return "ghat";
        case ChainStage::g1: return "g1";
        case ChainStage::g2: return "g2";
        case ChainStage::g3: return "g3";
    }
    return "?";
}

inline std::string to_string(CaseTag c) {
    switch (c) {
        case CaseTag::pmt_flat: return "pmt-flat";
        case CaseTag::rpi_schwarzschild: return "rpi-schwarzschild";
        case CaseTag::pmt_hyperbolic: return "pmt-hyperbolic";
        case CaseTag::rpi_adss: return "rpi-adss";
    }
    return "?";
}

inline std::string to_string(DerivativeMode m) {
    return m == DerivativeMode::delta_covariant ? "delta-covariant" : "coordinate-partial";
}

inline bool case_is_rpi(CaseTag c) {
    return c == CaseTag::rpi_schwarzschild || c == CaseTag::rpi_adss;
}

inline bool case_profile_compatible(CaseTag c, ProfileKind k) {
    switch (c) {
        case CaseTag::pmt_flat: return k == ProfileKind::flat;
        case CaseTag::rpi_schwarzschild: return k == ProfileKind::schwarzschild;
        case CaseTag::pmt_hyperbolic: return k == ProfileKind::hyperbolic;
        case CaseTag::rpi_adss: return k == ProfileKind::adss;
    }
    return false;
}

/// Block-diagonal 3-metric N^2 dt^2 + g_xx dx^2 + g_pp dphi^2 on the
/// (theta_j, t_k) lattice.
struct AnnulusMetric {
    AxisymGrid grid;
    std::vector<double> times;
    double r0 = 0.0;
    std::string tag;
    std::vector<std::vector<double>> N2, g_xx, g_pp;  // [k][j]

    int n_nodes() const { return static_cast<int>(times.size()); }
    double dt() const { return n_nodes() > 1 ? times[1] - times[0] : 0.0; }
};

namespace detail {

inline double case_lapse_sq(CaseTag c, double r0, double m, double t) {
    switch (c) {
        case CaseTag::pmt_flat:
            return 0.25 * r0 * r0 * std::exp(t);
        case CaseTag::rpi_schwarzschild: {
            const double bracket = 1.0 - 2.0 * m / r0 * std::exp(-0.5 * t);
            if (!(bracket > 0.0)) throw LapseSingular("lapse bracket nonpositive (rpi-schwarzschild)");
            return 0.25 * r0 * r0 * std::exp(t) / bracket;
        }
        case CaseTag::pmt_hyperbolic:
            return 0.25 / (1.0 + std::exp(-t) / (r0 * r0));
        case CaseTag::rpi_adss: {
            const double bracket =
                1.0 + std::exp(-t) / (r0 * r0) - 2.0 * m / (r0 * r0 * r0) * std::exp(-1.5 * t);
            if (!(bracket > 0.0)) throw LapseSingular("lapse bracket nonpositive (rpi-adss)");
            return 0.25 / bracket;
        }
    }
    throw Error("case_lapse_sq: bad case");
}

inline void check_case_mass(CaseTag c, double m) {
    if (case_is_rpi(c)) {
        if (!(m > 0.0)) throw CaseMassMismatch("rpi case requires m > 0");
    } else if (m != 0.0) {
        throw CaseMassMismatch("pmt case requires m = 0");
    }
}

inline void validate_metric(const AnnulusMetric& h) {
    for (int k = 0; k < h.n_nodes(); ++k)
        for (int j = 0; j < h.grid.n; ++j)
            if (!(h.N2[k][j] > 0.0) || !(h.g_xx[k][j] > 0.0) || !(h.g_pp[k][j] > 0.0))
                throw Error("AnnulusMetric: nonpositive component at (" + std::to_string(k) + "," +
                            std::to_string(j) + ")");
}

}  // namespace detail

inline AnnulusMetric prototype_metric(CaseTag c, double r0, double m, double T,
                                      const AxisymGrid& grid, int n_t) {
    detail::check_case_mass(c, m);
    AnnulusMetric h;
    h.grid = grid;
    h.r0 = r0;
    h.tag = "prototype-" + to_string(c);
    h.times.resize(n_t + 1);
    h.N2.assign(n_t + 1, std::vector<double>(grid.n));
    h.g_xx.assign(n_t + 1, std::vector<double>(grid.n));
    h.g_pp.assign(n_t + 1, std::vector<double>(grid.n));
    for (int k = 0; k <= n_t; ++k) {
        const double t = T * k / n_t;
        h.times[k] = t;
        const double lapse = detail::case_lapse_sq(c, r0, m, t);
        const double leaf = r0 * r0 * std::exp(t);
        for (int j = 0; j < grid.n; ++j) {
            h.N2[k][j] = lapse;
            h.g_xx[k][j] = leaf;
            h.g_pp[k][j] = leaf * sq(std::sin(grid.theta[j]));
        }
    }
    detail::validate_metric(h);
    return h;
}

inline std::vector<double> mean_curvature_average_series(const FlowRecord& rec) {
    std::vector<double> hb(rec.n_nodes());
    for (int k = 0; k < rec.n_nodes(); ++k)
        hb[k] = surface_integral(rec.states[k], rec.states[k].H) / rec.states[k].area;
    return hb;
}

inline AnnulusMetric chain_metric(const FlowRecord& rec, ChainStage stage, CaseTag c, double m,
                                  G3BaseSlice g3_base = G3BaseSlice::final_slice) {
    detail::check_case_mass(c, m);
    const int nn = rec.n_nodes(), n = rec.grid.n;
    AnnulusMetric h;
    h.grid = rec.grid;
    h.times = rec.times;
    h.r0 = rec.r0;
    h.tag = to_string(stage);
    h.N2.assign(nn, std::vector<double>(n));
    h.g_xx.assign(nn, std::vector<double>(n));
    h.g_pp.assign(nn, std::vector<double>(n));
    const std::vector<double> hbar = mean_curvature_average_series(rec);
    for (double x : hbar)
        if (!(x > 0.0)) throw FlowBreakdown("chain_metric: average mean curvature nonpositive");
    const double T = rec.T;
    for (int k = 0; k < nn; ++k) {
        const double t = rec.times[k];
        for (int j = 0; j < n; ++j) {
            switch (stage) {
                case ChainStage::ghat:
                    h.N2[k][j] = 1.0 / sq(rec.gauge.H[k][j]);
                    h.g_xx[k][j] = rec.gauge.g_xx[k][j];
                    h.g_pp[k][j] = rec.gauge.g_pp[k][j];
                    break;
                case ChainStage::g1:
                    h.N2[k][j] = 1.0 / sq(hbar[k]);
                    h.g_xx[k][j] = rec.gauge.g_xx[k][j];
                    h.g_pp[k][j] = rec.gauge.g_pp[k][j];
                    break;
                case ChainStage::g2:
                    h.N2[k][j] = 1.0 / sq(hbar[k]);
                    h.g_xx[k][j] = std::exp(t - T) * rec.gauge.g_xx[nn - 1][j];
                    h.g_pp[k][j] = std::exp(t - T) * rec.gauge.g_pp[nn - 1][j];
                    break;
                case ChainStage::g3:
                    h.N2[k][j] = detail::case_lapse_sq(c, rec.r0, m, t);
                    if (g3_base == G3BaseSlice::final_slice) {
                        h.g_xx[k][j] = std::exp(t - T) * rec.gauge.g_xx[nn - 1][j];
                        h.g_pp[k][j] = std::exp(t - T) * rec.gauge.g_pp[nn - 1][j];
                    } else {
                        h.g_xx[k][j] = std::exp(t) * rec.gauge.g_xx[0][j];
                        h.g_pp[k][j] = std::exp(t) * rec.gauge.g_pp[0][j];
                    }
                    break;
            }
        }
    }
    detail::validate_metric(h);
    return h;
}

struct DistancePair {
    double l2_sq = 0.0, w12_sq = 0.0;
    double l2() const { return std::sqrt(l2_sq); }
    double w12() const { return std::sqrt(w12_sq); }
};

/// L2 / W^{1,2} distance of two block-diagonal annulus metrics against the flat
/// gauge background: measure dV = (r0^3/2) e^t sin(theta) dtheta dphi dt, index
/// raising by delta^{tt} = 4/r0^2, delta^{thth} = e^{-t}/r0^2,
/// delta^{phph} = e^{-t}/(r0^2 sin^2 theta).  The W^{1,2} term sums coordinate
/// directions k = t, theta, phi; delta-covariant mode uses the background
/// Christoffels (validated by nabla delta = 0), coordinate mode plain lattice
/// derivatives.
inline DistancePair sobolev_distance_pair(const AnnulusMetric& h1, const AnnulusMetric& h2,
                                          DerivativeMode mode) {
    if (!h1.grid.same_as(h2.grid) || h1.n_nodes() != h2.n_nodes())
        throw GridMismatch("sobolev_distance: lattices differ");
    if (std::abs(h1.r0 - h2.r0) > 1e-12 * std::max(1.0, std::abs(h1.r0)))
        throw GridMismatch("sobolev_distance: background r0 differs");
    const int nn = h1.n_nodes(), n = h1.grid.n;
    const double r0 = h1.r0, dt = h1.dt();
    const std::vector<double> wt = simpson_weights(nn, dt);

    std::vector<std::vector<double>> d_tt(nn, std::vector<double>(n)), d_xx = d_tt, d_pp = d_tt;
    for (int k = 0; k < nn; ++k)
        for (int j = 0; j < n; ++j) {
            d_tt[k][j] = h1.N2[k][j] - h2.N2[k][j];
            d_xx[k][j] = h1.g_xx[k][j] - h2.g_xx[k][j];
            d_pp[k][j] = h1.g_pp[k][j] - h2.g_pp[k][j];
        }
    auto t_deriv = [&](const std::vector<std::vector<double>>& f) {
        std::vector<std::vector<double>> out(nn, std::vector<double>(n));
        for (int j = 0; j < n; ++j) {
            std::vector<double> series(nn);
            for (int k = 0; k < nn; ++k) series[k] = f[k][j];
            const std::vector<double> d = time_derivative(series, dt);
            for (int k = 0; k < nn; ++k) out[k][j] = d[k];
        }
        return out;
    };
    const auto dt_tt = t_deriv(d_tt), dt_xx = t_deriv(d_xx), dt_pp = t_deriv(d_pp);

    DistancePair out;
    const double dtt = 4.0 / (r0 * r0);
    for (int k = 0; k < nn; ++k) {
        const double t = h1.times[k];
        const double et = std::exp(t);
        const double dth = std::exp(-t) / (r0 * r0);
        const double vol = 0.5 * r0 * r0 * r0 * et;  // per unit solid angle
        const std::vector<double> dth_tt = dtheta_fd(h1.grid, d_tt[k], Parity::even);
        const std::vector<double> dth_xx = dtheta_fd(h1.grid, d_xx[k], Parity::even);
        const std::vector<double> dth_pp = dtheta_fd(h1.grid, d_pp[k], Parity::even);
        double leaf_l2 = 0.0, leaf_d = 0.0;
        for (int j = 0; j < n; ++j) {
            const double st = std::sin(h1.grid.theta[j]), ct = std::cos(h1.grid.theta[j]);
            const double dph = dth / (st * st);
            const double l2dens = sq(dtt * d_tt[k][j]) + sq(dth * d_xx[k][j]) + sq(dph * d_pp[k][j]);
            leaf_l2 += l2dens * h1.grid.w[j];
            auto block_norm = [&](double s_tt, double s_xx, double s_pp, double s_tx, double s_tp,
                                  double s_xp) {
                return sq(dtt * s_tt) + sq(dth * s_xx) + sq(dph * s_pp) +
                       2.0 * dtt * dth * s_tx * s_tx + 2.0 * dtt * dph * s_tp * s_tp +
                       2.0 * dth * dph * s_xp * s_xp;
            };
            double dens = 0.0;
            if (mode == DerivativeMode::coordinate_partial) {
                dens += block_norm(dt_tt[k][j], dt_xx[k][j], dt_pp[k][j], 0.0, 0.0, 0.0);
                dens += block_norm(dth_tt[j], dth_xx[j], dth_pp[j], 0.0, 0.0, 0.0);
            } else {
                // nabla_t
                dens += block_norm(dt_tt[k][j], dt_xx[k][j] - d_xx[k][j], dt_pp[k][j] - d_pp[k][j],
                                   0.0, 0.0, 0.0);
                // nabla_theta
                dens += block_norm(dth_tt[j], dth_xx[j], dth_pp[j] - 2.0 * (ct / st) * d_pp[k][j],
                                   -0.5 * d_xx[k][j] + 2.0 * et * d_tt[k][j], 0.0, 0.0);
                // nabla_phi
                dens += block_norm(0.0, 0.0, 0.0, 0.0,
                                   -0.5 * d_pp[k][j] + 2.0 * et * st * st * d_tt[k][j],
                                   -(ct / st) * d_pp[k][j] + st * ct * d_xx[k][j]);
            }
            leaf_d += dens * h1.grid.w[j];
        }
        out.l2_sq += wt[k] * vol * leaf_l2;
        out.w12_sq += wt[k] * vol * leaf_d;
    }
    out.w12_sq += out.l2_sq;
    return out;
}

inline double sobolev_distance(const AnnulusMetric& h1, const AnnulusMetric& h2, SobolevOrder o,
                               DerivativeMode mode) {
    const DistancePair p = sobolev_distance_pair(h1, h2, mode);
    return o == SobolevOrder::L2 ? p.l2() : p.w12();
}

/// The flat gauge background metric itself (constant lapse r0^2/4), exposed so
/// the delta-covariant mode can be validated via nabla delta = 0.
inline AnnulusMetric background_delta(double r0, double T, const AxisymGrid& grid, int n_t) {
    AnnulusMetric h;
    h.grid = grid;
    h.r0 = r0;
    h.tag = "background-delta";
    h.times.resize(n_t + 1);
    h.N2.assign(n_t + 1, std::vector<double>(grid.n));
    h.g_xx.assign(n_t + 1, std::vector<double>(grid.n));
    h.g_pp.assign(n_t + 1, std::vector<double>(grid.n));
    for (int k = 0; k <= n_t; ++k) {
        const double t = T * k / n_t;
        h.times[k] = t;
        for (int j = 0; j < grid.n; ++j) {
            h.N2[k][j] = 0.25 * r0 * r0;
            h.g_xx[k][j] = r0 * r0 * std::exp(t);
            h.g_pp[k][j] = r0 * r0 * std::exp(t) * sq(std::sin(grid.theta[j]));
        }
    }
    return h;
}

struct SandwichMargins {
    double lower = 0.0, upper = 0.0;             // lambda2 below / lambda1 above (t <= T)
    double printed_lower = 0.0, printed_upper = 0.0;  // lambda1 in both exponents, as displayed
};

/// Metric sandwich between each leaf and the final one: for t <= T,
/// exp(-int_t^T 2 lambda2/H) g(T) <= g(t) <= exp(-int_t^T 2 lambda1/H) g(T),
/// margins measured against g(T).  The cumulative trapezoid rule is shared with
/// the record's metric transport, so the margins are exact up to rounding.
inline SandwichMargins metric_sandwich_margin(const FlowRecord& rec) {
    const int nn = rec.n_nodes(), n = rec.grid.n;
    SandwichMargins m;
    if (nn < 2) return m;
    const double dt = rec.dt();
    auto cumulative = [&](const std::vector<std::vector<double>>& lam) {
        std::vector<std::vector<double>> c(nn, std::vector<double>(n, 0.0));
        for (int k = 1; k < nn; ++k)
            for (int j = 0; j < n; ++j)
                c[k][j] = c[k - 1][j] + 0.5 * dt *
                                            (2.0 * lam[k - 1][j] / rec.gauge.H[k - 1][j] +
                                             2.0 * lam[k][j] / rec.gauge.H[k][j]);
        return c;
    };
    const auto c1 = cumulative(rec.gauge.lam1);
    const auto c2 = cumulative(rec.gauge.lam2);
    double lo = std::numeric_limits<double>::infinity(), up = lo, plo = lo, pup = lo;
    for (int k = 0; k < nn; ++k)
        for (int j = 0; j < n; ++j) {
            const double e1 = std::exp(-(c1[nn - 1][j] - c1[k][j]));
            const double e2 = std::exp(-(c2[nn - 1][j] - c2[k][j]));
            for (int comp = 0; comp < 2; ++comp) {
                const double gt = comp == 0 ? rec.gauge.g_xx[k][j] : rec.gauge.g_pp[k][j];
                const double gT = comp == 0 ? rec.gauge.g_xx[nn - 1][j] : rec.gauge.g_pp[nn - 1][j];
                lo = std::min(lo, (gt - e2 * gT) / gT);
                up = std::min(up, (e1 * gT - gt) / gT);
                plo = std::min(plo, (gt - e1 * gT) / gT);
                pup = std::min(pup, (e1 * gT - gt) / gT);
            }
        }
    m.lower = lo;
    m.upper = up;
    m.printed_lower = plo;
    m.printed_upper = pup;
    return m;
}

struct LinkDistance {
    std::string link;
    double l2 = 0.0, w12 = 0.0;
};

struct ChainReport {
    std::vector<LinkDistance> links;
    double l2_triangle_total = 0.0, w12_triangle_total = 0.0;
    double l2_direct = 0.0, w12_direct = 0.0;
    double w12_mode_gap = 0.0;  // |W12 delta-covariant - W12 coordinate-partial|, direct pair
    double vol_rel_err = 0.0;
    std::string mode, case_tag;
    double m = 0.0;
    bool case_profile_compatible_flag = true;
    double mH_final = 0.0;  // scenario metadata (variant chosen by the case)
};

inline double metric_volume(const AnnulusMetric& h) {
    const std::vector<double> wt = simpson_weights(h.n_nodes(), h.dt());
    double vol = 0.0;
    for (int k = 0; k < h.n_nodes(); ++k) {
        double leaf = 0.0;
        for (int j = 0; j < h.grid.n; ++j)
            leaf += std::sqrt(h.N2[k][j] * h.g_xx[k][j] * h.g_pp[k][j]) * h.grid.w[j] /
                    std::sin(h.grid.theta[j]);
        vol += wt[k] * leaf;
    }
    return vol;
}

inline ChainReport chain_report(const FlowRecord& rec, CaseTag c, double m,
                                DerivativeMode mode = DerivativeMode::delta_covariant,
                                G3BaseSlice g3_base = G3BaseSlice::final_slice) {
    const AnnulusMetric ghat = chain_metric(rec, ChainStage::ghat, c, m, g3_base);
    const AnnulusMetric g1 = chain_metric(rec, ChainStage::g1, c, m, g3_base);
    const AnnulusMetric g2 = chain_metric(rec, ChainStage::g2, c, m, g3_base);
    const AnnulusMetric g3 = chain_metric(rec, ChainStage::g3, c, m, g3_base);
    const AnnulusMetric proto = prototype_metric(c, rec.r0, m, rec.T, rec.grid, rec.n_t);

    ChainReport rep;
    rep.mode = to_string(mode);
    rep.case_tag = to_string(c);
    rep.m = m;
    rep.case_profile_compatible_flag = case_profile_compatible(c, rec.profile.kind);
    const MassVariant v = (c == CaseTag::pmt_hyperbolic || c == CaseTag::rpi_adss)
                              ? MassVariant::hyperbolic
                              : MassVariant::euclidean;
    rep.mH_final = hawking_mass(rec.states.back(), v);

    const std::vector<std::pair<std::string, std::pair<const AnnulusMetric*, const AnnulusMetric*>>>
        pairs = {{"ghat-g1", {&ghat, &g1}},
                 {"g1-g2", {&g1, &g2}},
                 {"g2-g3", {&g2, &g3}},
                 {"g3-prototype", {&g3, &proto}}};
    for (const auto& pr : pairs) {
        const DistancePair d = sobolev_distance_pair(*pr.second.first, *pr.second.second, mode);
        rep.links.push_back({pr.first, d.l2(), d.w12()});
        rep.l2_triangle_total += d.l2();
        rep.w12_triangle_total += d.w12();
    }
    const DistancePair direct = sobolev_distance_pair(ghat, proto, mode);
    rep.l2_direct = direct.l2();
    rep.w12_direct = direct.w12();
    const DerivativeMode other = mode == DerivativeMode::delta_covariant
                                     ? DerivativeMode::coordinate_partial
                                     : DerivativeMode::delta_covariant;
    rep.w12_mode_gap = std::abs(sobolev_distance_pair(ghat, proto, other).w12() - rep.w12_direct);
    const double vp = metric_volume(proto);
    rep.vol_rel_err = std::abs(metric_volume(ghat) - vp) / vp;
    return rep;
}

struct StudyMember {
    double parameter = 0.0;
    ChainReport report;
};

struct StudyReport {
    std::vector<StudyMember> members;
    double fit_slope = 0.0;       // least squares of log w12_direct vs log parameter
    bool monotone = false;        // w12_direct strictly decreasing (1e-8 slack)
    bool mass_monotone = false;   // |mH_final| strictly decreasing (1e-8 slack)
};

inline StudyReport convergence_study(const std::vector<StudyMember>& members) {
    if (members.size() < 4) throw FamilyTooSmall("convergence_study: need >= 4 members");
    for (size_t i = 1; i < members.size(); ++i)
        if (!(members[i].parameter < members[i - 1].parameter))
            throw ParameterNotDecreasing("convergence_study: parameter must strictly decrease");
    StudyReport rep;
    rep.members = members;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double nm = static_cast<double>(members.size());
    rep.monotone = true;
    rep.mass_monotone = true;
    for (size_t i = 0; i < members.size(); ++i) {
        const double x = std::log(members[i].parameter);
        const double y = std::log(std::max(members[i].report.w12_direct, 1e-300));
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        if (i > 0) {
            if (!(members[i].report.w12_direct < members[i - 1].report.w12_direct + 1e-8))
                rep.monotone = false;
            if (!(std::abs(members[i].report.mH_final) <
                  std::abs(members[i - 1].report.mH_final) + 1e-8))
                rep.mass_monotone = false;
        }
    }
    rep.fit_slope = (nm * sxy - sx * sy) / (nm * sxx - sx * sx);
    return rep;
}

}  // namespace imcflab
