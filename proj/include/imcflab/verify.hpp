#pragma once

#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "imcflab/chain.hpp"
#include "imcflab/common.hpp"
#include "imcflab/flow.hpp"
#include "imcflab/mass.hpp"
#include "imcflab/profile.hpp"
#include "imcflab/surface.hpp"

namespace imcflab {

/// Built-in identity/invariant suite over closed-form foliations. Deterministic
/// and fast; returns false on the first batch with a failing check but runs all
/// batches.  Output lines are stable across runs.
inline bool verify_suite(std::ostream& out) {
    bool all_ok = true;
    auto check = [&](const std::string& name, double value, double tol) {
        const bool ok = std::abs(value) <= tol;
        out << (ok ? "ok   " : "FAIL ") << name << "  |value| = " << fmt17(std::abs(value))
            << "  tol = " << fmt17(tol) << "\n";
        if (!ok) all_ok = false;
    };

    const WarpedProfile flat = WarpedProfile::flat();
    const WarpedProfile schw = WarpedProfile::schwarzschild(0.2);
    const WarpedProfile hyp = WarpedProfile::hyperbolic();
    const WarpedProfile adss = WarpedProfile::adss(0.2);

    // ambient closed forms
    {
        const ProfileEval e = schw.eval(2.0);
        check("profile schwarzschild V(2)-0.8", e.V - 0.8, 1e-15);
        check("profile schwarzschild V'(2)-0.1", e.Vp - 0.1, 1e-15);
        check("profile schwarzschild V''(2)+0.1", e.Vpp + 0.1, 1e-15);
        check("profile adss V(2)-4.8", adss.eval(2.0).V - 4.8, 1e-14);
        const AmbientCurvatures h1 = ambient_curvatures(hyp, 1.0);
        check("curvature hyperbolic R+6", h1.R + 6.0, 1e-13);
        check("curvature hyperbolic Rc_nn+2", h1.Rc_nn + 2.0, 1e-14);
        check("curvature hyperbolic K12+1", h1.K12 + 1.0, 1e-14);
        const AmbientCurvatures s2 = ambient_curvatures(schw, 2.0);
        check("curvature schwarzschild R", s2.R, 1e-15);
        check("curvature schwarzschild Rc_nn+0.05", s2.Rc_nn + 0.05, 1e-15);
        check("curvature schwarzschild K12-0.05", s2.K12 - 0.05, 1e-15);
        double gauss_worst = 0.0;
        for (const WarpedProfile* p : {&flat, &schw, &hyp, &adss})
            for (double r : {0.9, 1.3, 2.0, 3.7}) {
                if (r <= p->r_min) continue;
                const AmbientCurvatures a = ambient_curvatures(*p, r);
                const RoundSphereData d = round_sphere_data(*p, r);
                gauss_worst = std::max(gauss_worst,
                                       std::abs(a.K12 + d.lambda * d.lambda - 1.0 / (r * r)));
            }
        check("gauss relation K12+lambda^2-1/r^2 (sweep)", gauss_worst, 1e-12);
    }

    // oracle masses on round leaves
    {
        const AxisymGrid g(64);
        auto round_state = [&](const WarpedProfile& p, double r) {
            return surface_geometry(p, g, std::vector<double>(g.n, r));
        };
        check("mass flat euclidean", hawking_mass(round_state(flat, 2.0), MassVariant::euclidean),
              1e-12);
        check("mass hyperbolic variant",
              hawking_mass(round_state(hyp, 1.0), MassVariant::hyperbolic), 1e-12);
        check("mass schwarzschild - m",
              hawking_mass(round_state(schw, 2.0), MassVariant::euclidean) - 0.2, 1e-10);
        check("mass adss - m", hawking_mass(round_state(adss, 2.0), MassVariant::hyperbolic) - 0.2,
              1e-10);
    }

    // exact foliations: area law, identity residuals, limits
    const FlowRecord rec_flat = exact_round_flow(flat, 1.0, 2.0, 256, 64);
    const FlowRecord rec_schw = exact_round_flow(schw, 2.0, 2.0, 256, 64);
    const FlowRecord rec_hyp = exact_round_flow(hyp, 1.0, 2.0, 256, 64);
    const FlowRecord rec_adss = exact_round_flow(adss, 2.0, 2.0, 256, 64);
    {
        for (const auto* pr : {&rec_flat, &rec_schw, &rec_hyp, &rec_adss})
            check("area law exact " + to_string(pr->profile.kind), pr->area_max_rel_err, 1e-10);

        const NamedTable gf = geroch_diagnostics(rec_flat, MassVariant::euclidean);
        check("geroch flat residual", gf.max_abs("residual"), 1e-8);
        check("geroch flat dt_intH2", gf.max_abs("lhs_dt_intH2"), 1e-8);
        const NamedTable gs = geroch_diagnostics(rec_schw, MassVariant::euclidean);
        check("geroch schwarzschild residual", gs.max_abs("residual"), 1e-8);
        double lim_err = 0.0;
        {
            const auto lhs = gs.col("lhs_dt_intH2");
            const auto lim = gs.col("limit_model");
            for (size_t i = 0; i < lhs.size(); ++i)
                lim_err = std::max(lim_err, std::abs(lhs[i] / lim[i] - 1.0));
        }
        check("geroch schwarzschild limit match (rel)", lim_err, 1e-6);
    }

    // corollary integrals, exact values on model flows
    {
        const NamedTable cf = corollary_integral_table(rec_flat, MassVariant::euclidean);
        double worst = 0.0;
        for (const auto& row : cf.rows) {
            worst = std::max(worst, std::abs(row[cf.column("int_H2")] - 16.0 * kPi));
            worst = std::max(worst, std::abs(row[cf.column("int_A2")] - 8.0 * kPi));
            worst = std::max(worst, std::abs(row[cf.column("int_l1l2")] - 4.0 * kPi));
            for (const char* c : {"int_gradH2_H2", "int_shear2", "int_R", "int_Rc", "int_K12"})
                worst = std::max(worst, std::abs(row[cf.column(c)]));
            worst = std::max(worst, std::abs(row[cf.column("euler")] - 2.0));
        }
        check("corollary flat exactness", worst, 1e-9);
        const NamedTable ch = corollary_integral_table(rec_hyp, MassVariant::hyperbolic);
        double worst_h = 0.0;
        for (const auto& row : ch.rows) {
            worst_h = std::max(worst_h, std::abs(row[ch.column("int_H2")] - 16.0 * kPi));
            worst_h = std::max(worst_h, std::abs(row[ch.column("int_A2")] - 8.0 * kPi));
            worst_h = std::max(worst_h, std::abs(row[ch.column("int_l1l2")] - 4.0 * kPi));
            for (const char* c : {"int_R", "int_Rc", "int_K12"})
                worst_h = std::max(worst_h, std::abs(row[ch.column(c)]));
        }
        check("corollary hyperbolic exactness", worst_h, 1e-9);
        const NamedTable cs = corollary_integral_table(rec_schw, MassVariant::euclidean);
        double worst_s = 0.0;
        for (const auto& row : cs.rows) {
            worst_s = std::max(worst_s, std::abs(row[cs.column("int_Rc")] -
                                                 row[cs.column("rc_limit_model")]));
            worst_s = std::max(worst_s, std::abs(row[cs.column("int_K12")] -
                                                 row[cs.column("k12_limit_model")]));
        }
        check("corollary schwarzschild Rc/K12 limits", worst_s, 1e-9);
    }

    // average-evolution identities and their model limits
    {
        for (const auto* pr : {&rec_flat, &rec_schw, &rec_hyp, &rec_adss}) {
            const MassVariant v = (pr->profile.kind == ProfileKind::hyperbolic ||
                                   pr->profile.kind == ProfileKind::adss)
                                      ? MassVariant::hyperbolic
                                      : MassVariant::euclidean;
            const AverageEvolutionTables t = average_evolution_residuals(*pr, v);
            const std::string tag = to_string(pr->profile.kind);
            check("avg-evol prop residual " + tag, t.avg_prop.max_abs("residual"), 1e-6);
            check("avg-evol drive residual " + tag, t.avg_evol.max_abs("residual"), 1e-6);
            check("avg-evol H2 residual " + tag, t.avg_evol2.max_abs("residual"), 1e-6);
            double lim_err = 0.0;
            const auto d2 = t.limits.col("dH2bar_dt");
            const auto l2 = t.limits.col("limit_dH2bar");
            const auto d1 = t.limits.col("dHbar_dt");
            const auto l1 = t.limits.col("limit_dHbar");
            for (size_t i = 0; i < d2.size(); ++i) {
                lim_err = std::max(lim_err, std::abs(d2[i] - l2[i]));
                lim_err = std::max(lim_err, std::abs(d1[i] - l1[i]));
            }
            check("avg-evol limits " + tag, lim_err, 1e-6);
        }
    }

    // weak Ricci identity on exact flows
    {
        const int a = 13, b = 243;
        for (const auto* pr : {&rec_flat, &rec_schw}) {
            const auto phi = time_bump_lattice(*pr, a, b);
            const WeakRicciResult r = weak_ricci_residual(*pr, phi, a, b);
            check("weak ricci " + to_string(pr->profile.kind), r.residual, 1e-6);
        }
        std::vector<std::vector<double>> zero(rec_flat.n_nodes(),
                                              std::vector<double>(rec_flat.grid.n, 0.0));
        const WeakRicciResult rz = weak_ricci_residual(rec_flat, zero, a, b);
        check("weak ricci zero phi", rz.residual, 0.0);
    }

    // integral inequality margins on exact flows (nonnegative)
    {
        for (const auto* pr : {&rec_flat, &rec_schw, &rec_hyp, &rec_adss}) {
            const RicciMargins m = ricci_inequality_margin(*pr);
            const std::string tag = to_string(pr->profile.kind);
            const double lap = std::min(m.margin_laplacian, 0.0);
            const double hes = std::min(m.margin_hessian, 0.0);
            check("ricci margin laplacian " + tag, lap, 1e-6);
            check("ricci margin hessian " + tag, hes, 1e-6);
        }
        const RicciMargins mf = ricci_inequality_margin(rec_flat);
        check("ricci margin flat equality", mf.margin_laplacian, 1e-6);
    }

    // chain collapse and sandwich on exact flows
    {
        struct CaseRow {
            const FlowRecord* rec;
            CaseTag c;
            double m;
        };
        const std::vector<CaseRow> rows = {{&rec_flat, CaseTag::pmt_flat, 0.0},
                                           {&rec_schw, CaseTag::rpi_schwarzschild, 0.2},
                                           {&rec_hyp, CaseTag::pmt_hyperbolic, 0.0},
                                           {&rec_adss, CaseTag::rpi_adss, 0.2}};
        for (const CaseRow& r : rows) {
            const ChainReport rep = chain_report(*r.rec, r.c, r.m);
            double worst = 0.0;
            for (const LinkDistance& l : rep.links) worst = std::max({worst, l.l2, l.w12});
            check("chain collapse " + rep.case_tag, worst, 1e-9);
            check("chain triangle " + rep.case_tag,
                  std::max(0.0, rep.l2_direct - rep.l2_triangle_total), 1e-9);
            const SandwichMargins sm = metric_sandwich_margin(*r.rec);
            check("sandwich lower " + rep.case_tag, std::min(sm.lower, 0.0), 1e-10);
            check("sandwich upper " + rep.case_tag, std::min(sm.upper, 0.0), 1e-10);
        }
    }

    // background delta is parallel for the covariant mode: the lattice defect is
    // pure finite-difference truncation, so it must sit at O(dtheta^2) and
    // shrink by ~4 per refinement
    {
        auto defect = [&](int n_theta, int n_t) {
            const AxisymGrid g(n_theta);
            const AnnulusMetric bg = background_delta(2.0, 2.0, g, n_t);
            AnnulusMetric zero = bg;
            for (auto& row : zero.N2) row.assign(g.n, 0.0);
            for (auto& row : zero.g_xx) row.assign(g.n, 0.0);
            for (auto& row : zero.g_pp) row.assign(g.n, 0.0);
            const DistancePair d = sobolev_distance_pair(bg, zero, DerivativeMode::delta_covariant);
            return std::sqrt((d.w12_sq - d.l2_sq) / d.l2_sq);
        };
        const double d32 = defect(32, 128), d64 = defect(64, 256);
        check("delta-covariant nabla(delta) defect at N=64 (vs 5*dtheta^2)",
              std::max(0.0, d64 - 5.0 * sq(kPi / 64.0)), 0.0);
        check("delta-covariant nabla(delta) defect order", std::max(0.0, d64 - d32 / 3.4), 0.0);
    }

    // discrete surface identities on a perturbed leaf
    {
        const AxisymGrid g(64);
        std::vector<double> rho(g.n);
        for (int j = 0; j < g.n; ++j)
            rho[j] = 1.0 + 0.1 * (0.5 * (3.0 * sq(std::cos(g.theta[j])) - 1.0));
        const SurfaceState s = surface_geometry(flat, g, rho);
        std::vector<double> f(g.n);
        for (int j = 0; j < g.n; ++j) f[j] = std::cos(g.theta[j]) + 0.3 * std::cos(2.0 * g.theta[j]);
        const SurfaceOperators ops = surface_operators(s, f);
        check("divergence theorem", surface_integral(s, ops.laplacian) / s.area, 1e-10);
        double gauss_eq = 0.0;
        for (int j = 0; j < g.n; ++j)
            gauss_eq = std::max(gauss_eq,
                                std::abs(s.K[j] - (s.amb_K12[j] + s.lam1[j] * s.lam2[j])));
        check("gauss equation K = K12 + l1 l2", gauss_eq, 1e-10);
        check("gauss-bonnet (perturbed leaf)", surface_integral(s, s.K) / (4.0 * kPi) - 1.0, 1e-3);
    }

    out << (all_ok ? "verify: PASS\n" : "verify: FAIL\n");
    return all_ok;
}

}  // namespace imcflab
