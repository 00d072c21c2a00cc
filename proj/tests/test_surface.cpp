#include <catch2/catch.hpp>

#include <cmath>
#include <random>

#include "imcflab/scenario.hpp"
#include "imcflab/surface.hpp"
#include "imcflab/tensor_calc.hpp"

using namespace imcflab;

namespace {

std::vector<double> p2_rho(const AxisymGrid& g, double r0, double eps) {
    std::vector<double> rho(g.n);
    for (int j = 0; j < g.n; ++j)
        rho[j] = r0 * (1.0 + eps * legendre_p(2, std::cos(g.theta[j])));
    return rho;
}

std::vector<double> offcenter_rho(const AxisymGrid& g, double c, double R) {
    std::vector<double> rho(g.n);
    for (int j = 0; j < g.n; ++j) {
        const double ct = std::cos(g.theta[j]), st = std::sin(g.theta[j]);
        rho[j] = c * ct + std::sqrt(R * R - c * c * st * st);
    }
    return rho;
}

}  // namespace

TEST_CASE("grid weights and nodes") {
    for (int N : {16, 64, 200}) {
        const AxisymGrid g(N);
        double sum = 0.0;
        for (double w : g.w) sum += w;
        CHECK(sum == Approx(4.0 * kPi).epsilon(1e-14));
        CHECK(g.theta.front() > 0.0);
        CHECK(g.theta.back() < kPi);
    }
    CHECK_THROWS_AS(AxisymGrid(1), ValidationError);
}

TEST_CASE("round sphere states are exact") {
    const AxisymGrid g(64);
    const WarpedProfile flat = WarpedProfile::flat();
    const SurfaceState s = surface_geometry(flat, g, std::vector<double>(g.n, 2.0));
    CHECK(s.area == Approx(16.0 * kPi).epsilon(1e-14));
    for (int j = 0; j < g.n; ++j) {
        CHECK(s.H[j] == Approx(1.0).margin(1e-12));
        CHECK(std::abs(s.lam1[j] - s.lam2[j]) < 1e-10);
        CHECK(s.K[j] == Approx(0.25).margin(1e-12));
        CHECK(s.H[j] == Approx(s.lam1[j] + s.lam2[j]).margin(1e-12));
    }

    const WarpedProfile schw = WarpedProfile::schwarzschild(0.2);
    const SurfaceState ss = surface_geometry(schw, g, std::vector<double>(g.n, 2.0));
    for (int j = 0; j < g.n; ++j) {
        CHECK(ss.lam1[j] == Approx(std::sqrt(0.8) / 2.0).margin(1e-12));
        CHECK(ss.A_thth[j] == Approx(ss.lam1[j] * ss.g_thth[j]).margin(1e-12));
    }
}

TEST_CASE("off-center sphere has constant mean curvature at second order") {
    std::vector<double> errs;
    const WarpedProfile flat = WarpedProfile::flat();
    for (int N : {32, 64, 128}) {
        const AxisymGrid g(N);
        const SurfaceState s = surface_geometry(flat, g, offcenter_rho(g, 0.3, 1.0));
        double sup = 0.0;
        for (int j = 0; j < g.n; ++j) sup = std::max(sup, std::abs(s.H[j] - 2.0));
        errs.push_back(sup);
        CHECK(s.area == Approx(4.0 * kPi).epsilon(5e-4));
    }
    const double order1 = std::log2(errs[0] / errs[1]);
    const double order2 = std::log2(errs[1] / errs[2]);
    CHECK(order1 > 1.8);
    CHECK(order1 < 2.2);
    CHECK(order2 > 1.8);
    CHECK(order2 < 2.2);
}

TEST_CASE("surface integrals") {
    const AxisymGrid g(64);
    const WarpedProfile flat = WarpedProfile::flat();
    const SurfaceState s = surface_geometry(flat, g, std::vector<double>(g.n, 2.0));
    CHECK(surface_integral(s, std::vector<double>(g.n, 1.0)) == Approx(16.0 * kPi).epsilon(1e-14));
    std::vector<double> h2(g.n);
    for (int j = 0; j < g.n; ++j) h2[j] = s.H[j] * s.H[j];
    CHECK(surface_integral(s, h2) == Approx(16.0 * kPi).epsilon(1e-13));

    const SurfaceState ss =
        surface_geometry(WarpedProfile::schwarzschild(0.2), g, std::vector<double>(g.n, 2.0));
    std::vector<double> h2s(g.n);
    for (int j = 0; j < g.n; ++j) h2s[j] = ss.H[j] * ss.H[j];
    CHECK(surface_integral(ss, h2s) == Approx(0.8 * 16.0 * kPi).epsilon(1e-13));

    CHECK_THROWS_AS(surface_integral(s, std::vector<double>(g.n + 1, 1.0)), GridMismatch);
}

TEST_CASE("operators: eigenfunction, gradient, divergence theorem") {
    const WarpedProfile flat = WarpedProfile::flat();
    {
        const AxisymGrid g(64);
        const SurfaceState s = surface_geometry(flat, g, std::vector<double>(g.n, 1.0));
        std::vector<double> f(g.n);
        for (int j = 0; j < g.n; ++j) f[j] = std::cos(g.theta[j]);
        const SurfaceOperators ops = surface_operators(s, f);
        double sup = 0.0;
        for (int j = 0; j < g.n; ++j) sup = std::max(sup, std::abs(ops.laplacian[j] + 2.0 * f[j]));
        CHECK(sup < 10.0 * sq(g.dtheta));
    }
    {
        const AxisymGrid g(64);
        const SurfaceState s = surface_geometry(flat, g, std::vector<double>(g.n, 2.0));
        std::vector<double> f(g.n);
        for (int j = 0; j < g.n; ++j) f[j] = std::cos(g.theta[j]);
        const SurfaceOperators ops = surface_operators(s, f);
        double sup = 0.0;
        for (int j = 0; j < g.n; ++j)
            sup = std::max(sup, std::abs(ops.grad2[j] - sq(std::sin(g.theta[j])) / 4.0));
        CHECK(sup < 10.0 * sq(g.dtheta));
    }
    {
        // constants annihilate both fields
        const AxisymGrid g(48);
        const SurfaceState s = surface_geometry(flat, g, p2_rho(g, 1.0, 0.1));
        const SurfaceOperators ops = surface_operators(s, std::vector<double>(g.n, 3.7));
        for (int j = 0; j < g.n; ++j) {
            CHECK(ops.grad2[j] == 0.0);
            CHECK(ops.laplacian[j] == 0.0);
        }
        // discrete divergence theorem, machine exact by construction
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::vector<double> f(g.n, 0.0);
        double fmax = 0.0;
        for (int l = 0; l <= 6; ++l) {
            const double c = u(rng);
            for (int j = 0; j < g.n; ++j) f[j] += c * legendre_p(l, std::cos(g.theta[j]));
        }
        for (double x : f) fmax = std::max(fmax, std::abs(x));
        const SurfaceOperators ops2 = surface_operators(s, f);
        CHECK(std::abs(surface_integral(s, ops2.laplacian)) <= 1e-8 * fmax * s.area);
    }
}

TEST_CASE("gauss equation and gauss-bonnet on tilted graphs") {
    const WarpedProfile schw = WarpedProfile::schwarzschild(0.1);
    const AxisymGrid g(64);
    std::vector<double> rho = p2_rho(g, 1.5, 0.12);
    const SurfaceState s = surface_geometry(schw, g, rho);
    for (int j = 0; j < g.n; ++j)
        CHECK(s.K[j] == Approx(s.amb_K12[j] + s.lam1[j] * s.lam2[j]).margin(1e-10));
    CHECK(surface_integral(s, s.K) == Approx(4.0 * kPi).epsilon(1e-3));

    // shear identity (lam1-lam2)^2 = 2|A|^2 - H^2 >= 0
    for (int j = 0; j < g.n; ++j) {
        const double a2 = sq(s.lam1[j]) + sq(s.lam2[j]);
        CHECK(sq(s.lam1[j] - s.lam2[j]) == Approx(2.0 * a2 - sq(s.H[j])).margin(1e-12));
    }
}

TEST_CASE("diameter") {
    const WarpedProfile flat = WarpedProfile::flat();
    const AxisymGrid g(64);
    const SurfaceState s1 = surface_geometry(flat, g, std::vector<double>(g.n, 1.0));
    CHECK(diameter(s1) == Approx(kPi).epsilon(0.02));
    const SurfaceState s2 = surface_geometry(flat, g, std::vector<double>(g.n, 2.0));
    CHECK(diameter(s2) == Approx(2.0 * kPi).epsilon(0.02));
    const SurfaceState sp = surface_geometry(flat, g, p2_rho(g, 1.0, 0.1));
    const double d = diameter(sp);
    CHECK(d > 0.9 * kPi);
    CHECK(d < 1.2 * kPi);
}

TEST_CASE("tilt cap and horizon guards") {
    const AxisymGrid g(32);
    const WarpedProfile flat = WarpedProfile::flat();
    CHECK_THROWS_AS(surface_geometry(flat, g, p2_rho(g, 1.0, 0.1), /*tilt_cap=*/1.0001),
                    NonGraphical);
    const WarpedProfile schw = WarpedProfile::schwarzschild(0.2);
    std::vector<double> rho(g.n, 0.41);
    rho[5] = 0.39;  // dips under the horizon
    CHECK_THROWS_AS(surface_geometry(schw, g, rho), RadiusOutOfDomain);
    CHECK_THROWS_AS(surface_geometry(flat, g, std::vector<double>(g.n + 2, 1.0)), GridMismatch);
}

TEST_CASE("interpolation ratio") {
    const AxisymGrid g(64);
    const WarpedProfile flat = WarpedProfile::flat();
    const SurfaceState s = surface_geometry(flat, g, std::vector<double>(g.n, 1.0));
    const std::vector<double> zeros(g.n, 0.0);

    // parallel tensor: the metric itself
    CHECK(interpolation_ratio(s, make_sym2(s.g_thth, zeros, s.g_phph)) == 0.0);

    // T = cos(theta) g: finite ratio, stable under refinement within 5%
    std::vector<double> ratios;
    for (int N : {32, 64, 128}) {
        const AxisymGrid gr(N);
        const SurfaceState sr = surface_geometry(flat, gr, std::vector<double>(gr.n, 1.0));
        std::vector<double> Ttt(gr.n), Tpp(gr.n), Ttp(gr.n, 0.0);
        for (int j = 0; j < gr.n; ++j) {
            const double f = std::cos(gr.theta[j]);
            Ttt[j] = f * sr.g_thth[j];
            Tpp[j] = f * sr.g_phph[j];
        }
        ratios.push_back(interpolation_ratio(sr, make_sym2(Ttt, Ttp, Tpp)));
        CHECK(ratios.back() > 0.0);
    }
    CHECK(std::abs(ratios[1] - ratios[0]) < 0.05 * ratios[1]);
    CHECK(std::abs(ratios[2] - ratios[1]) < 0.05 * ratios[2]);
}
