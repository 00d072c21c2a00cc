#include <catch2/catch.hpp>

#include <cmath>
#include <fstream>

#include "imcflab/profile.hpp"

using namespace imcflab;

TEST_CASE("built-in potentials and derivatives") {
    const WarpedProfile flat = WarpedProfile::flat();
    CHECK(flat.eval(2.0).V == 1.0);
    CHECK(flat.eval(2.0).Vp == 0.0);
    CHECK(flat.eval(2.0).Vpp == 0.0);

    const WarpedProfile schw = WarpedProfile::schwarzschild(0.2);
    const ProfileEval s = schw.eval(2.0);
    CHECK(s.V == Approx(0.8).margin(1e-15));
    CHECK(s.Vp == Approx(0.1).margin(1e-15));
    CHECK(s.Vpp == Approx(-0.1).margin(1e-15));
    CHECK(schw.r_min == Approx(0.4));

    CHECK(WarpedProfile::adss(0.2).eval(2.0).V == Approx(4.8).margin(1e-14));
    CHECK(WarpedProfile::hyperbolic().eval(1.0).V == Approx(2.0));
}

TEST_CASE("domain guards") {
    const WarpedProfile schw = WarpedProfile::schwarzschild(0.2);
    CHECK_THROWS_AS(schw.eval(0.4), RadiusOutOfDomain);
    CHECK_THROWS_AS(schw.eval(0.1), RadiusOutOfDomain);
    CHECK(schw.eval(0.4 + 1e-9).V > 0.0);
    // horizon: V -> 0+ and H of the centered sphere -> 0
    CHECK(round_sphere_data(schw, 0.4 + 1e-10).H < 1e-4);
    CHECK_THROWS_AS(WarpedProfile::schwarzschild(-1.0), ValidationError);
}

TEST_CASE("ambient curvature closed forms") {
    const AmbientCurvatures f = ambient_curvatures(WarpedProfile::flat(), 3.1);
    CHECK(f.R == 0.0);
    CHECK(f.Rc_nn == 0.0);
    CHECK(f.K12 == 0.0);

    const AmbientCurvatures h = ambient_curvatures(WarpedProfile::hyperbolic(), 1.0);
    CHECK(h.R == Approx(-6.0).margin(1e-13));
    CHECK(h.Rc_nn == Approx(-2.0).margin(1e-14));
    CHECK(h.K12 == Approx(-1.0).margin(1e-14));

    const AmbientCurvatures s = ambient_curvatures(WarpedProfile::schwarzschild(0.2), 2.0);
    CHECK(s.R == Approx(0.0).margin(1e-15));
    CHECK(s.Rc_nn == Approx(-0.05).margin(1e-15));
    CHECK(s.K12 == Approx(0.05).margin(1e-15));

    // adss has constant scalar curvature -6
    for (double r : {1.0, 1.7, 2.9})
        CHECK(ambient_curvatures(WarpedProfile::adss(0.2), r).R == Approx(-6.0).margin(1e-12));
}

TEST_CASE("gauss relation for centered spheres") {
    const std::vector<WarpedProfile> profiles = {
        WarpedProfile::flat(), WarpedProfile::schwarzschild(0.2), WarpedProfile::hyperbolic(),
        WarpedProfile::adss(0.2)};
    for (const WarpedProfile& p : profiles)
        for (double r : {0.9, 1.4, 2.0, 3.3, 5.1}) {
            if (r <= p.r_min) continue;
            const AmbientCurvatures a = ambient_curvatures(p, r);
            const RoundSphereData d = round_sphere_data(p, r);
            CHECK(a.K12 + d.lambda * d.lambda == Approx(1.0 / (r * r)).margin(1e-12));
        }
}

TEST_CASE("ambient christoffels") {
    const ChristoffelTable f = ambient_christoffels(WarpedProfile::flat(), 1.0, kPi / 2.0);
    CHECK(f.r_thth == Approx(-1.0));
    CHECK(f.th_phph == Approx(0.0).margin(1e-15));
    CHECK(f.ph_thph == Approx(0.0).margin(1e-15));
    CHECK(f.th_rth == Approx(1.0));

    const ChristoffelTable h = ambient_christoffels(WarpedProfile::hyperbolic(), 1.0, kPi / 2.0);
    CHECK(h.r_thth == Approx(-2.0));
    CHECK(h.r_rr == Approx(-0.5));  // -V'/(2V) = -2/(2*2)

    CHECK_THROWS_AS(ambient_christoffels(WarpedProfile::flat(), 1.0, 0.0), PoleSingularity);
    CHECK_THROWS_AS(ambient_christoffels(WarpedProfile::flat(), 1.0, kPi), PoleSingularity);
}

TEST_CASE("round sphere data") {
    const RoundSphereData f = round_sphere_data(WarpedProfile::flat(), 2.0);
    CHECK(f.H == Approx(1.0));
    CHECK(f.area == Approx(16.0 * kPi));

    CHECK(round_sphere_data(WarpedProfile::schwarzschild(0.2), 2.0).H ==
          Approx(std::sqrt(0.8)).epsilon(1e-14));

    const RoundSphereData h = round_sphere_data(WarpedProfile::hyperbolic(), 1.0);
    CHECK(h.H == Approx(2.0 * std::sqrt(2.0)).epsilon(1e-14));
    CHECK(h.H * h.H - 4.0 == Approx(4.0).epsilon(1e-13));
}

TEST_CASE("custom profile from table and csv") {
    std::vector<double> rs, Vs;
    for (int i = 0; i <= 400; ++i) {
        const double r = 1.0 + 3.0 * i / 400.0;
        rs.push_back(r);
        Vs.push_back(1.0 - 0.4 / r);
    }
    const WarpedProfile p = WarpedProfile::from_table(rs, Vs);
    const WarpedProfile schw = WarpedProfile::schwarzschild(0.2);
    // monotone-cubic slopes carry the interpolant's own O(h^2) bias against the
    // tabulated function's true derivative
    for (double r : {1.3123, 2.0041, 3.0917}) {
        CHECK(p.eval(r).V == Approx(schw.eval(r).V).epsilon(1e-8));
        CHECK(p.eval(r).Vp == Approx(schw.eval(r).Vp).epsilon(2e-3));
        const AmbientCurvatures a = ambient_curvatures(p, r);
        const AmbientCurvatures b = ambient_curvatures(schw, r);
        CHECK(a.Rc_nn == Approx(b.Rc_nn).margin(2e-4));
        CHECK(a.K12 == Approx(b.K12).margin(2e-4));
    }
    CHECK_THROWS_AS(p.eval(0.9), RadiusOutOfDomain);  // below table
    CHECK_THROWS_AS(p.eval(4.5), RadiusOutOfDomain);  // beyond table

    const std::string path = "custom_profile_test.csv";
    {
        std::ofstream out(path);
        out << "r,V\n";
        for (size_t i = 0; i < rs.size(); ++i) out << fmt17(rs[i]) << "," << fmt17(Vs[i]) << "\n";
    }
    const WarpedProfile q = WarpedProfile::from_csv(path);
    CHECK(q.eval(2.0).V == Approx(p.eval(2.0).V).epsilon(1e-14));

    CHECK_THROWS_AS(WarpedProfile::from_table({1.0, 1.0, 2.0}, {1.0, 1.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(WarpedProfile::from_csv("does_not_exist.csv"), ParseError);
}

TEST_CASE("scalar curvature contraction vs finite differences on a custom profile") {
    std::vector<double> rs, Vs;
    for (int i = 0; i <= 600; ++i) {
        const double r = 0.5 + 2.5 * i / 600.0;
        rs.push_back(r);
        Vs.push_back(1.0 + 0.3 * std::sin(r));
    }
    const WarpedProfile p = WarpedProfile::from_table(rs, Vs);
    for (double r : {0.8117, 1.5031, 2.4089}) {  // interior of the cells
        const double h = 1e-4;
        const double Vp_fd = (p.eval(r + h).V - p.eval(r - h).V) / (2.0 * h);
        const AmbientCurvatures a = ambient_curvatures(p, r);
        const double R_fd = 2.0 * (1.0 - p.eval(r).V) / (r * r) - 2.0 * Vp_fd / r;
        CHECK(a.R == Approx(R_fd).epsilon(1e-6));
    }
}
