#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "imcflab/common.hpp"

namespace imcflab {

enum class ProfileKind { flat, schwarzschild, hyperbolic, adss, custom };

inline std::string to_string(ProfileKind k) {
    switch (k) {
        case ProfileKind::flat: return "flat";
        case ProfileKind::schwarzschild: return "schwarzschild";
        case ProfileKind::hyperbolic: return "hyperbolic";
        case ProfileKind::adss: return "adss";
        case ProfileKind::custom: return "custom";
    }
    return "?";
}

struct ProfileEval {
    double V = 0.0;
    double Vp = 0.0;   // dV/dr
    double Vpp = 0.0;  // d2V/dr2
};

/// Rotationally symmetric ambient 3-metric V(r)^{-1} dr^2 + r^2 sigma.
/// V encodes flat (1), Schwarzschild (1-2m/r), hyperbolic (1+r^2),
/// AdS-Schwarzschild (1+r^2-2m/r); custom profiles are tabulated (r,V)
/// pairs with monotone-cubic interpolation.
class WarpedProfile {
  public:
    ProfileKind kind = ProfileKind::flat;
    double m = 0.0;
    double r_min = 0.0;

    WarpedProfile() = default;

    static WarpedProfile flat() { return WarpedProfile(ProfileKind::flat, 0.0); }
    static WarpedProfile hyperbolic() { return WarpedProfile(ProfileKind::hyperbolic, 0.0); }
    static WarpedProfile schwarzschild(double mass) {
        if (mass <= 0.0) throw ValidationError("schwarzschild: m must be positive");
        return WarpedProfile(ProfileKind::schwarzschild, mass);
    }
    static WarpedProfile adss(double mass) {
        if (mass <= 0.0) throw ValidationError("adss: m must be positive");
        return WarpedProfile(ProfileKind::adss, mass);
    }

    static WarpedProfile from_table(std::vector<double> rs, std::vector<double> Vs) {
        WarpedProfile p(ProfileKind::custom, 0.0);
        p.build_custom(std::move(rs), std::move(Vs));
        return p;
    }

    /// Two-column UTF-8 CSV "r,V" with strictly increasing r; a leading header
    /// line is accepted.
    static WarpedProfile from_csv(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ParseError("profile csv: cannot open " + path);
        std::vector<double> rs, Vs;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            std::replace(line.begin(), line.end(), ',', ' ');
            std::istringstream ls(line);
            double r, V;
            if (!(ls >> r >> V)) {
                if (lineno == 1) continue;  // header
                throw ParseError("profile csv: bad row at line " + std::to_string(lineno));
            }
            rs.push_back(r);
            Vs.push_back(V);
        }
        return from_table(std::move(rs), std::move(Vs));
    }

    ProfileEval eval(double r) const {
        if (!(r > r_min))
            throw RadiusOutOfDomain("profile eval: r = " + fmt17(r) + " <= r_min = " + fmt17(r_min));
        ProfileEval e;
        switch (kind) {
            case ProfileKind::flat:
                e.V = 1.0;
                break;
            case ProfileKind::schwarzschild:
                e.V = 1.0 - 2.0 * m / r;
                e.Vp = 2.0 * m / (r * r);
                e.Vpp = -4.0 * m / (r * r * r);
                break;
            case ProfileKind::hyperbolic:
                e.V = 1.0 + r * r;
                e.Vp = 2.0 * r;
                e.Vpp = 2.0;
                break;
            case ProfileKind::adss:
                e.V = 1.0 + r * r - 2.0 * m / r;
                e.Vp = 2.0 * r + 2.0 * m / (r * r);
                e.Vpp = 2.0 - 4.0 * m / (r * r * r);
                break;
            case ProfileKind::custom:
                e = eval_custom(r);
                break;
        }
        if (!(e.V > 0.0))
            throw RadiusOutOfDomain("profile eval: V(r) <= 0 at r = " + fmt17(r));
        return e;
    }

  private:
    WarpedProfile(ProfileKind k, double mass) : kind(k), m(mass) {
        if (k == ProfileKind::schwarzschild) r_min = 2.0 * m;
        if (k == ProfileKind::adss) r_min = adss_horizon(m);
    }

    // horizon of 1 + r^2 - 2m/r: the positive root of r^3 + r - 2m
    static double adss_horizon(double m) {
        double lo = 0.0, hi = std::max(1.0, 2.0 * m);
        while (hi * hi * hi + hi < 2.0 * m) hi *= 2.0;
        for (int i = 0; i < 200; ++i) {
            double mid = 0.5 * (lo + hi);
            (mid * mid * mid + mid < 2.0 * m ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }

    // custom: Fritsch-Carlson monotone cubic data
    std::vector<double> rs_, Vs_, slopes_;

    void build_custom(std::vector<double> rs, std::vector<double> Vs) {
        if (rs.size() != Vs.size() || rs.size() < 3)
            throw ValidationError("custom profile: need >= 3 (r,V) rows");
        for (size_t i = 1; i < rs.size(); ++i)
            if (!(rs[i] > rs[i - 1]))
                throw ValidationError("custom profile: r must be strictly increasing");
        rs_ = std::move(rs);
        Vs_ = std::move(Vs);
        const size_t n = rs_.size();
        std::vector<double> h(n - 1), del(n - 1);
        for (size_t i = 0; i + 1 < n; ++i) {
            h[i] = rs_[i + 1] - rs_[i];
            del[i] = (Vs_[i + 1] - Vs_[i]) / h[i];
        }
        slopes_.assign(n, 0.0);
        for (size_t i = 1; i + 1 < n; ++i) {
            if (del[i - 1] * del[i] <= 0.0) {
                slopes_[i] = 0.0;
            } else {
                double w1 = 2.0 * h[i] + h[i - 1];
                double w2 = h[i] + 2.0 * h[i - 1];
                slopes_[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
            }
        }
        slopes_[0] = end_slope(h[0], h[1], del[0], del[1]);
        slopes_[n - 1] = end_slope(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
        r_min = rs_.front();
        verify_custom_derivatives();
    }

    static double end_slope(double h0, double h1, double d0, double d1) {
        double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (s * d0 <= 0.0) return 0.0;
        if (d0 * d1 < 0.0 && std::abs(s) > 3.0 * std::abs(d0)) return 3.0 * d0;
        return s;
    }

    ProfileEval eval_custom(double r) const {
        if (r > rs_.back())
            throw RadiusOutOfDomain("custom profile: r = " + fmt17(r) + " beyond table end " +
                                    fmt17(rs_.back()));
        size_t i = std::upper_bound(rs_.begin(), rs_.end(), r) - rs_.begin();
        if (i == 0) i = 1;
        if (i >= rs_.size()) i = rs_.size() - 1;
        --i;
        const double h = rs_[i + 1] - rs_[i];
        const double s = (r - rs_[i]) / h;
        const double y0 = Vs_[i], y1 = Vs_[i + 1], m0 = slopes_[i] * h, m1 = slopes_[i + 1] * h;
        const double h00 = (1.0 + 2.0 * s) * sq(1.0 - s);
        const double h10 = s * sq(1.0 - s);
        const double h01 = s * s * (3.0 - 2.0 * s);
        const double h11 = s * s * (s - 1.0);
        ProfileEval e;
        e.V = h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1;
        const double dh00 = 6.0 * s * (s - 1.0);
        const double dh10 = (1.0 - s) * (1.0 - 3.0 * s);
        const double dh01 = -dh00;
        const double dh11 = s * (3.0 * s - 2.0);
        e.Vp = (dh00 * y0 + dh10 * m0 + dh01 * y1 + dh11 * m1) / h;
        const double d2h00 = 12.0 * s - 6.0;
        const double d2h10 = 6.0 * s - 4.0;
        const double d2h01 = -d2h00;
        const double d2h11 = 6.0 * s - 2.0;
        e.Vpp = (d2h00 * y0 + d2h10 * m0 + d2h01 * y1 + d2h11 * m1) / (h * h);
        return e;
    }

    // interval-midpoint check: analytic V', V'' vs centered differences of V.
    // The steps stay inside the cell (piecewise cubic), so the extrapolated
    // first difference and the plain second difference are exact up to rounding.
    void verify_custom_derivatives() const {
        for (size_t i = 0; i + 1 < rs_.size(); ++i) {
            const double rm = 0.5 * (rs_[i] + rs_[i + 1]);
            const double h = 0.25 * (rs_[i + 1] - rs_[i]);
            if (rm - h <= r_min) continue;
            const ProfileEval c = eval_custom(rm);
            const double fp = eval_custom(rm + h).V, fm = eval_custom(rm - h).V;
            const double fp2 = eval_custom(rm + 0.5 * h).V, fm2 = eval_custom(rm - 0.5 * h).V;
            const double fd1 = (4.0 * (fp2 - fm2) / h - (fp - fm) / (2.0 * h)) / 3.0;
            const double fd2 = (fp - 2.0 * c.V + fm) / (h * h);
            const double s1 = std::max({1.0, std::abs(c.Vp), std::abs(fd1)});
            const double s2 = std::max({1.0, std::abs(c.Vpp), std::abs(fd2)});
            if (std::abs(fd1 - c.Vp) > 1e-6 * s1 || std::abs(fd2 - c.Vpp) > 1e-6 * s2)
                throw ValidationError("custom profile: derivative consistency check failed near r = " +
                                      fmt17(rm));
        }
    }
};

struct AmbientCurvatures {
    double R = 0.0;      // scalar curvature
    double Rc_nn = 0.0;  // radial Ricci Rc(nu,nu)
    double K12 = 0.0;    // tangential sectional curvature
};

inline AmbientCurvatures ambient_curvatures(const WarpedProfile& p, double r) {
    const ProfileEval e = p.eval(r);
    AmbientCurvatures c;
    c.R = 2.0 * (1.0 - e.V) / (r * r) - 2.0 * e.Vp / r;
    c.Rc_nn = -e.Vp / r;
    c.K12 = (1.0 - e.V) / (r * r);
    return c;
}

/// Christoffel symbols of V^{-1} dr^2 + r^2 sigma in (r, theta, phi).
struct ChristoffelTable {
    double r_rr, r_thth, r_phph;  // Gamma^r_*
    double th_rth, th_phph;       // Gamma^theta_*
    double ph_rph, ph_thph;       // Gamma^phi_*
};

inline ChristoffelTable ambient_christoffels(const WarpedProfile& p, double r, double theta) {
    if (!(theta > 0.0) || !(theta < kPi))
        throw PoleSingularity("ambient_christoffels: theta at a pole");
    const ProfileEval e = p.eval(r);
    const double st = std::sin(theta), ct = std::cos(theta);
    ChristoffelTable t;
    t.r_rr = -e.Vp / (2.0 * e.V);
    t.r_thth = -r * e.V;
    t.r_phph = -r * e.V * st * st;
    t.th_rth = 1.0 / r;
    t.th_phph = -st * ct;
    t.ph_rph = 1.0 / r;
    t.ph_thph = ct / st;
    return t;
}

/// Umbilic data of the centered sphere of radius r; sign convention
/// A_ab = -<nabla_a X_b, nu> with outward nu, so H > 0.
struct RoundSphereData {
    double H = 0.0;
    double lambda = 0.0;  // A = lambda * g
    double area = 0.0;
};

inline RoundSphereData round_sphere_data(const WarpedProfile& p, double r) {
    const ProfileEval e = p.eval(r);
    RoundSphereData d;
    d.lambda = std::sqrt(e.V) / r;
    d.H = 2.0 * d.lambda;
    d.area = 4.0 * kPi * r * r;
    return d;
}

}  // namespace imcflab
