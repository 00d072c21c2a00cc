#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "imcflab/chain.hpp"
#include "imcflab/common.hpp"
#include "imcflab/flow.hpp"
#include "imcflab/mass.hpp"

namespace imcflab {

using ordered_json = nlohmann::ordered_json;

inline double legendre_p(int l, double x) {
    if (l == 0) return 1.0;
    if (l == 1) return x;
    double pm2 = 1.0, pm1 = x, p = x;
    for (int k = 2; k <= l; ++k) {
        p = ((2.0 * k - 1.0) * x * pm1 - (k - 1.0) * pm2) / k;
        pm2 = pm1;
        pm1 = p;
    }
    return p;
}

struct InitialSurface {
    bool round = true;
    int legendre_mode = 2;
    double amplitude = 0.0;
};

struct Scenario {
    ProfileKind profile_kind = ProfileKind::flat;
    double profile_m = 0.0;
    std::string profile_csv;  // custom kind only
    double r0 = 1.0;
    double T = 2.0;
    int N_theta = 64;
    int N_t = 256;
    InitialSurface initial;
    CaseTag case_tag = CaseTag::pmt_flat;
    MassVariant mass_variant = MassVariant::euclidean;
    ClassBounds bounds;
    double tilt_cap = 1e3;
    DerivativeMode derivative_mode = DerivativeMode::delta_covariant;
    G3BaseSlice g3_base = G3BaseSlice::final_slice;
    bool case_profile_warn = false;

    WarpedProfile profile() const {
        switch (profile_kind) {
            case ProfileKind::flat: return WarpedProfile::flat();
            case ProfileKind::schwarzschild: return WarpedProfile::schwarzschild(profile_m);
            case ProfileKind::hyperbolic: return WarpedProfile::hyperbolic();
            case ProfileKind::adss: return WarpedProfile::adss(profile_m);
            case ProfileKind::custom: return WarpedProfile::from_csv(profile_csv);
        }
        throw ValidationError("scenario: bad profile kind");
    }

    double case_mass() const { return case_is_rpi(case_tag) ? profile_m : 0.0; }
};

namespace detail {

inline ProfileKind parse_kind(const std::string& s) {
    if (s == "flat") return ProfileKind::flat;
    if (s == "schwarzschild") return ProfileKind::schwarzschild;
    if (s == "hyperbolic") return ProfileKind::hyperbolic;
    if (s == "adss") return ProfileKind::adss;
    if (s == "custom") return ProfileKind::custom;
    throw ValidationError("profile.kind: unknown value '" + s + "'");
}

inline CaseTag parse_case(const std::string& s) {
    if (s == "pmt-flat") return CaseTag::pmt_flat;
    if (s == "rpi-schwarzschild") return CaseTag::rpi_schwarzschild;
    if (s == "pmt-hyperbolic") return CaseTag::pmt_hyperbolic;
    if (s == "rpi-adss") return CaseTag::rpi_adss;
    throw ValidationError("case: unknown value '" + s + "'");
}

inline CaseTag default_case(ProfileKind k) {
    switch (k) {
        case ProfileKind::flat: return CaseTag::pmt_flat;
        case ProfileKind::schwarzschild: return CaseTag::rpi_schwarzschild;
        case ProfileKind::hyperbolic: return CaseTag::pmt_hyperbolic;
        case ProfileKind::adss: return CaseTag::rpi_adss;
        case ProfileKind::custom: return CaseTag::pmt_flat;
    }
    return CaseTag::pmt_flat;
}

inline MassVariant default_variant(ProfileKind k) {
    return (k == ProfileKind::hyperbolic || k == ProfileKind::adss) ? MassVariant::hyperbolic
                                                                    : MassVariant::euclidean;
}

}  // namespace detail

inline Scenario parse_scenario_json(const ordered_json& j) {
    Scenario s;
    try {
        if (j.contains("profile")) {
            const auto& p = j.at("profile");
            s.profile_kind = detail::parse_kind(p.value("kind", std::string("flat")));
            s.profile_m = p.value("m", 0.0);
            s.profile_csv = p.value("csv", std::string());
        }
        s.case_tag = detail::default_case(s.profile_kind);
        s.mass_variant = detail::default_variant(s.profile_kind);
        s.r0 = j.value("r0", 1.0);
        s.T = j.value("T", 2.0);
        s.N_theta = j.value("N_theta", 64);
        s.N_t = j.value("N_t", 256);
        if (j.contains("initial_surface")) {
            const auto& i = j.at("initial_surface");
            const std::string type = i.value("type", std::string("round"));
            if (type == "round") {
                s.initial.round = true;
            } else if (type == "perturbation") {
                s.initial.round = false;
                s.initial.legendre_mode = i.value("legendre_mode", 2);
                s.initial.amplitude = i.value("amplitude", 0.1);
            } else {
                throw ValidationError("initial_surface.type: unknown value '" + type + "'");
            }
        }
        if (j.contains("case")) s.case_tag = detail::parse_case(j.at("case").get<std::string>());
        if (j.contains("mass_variant")) {
            const std::string v = j.at("mass_variant").get<std::string>();
            if (v == "euclidean") s.mass_variant = MassVariant::euclidean;
            else if (v == "hyperbolic") s.mass_variant = MassVariant::hyperbolic;
            else throw ValidationError("mass_variant: unknown value '" + v + "'");
        }
        if (j.contains("bounds")) {
            const auto& b = j.at("bounds");
            s.bounds.H0 = b.value("H0", s.bounds.H0);
            s.bounds.H1 = b.value("H1", s.bounds.H1);
            s.bounds.A1 = b.value("A1", s.bounds.A1);
            s.bounds.D = b.value("D", s.bounds.D);
            s.bounds.C = b.value("C", s.bounds.C);
        }
        if (j.contains("tolerances")) s.tilt_cap = j.at("tolerances").value("tilt_cap", s.tilt_cap);
        if (j.contains("derivative_mode")) {
            const std::string m = j.at("derivative_mode").get<std::string>();
            if (m == "delta-covariant") s.derivative_mode = DerivativeMode::delta_covariant;
            else if (m == "coordinate-partial") s.derivative_mode = DerivativeMode::coordinate_partial;
            else throw ValidationError("derivative_mode: unknown value '" + m + "'");
        }
        if (j.contains("g3_base_slice")) {
            const std::string g = j.at("g3_base_slice").get<std::string>();
            if (g == "T") s.g3_base = G3BaseSlice::final_slice;
            else if (g == "zero") s.g3_base = G3BaseSlice::zero_slice;
            else throw ValidationError("g3_base_slice: unknown value '" + g + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("scenario: ") + e.what());
    }
    if (s.N_theta < 16) throw ValidationError("N_theta: must be >= 16");
    if (s.N_t < 32) throw ValidationError("N_t: must be >= 32");
    if (!(s.T > 0.0)) throw ValidationError("T: must be positive");
    if (!s.initial.round && !(s.initial.amplitude < 0.5))
        throw ValidationError("initial_surface.amplitude: must be < 0.5");
    if (!s.initial.round && s.initial.legendre_mode < 1)
        throw ValidationError("initial_surface.legendre_mode: must be >= 1");
    if (!(s.r0 > 0.0)) throw ValidationError("r0: must be positive");
    s.case_profile_warn = !case_profile_compatible(s.case_tag, s.profile_kind);
    return s;
}

inline Scenario parse_scenario(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("scenario: ") + e.what());
    }
    return parse_scenario_json(j);
}

inline ordered_json emit_scenario_json(const Scenario& s) {
    ordered_json j;
    j["profile"] = {{"kind", to_string(s.profile_kind)}, {"m", s.profile_m}};
    if (s.profile_kind == ProfileKind::custom) j["profile"]["csv"] = s.profile_csv;
    j["r0"] = s.r0;
    j["T"] = s.T;
    j["N_theta"] = s.N_theta;
    j["N_t"] = s.N_t;
    if (s.initial.round) {
        j["initial_surface"] = {{"type", "round"}};
    } else {
        j["initial_surface"] = {{"type", "perturbation"},
                                {"legendre_mode", s.initial.legendre_mode},
                                {"amplitude", s.initial.amplitude}};
    }
    j["case"] = to_string(s.case_tag);
    j["mass_variant"] = to_string(s.mass_variant);
    j["bounds"] = {{"H0", s.bounds.H0}, {"H1", s.bounds.H1}, {"A1", s.bounds.A1},
                   {"D", s.bounds.D},   {"C", s.bounds.C}};
    j["tolerances"] = {{"tilt_cap", s.tilt_cap}};
    j["derivative_mode"] = to_string(s.derivative_mode);
    j["g3_base_slice"] = s.g3_base == G3BaseSlice::final_slice ? "T" : "zero";
    return j;
}

inline std::string emit_scenario(const Scenario& s) { return emit_scenario_json(s).dump(2); }

inline std::vector<double> initial_radius_samples(const Scenario& s, const AxisymGrid& grid) {
    std::vector<double> rho(grid.n, s.r0);
    if (!s.initial.round)
        for (int j = 0; j < grid.n; ++j)
            rho[j] = s.r0 * (1.0 + s.initial.amplitude *
                                       legendre_p(s.initial.legendre_mode, std::cos(grid.theta[j])));
    return rho;
}

/// Round initial data runs on the exact foliation; perturbed data runs the PDE solver.
inline FlowRecord build_record(const Scenario& s) {
    const WarpedProfile p = s.profile();
    if (s.initial.round) return exact_round_flow(p, s.r0, s.T, s.N_t, s.N_theta);
    const AxisymGrid grid(s.N_theta);
    return run_imcf(p, grid, initial_radius_samples(s, grid), s.T, s.N_t, s.tilt_cap);
}

struct StudyConfig {
    std::vector<Scenario> members;
    std::vector<double> parameters;
    std::string parameter_key;  // "m" or "epsilon"
};

inline StudyConfig parse_study(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("study: ") + e.what());
    }
    StudyConfig cfg;
    try {
        if (j.contains("base") && j.contains("study")) {
            const Scenario base = parse_scenario_json(j.at("base"));
            cfg.parameter_key = j.at("study").value("parameter", std::string("m"));
            for (double v : j.at("study").at("values").get<std::vector<double>>()) {
                Scenario m = base;
                if (cfg.parameter_key == "m") {
                    m.profile_m = v;
                } else if (cfg.parameter_key == "epsilon") {
                    m.initial.round = false;
                    m.initial.amplitude = v;
                } else {
                    throw ValidationError("study.parameter: must be 'm' or 'epsilon'");
                }
                cfg.members.push_back(m);
                cfg.parameters.push_back(v);
            }
        } else if (j.contains("family")) {
            cfg.parameter_key = j.value("parameter", std::string("m"));
            for (const auto& member : j.at("family")) {
                Scenario m = parse_scenario_json(member);
                cfg.members.push_back(m);
                cfg.parameters.push_back(cfg.parameter_key == "epsilon" ? m.initial.amplitude
                                                                        : m.profile_m);
            }
        } else {
            throw ValidationError("study: need either base+study or family");
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("study: ") + e.what());
    }
    return cfg;
}

}  // namespace imcflab
