#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "imcflab/chain.hpp"
#include "imcflab/common.hpp"
#include "imcflab/flow.hpp"
#include "imcflab/scenario.hpp"

namespace imcflab {

inline void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("write_text: cannot open " + path);
    out << text;
}

inline ordered_json class_report_json(const ClassReport& r, const ClassBounds& b) {
    ordered_json j;
    j["bounds"] = {{"H0", b.H0}, {"H1", b.H1}, {"A1", b.A1}, {"D", b.D}, {"C", b.C}};
    j["realized"] = {{"H_min", r.H_realized_min}, {"H_max", r.H_realized_max},
                     {"A_W22", r.A_W22},          {"Rc_W12", r.Rc_W12},
                     {"R_L2", r.R_L2},            {"diam_max", r.diam_max},
                     {"K_final_max", r.K_final_max}};
    j["checks"] = {{"H_in_bounds", r.H_in_bounds}, {"A_ok", r.A_ok},       {"Rc_ok", r.Rc_ok},
                   {"R_ok", r.R_ok},               {"diam_ok", r.diam_ok}, {"K_ok", r.K_ok},
                   {"pass", r.pass}};
    return j;
}

inline ordered_json record_sidecar_json(const FlowRecord& rec) {
    ordered_json j;
    j["profile"] = {{"kind", to_string(rec.profile.kind)}, {"m", rec.profile.m}};
    j["r0"] = rec.r0;
    j["T"] = rec.T;
    j["N_t"] = rec.n_t;
    j["N_theta"] = rec.grid.n;
    j["provenance"] = to_string(rec.provenance);
    j["realized_bounds"] = {{"H_min", rec.H_min},
                            {"H_max", rec.H_max},
                            {"area_max_rel_err", rec.area_max_rel_err}};
    return j;
}

inline ordered_json chain_report_json(const ChainReport& r) {
    ordered_json j;
    ordered_json links = ordered_json::array();
    for (const LinkDistance& l : r.links)
        links.push_back({{"link", l.link}, {"l2", l.l2}, {"w12", l.w12}});
    j["links"] = links;
    j["mode"] = r.mode;
    j["case"] = r.case_tag;
    j["m"] = r.m;
    j["triangle_total"] = {{"l2", r.l2_triangle_total}, {"w12", r.w12_triangle_total}};
    j["direct"] = {{"l2", r.l2_direct}, {"w12", r.w12_direct}};
    j["w12_mode_gap"] = r.w12_mode_gap;
    j["vol_rel_err"] = r.vol_rel_err;
    j["mH_final"] = r.mH_final;
    j["case_profile_compatible"] = r.case_profile_compatible_flag;
    return j;
}

inline void write_chain_links_csv(const ChainReport& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("write_chain_links_csv: cannot open " + path);
    out << "link,l2,w12,mode\n";
    for (const LinkDistance& l : r.links)
        out << l.link << ',' << fmt17(l.l2) << ',' << fmt17(l.w12) << ',' << r.mode << '\n';
    out << "triangle_total," << fmt17(r.l2_triangle_total) << ',' << fmt17(r.w12_triangle_total)
        << ',' << r.mode << '\n';
    out << "direct," << fmt17(r.l2_direct) << ',' << fmt17(r.w12_direct) << ',' << r.mode << '\n';
}

inline ordered_json study_report_json(const StudyReport& r, const std::string& parameter_key) {
    ordered_json j;
    j["parameter_key"] = parameter_key;
    ordered_json members = ordered_json::array();
    for (const StudyMember& m : r.members)
        members.push_back({{"parameter", m.parameter},
                           {"l2", m.report.l2_direct},
                           {"w12", m.report.w12_direct},
                           {"vol_rel_err", m.report.vol_rel_err},
                           {"mH_final", m.report.mH_final}});
    j["members"] = members;
    j["fit_slope"] = r.fit_slope;
    j["monotone"] = r.monotone;
    j["mass_monotone"] = r.mass_monotone;
    return j;
}

inline void write_study_csv(const StudyReport& r, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("write_study_csv: cannot open " + path);
    out << "parameter,l2,w12,vol_rel_err,mH_final\n";
    for (const StudyMember& m : r.members)
        out << fmt17(m.parameter) << ',' << fmt17(m.report.l2_direct) << ','
            << fmt17(m.report.w12_direct) << ',' << fmt17(m.report.vol_rel_err) << ','
            << fmt17(m.report.mH_final) << '\n';
}

}  // namespace imcflab
