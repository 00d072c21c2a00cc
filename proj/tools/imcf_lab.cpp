// imcf-lab: scenario-driven runs of the IMCF foliation laboratory.
//
// Commands: verify | flow | masses | chain | study
// Exit codes: 0 ok, 1 verification failure, 2 input error, 3 flow breakdown.

#include <clocale>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "imcflab/chain.hpp"
#include "imcflab/flow.hpp"
#include "imcflab/io.hpp"
#include "imcflab/mass.hpp"
#include "imcflab/scenario.hpp"
#include "imcflab/verify.hpp"

namespace fs = std::filesystem;
using namespace imcflab;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Scenario load_scenario(const std::string& config, int refine, const std::string& mode_flag) {
    Scenario s = parse_scenario(slurp(config));
    for (int i = 0; i < refine; ++i) {
        s.N_theta *= 2;
        s.N_t *= 2;
    }
    if (mode_flag == "delta-covariant") s.derivative_mode = DerivativeMode::delta_covariant;
    else if (mode_flag == "coordinate-partial") s.derivative_mode = DerivativeMode::coordinate_partial;
    else if (!mode_flag.empty()) throw ValidationError("--mode: unknown value '" + mode_flag + "'");
    return s;
}

void warn_compatibility(const Scenario& s) {
    if (s.case_profile_warn)
        std::cout << "warning: case " << to_string(s.case_tag) << " does not match profile "
                  << to_string(s.profile_kind) << "; reports are still produced\n";
}

int cmd_verify(const std::string& out_dir) {
    std::ostringstream report;
    const bool ok = verify_suite(report);
    std::cout << report.str();
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_text(out_dir + "/verify.txt", report.str());
    }
    return ok ? 0 : 1;
}

int cmd_flow(const Scenario& s, const std::string& out_dir) {
    warn_compatibility(s);
    const FlowRecord rec = build_record(s);
    fs::create_directories(out_dir);
    write_record_csvs(rec, out_dir);
    write_text(out_dir + "/record.json", record_sidecar_json(rec).dump(2) + "\n");
    write_surface_csv(rec.states.front(), out_dir + "/surface_t0.csv");
    write_surface_csv(rec.states.back(), out_dir + "/surface_T.csv");
    const ClassReport cls = class_membership_report(rec, s.bounds);
    write_text(out_dir + "/class_report.json", class_report_json(cls, s.bounds).dump(2) + "\n");
    std::cout << "flow: " << to_string(rec.provenance) << " record, area law max rel err "
              << fmt17(rec.area_max_rel_err) << "\n";
    return 0;
}

int cmd_masses(const Scenario& s, const std::string& out_dir) {
    warn_compatibility(s);
    const FlowRecord rec = build_record(s);
    fs::create_directories(out_dir);
    write_table_csv(geroch_diagnostics(rec, s.mass_variant), out_dir + "/geroch.csv");
    write_table_csv(corollary_integral_table(rec, s.mass_variant),
                    out_dir + "/corollary_integrals.csv");
    const AverageEvolutionTables avg = average_evolution_residuals(rec, s.mass_variant);
    write_table_csv(avg.avg_prop, out_dir + "/average_prop.csv");
    write_table_csv(avg.avg_evol, out_dir + "/average_evolution.csv");
    write_table_csv(avg.avg_evol2, out_dir + "/average_evolution_sq.csv");
    write_table_csv(avg.limits, out_dir + "/average_limits.csv");
    write_table_csv(second_ff_gradient_decay(rec), out_dir + "/second_fund_form_decay.csv");

    NamedTable mass_table;
    mass_table.tag = "mass=hawking";
    mass_table.columns = {"t", "m_H", "area"};
    const std::vector<double> ms = mass_series(rec, s.mass_variant);
    for (int k = 0; k < rec.n_nodes(); ++k)
        mass_table.rows.push_back({rec.times[k], ms[k], rec.states[k].area});
    write_table_csv(mass_table, out_dir + "/mass_series.csv");

    const int a = 2, b = rec.n_t - 2;
    const WeakRicciResult wr = weak_ricci_residual(rec, time_bump_lattice(rec, a, b), a, b);
    const RicciMargins rm = ricci_inequality_margin(rec);
    ordered_json j;
    j["weak_ricci"] = {{"lhs", wr.lhs}, {"rhs", wr.rhs}, {"residual", wr.residual}};
    j["ricci_margins"] = {{"margin_laplacian", rm.margin_laplacian},
                          {"margin_hessian", rm.margin_hessian},
                          {"margin_hessian_H0", rm.margin_hessian_H0},
                          {"pde_residual_printed", rm.pde_residual_printed},
                          {"pde_residual_corrected", rm.pde_residual_corrected}};
    const SandwichMargins sm = metric_sandwich_margin(rec);
    j["sandwich"] = {{"lower", sm.lower},
                     {"upper", sm.upper},
                     {"printed_lower", sm.printed_lower},
                     {"printed_upper", sm.printed_upper}};
    const MassBracket mb = mass_bracket_check(rec, s.mass_variant);
    j["mass_bracket_max_violation"] = mb.max_violation;
    write_text(out_dir + "/identities.json", j.dump(2) + "\n");
    std::cout << "masses: tables written to " << out_dir << "\n";
    return 0;
}

int cmd_chain(const Scenario& s, const std::string& out_dir) {
    warn_compatibility(s);
    const FlowRecord rec = build_record(s);
    const ChainReport rep = chain_report(rec, s.case_tag, s.case_mass(), s.derivative_mode, s.g3_base);
    fs::create_directories(out_dir);
    write_text(out_dir + "/chain_report.json", chain_report_json(rep).dump(2) + "\n");
    write_chain_links_csv(rep, out_dir + "/links.csv");
    std::cout << "chain: w12 direct distance " << fmt17(rep.w12_direct) << "\n";
    return 0;
}

int cmd_study(const std::string& config, int refine, const std::string& mode_flag,
              const std::string& out_dir) {
    StudyConfig cfg = parse_study(slurp(config));
    fs::create_directories(out_dir);
    std::vector<StudyMember> members;
    for (size_t i = 0; i < cfg.members.size(); ++i) {
        Scenario s = cfg.members[i];
        for (int r = 0; r < refine; ++r) {
            s.N_theta *= 2;
            s.N_t *= 2;
        }
        if (!mode_flag.empty()) {
            if (mode_flag == "delta-covariant") s.derivative_mode = DerivativeMode::delta_covariant;
            else if (mode_flag == "coordinate-partial")
                s.derivative_mode = DerivativeMode::coordinate_partial;
            else throw ValidationError("--mode: unknown value '" + mode_flag + "'");
        }
        const FlowRecord rec = build_record(s);
        const ChainReport rep =
            chain_report(rec, s.case_tag, s.case_mass(), s.derivative_mode, s.g3_base);
        write_text(out_dir + "/member_" + std::to_string(i) + ".json",
                   chain_report_json(rep).dump(2) + "\n");
        members.push_back({cfg.parameters[i], rep});
    }
    const StudyReport rep = convergence_study(members);
    write_text(out_dir + "/study_report.json", study_report_json(rep, cfg.parameter_key).dump(2) + "\n");
    write_study_csv(rep, out_dir + "/study.csv");
    std::cout << "study: fit slope " << fmt17(rep.fit_slope) << ", monotone "
              << (rep.monotone ? "yes" : "no") << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");
    CLI::App app{"imcf-lab: inverse mean curvature flow foliation laboratory"};
    app.require_subcommand(1);

    std::string config, out_dir, mode_flag;
    int refine = 0;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        if (needs_config) cmd->add_option("--config", config, "scenario JSON")->required();
        cmd->add_option("--out", out_dir, "output directory")->required();
        cmd->add_option("--mode", mode_flag, "delta-covariant | coordinate-partial");
        cmd->add_option("--refine", refine, "double N_theta and N_t k times");
    };

    CLI::App* verify = app.add_subcommand("verify", "run the built-in oracle suite");
    verify->add_option("--out", out_dir, "output directory");
    CLI::App* flow = app.add_subcommand("flow", "emit a flow record");
    add_common(flow, true);
    CLI::App* masses = app.add_subcommand("masses", "emit mass and identity tables");
    add_common(masses, true);
    CLI::App* chain = app.add_subcommand("chain", "emit a chain report");
    add_common(chain, true);
    CLI::App* study = app.add_subcommand("study", "run a parameter family");
    add_common(study, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(verify)) return cmd_verify(out_dir);
        if (app.got_subcommand(flow)) return cmd_flow(load_scenario(config, refine, mode_flag), out_dir);
        if (app.got_subcommand(masses))
            return cmd_masses(load_scenario(config, refine, mode_flag), out_dir);
        if (app.got_subcommand(chain))
            return cmd_chain(load_scenario(config, refine, mode_flag), out_dir);
        if (app.got_subcommand(study)) return cmd_study(config, refine, mode_flag, out_dir);
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const FlowBreakdown& e) {
        std::cerr << "flow breakdown: " << e.what() << "\n";
        return 3;
    } catch (const NoConvergence& e) {
        std::cerr << "flow breakdown: " << e.what() << "\n";
        return 3;
    } catch (const RadiusOutOfDomain& e) {
        std::cerr << "flow breakdown: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
