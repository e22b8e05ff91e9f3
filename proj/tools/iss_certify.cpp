#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "isscert/config.hpp"
#include "isscert/model.hpp"
#include "isscert/solver.hpp"
#include "isscert/transform.hpp"
#include "isscert/verify.hpp"

namespace {

using isscert::Config;
using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitSolverFault = 3;

void emit(const json& doc, const std::string& out_path) {
    const std::string text = doc.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw isscert::ConfigError("cannot open output file: " + out_path);
    out << text;
}

json error_json(const std::string& type, const std::string& message) {
    return json{{"error", {{"type", type}, {"message", message}}}};
}

void apply_override_args(const std::vector<std::string>& args,
                         isscert::SplitOverrides& overrides) {
    for (const std::string& arg : args) {
        const auto eq = arg.find('=');
        if (eq == std::string::npos)
            throw isscert::ConfigError("override must have the form key=value: " + arg);
        const std::string key = arg.substr(0, eq);
        double value = 0.0;
        try {
            value = std::stod(arg.substr(eq + 1));
        } catch (const std::exception&) {
            throw isscert::ConfigError("override value is not a number: " + arg);
        }
        if (key == "k0") overrides.k0 = value;
        else if (key == "k1") overrides.k1 = value;
        else if (key == "eps") overrides.eps = value;
        else if (key == "eps0") overrides.eps0 = value;
        else if (key == "eps1") overrides.eps1 = value;
        else throw isscert::ConfigError("unknown override key: " + key);
    }
}

int run_validate(const std::string& cfg_path, const std::string& out_path) {
    const Config cfg = isscert::load_config(cfg_path);
    const auto structure = isscert::validate_structure(cfg.spec);
    const double c_tilde = cfg.spec.b * cfg.spec.b / (4.0 * cfg.spec.a) + cfg.spec.c;
    const auto nonlinearity = isscert::check_nonlinearity(
        cfg.spec.h, c_tilde, cfg.tolerances.s_max, cfg.tolerances.n_samples);
    const auto compatibility = isscert::check_compatibility(
        cfg.spec, cfg.tolerances.t_samples, cfg.tolerances.t_max);

    const bool passed = structure.passed && nonlinearity.passed && compatibility.passed;
    emit(json{{"passed", passed},
              {"structure", isscert::validation_report_json(structure)},
              {"nonlinearity", isscert::validation_report_json(nonlinearity)},
              {"compatibility", isscert::validation_report_json(compatibility)}},
         out_path);
    return passed ? kExitPass : kExitVerificationFailure;
}

/// Detects the two closed-form shapes and reports the largest relative
/// coefficient deviation between the assembled and the closed-form gains.
json closed_form_cross_check(const isscert::ProblemSpec& spec,
                             const isscert::SplitParams& params,
                             const isscert::GainSet& gains) {
    std::optional<isscert::GainSet> reference;
    std::string shape;
    if (spec.h.is_zero() && spec.alpha0 == 1.0 && spec.beta0 == 0.0 &&
        spec.beta1 == 1.0 && spec.alpha1 > std::fabs(spec.b) / (2.0 * spec.a)) {
        shape = "reaction_diffusion";
        reference = isscert::closed_form_gains_reaction_diffusion(
            spec.a, spec.b, spec.c, spec.alpha1, params.eps);
    } else if (spec.h.kind() == isscert::NonlinearityKind::cubic_quintic &&
               spec.alpha0 == 1.0 && spec.beta0 == 0.0 && spec.alpha1 == 0.0 &&
               spec.beta1 == 1.0) {
        shape = "ginzburg_landau";
        reference = isscert::closed_form_gains_ginzburg_landau(
            spec.a, spec.b, spec.c, spec.h.c2(), spec.h.c3(), params);
    }
    if (!reference)
        throw isscert::ConfigError(
            "config does not match a closed-form preset shape (--closed-form)");

    double dev = 0.0;
    auto acc = [&dev](double lhs, double rhs) {
        const double denom = std::max({std::fabs(lhs), std::fabs(rhs), 1e-12});
        dev = std::max(dev, std::fabs(lhs - rhs) / denom);
    };
    acc(gains.beta_coeff, reference->beta_coeff);
    acc(gains.lambda, reference->lambda);
    const isscert::KFunction* lhs[3] = {&gains.gamma, &gains.gamma0, &gains.gamma1};
    const isscert::KFunction* rhs[3] = {&reference->gamma, &reference->gamma0,
                                        &reference->gamma1};
    for (int i = 0; i < 3; ++i) {
        acc(lhs[i]->p, rhs[i]->p);
        acc(lhs[i]->q, rhs[i]->q);
        acc(lhs[i]->r, rhs[i]->r);
    }
    return json{{"shape", shape}, {"max_relative_deviation", dev}};
}

int run_gains(const std::string& cfg_path, const std::vector<std::string>& override_args,
              bool closed_form, const std::string& out_path) {
    Config cfg = isscert::load_config(cfg_path);
    apply_override_args(override_args, cfg.overrides);

    const auto tspec = isscert::transform_spec(cfg.spec);
    const auto params = isscert::choose_split_params(tspec, cfg.overrides);
    const auto gains = isscert::compute_gain_set(cfg.spec, tspec, params);

    json record = isscert::gain_record_json(gains, cfg.spec.h);
    record["split_params"] = {{"k0", params.k0},     {"k1", params.k1},
                              {"eps", params.eps},   {"eps0", params.eps0},
                              {"eps1", params.eps1}, {"C0", params.C0},
                              {"C1", params.C1},     {"lambda0", params.lambda0},
                              {"lambda1", params.lambda1}};
    if (closed_form)
        record["closed_form"] = closed_form_cross_check(cfg.spec, params, gains);
    emit(record, out_path);
    return kExitPass;
}

int run_simulate(const std::string& cfg_path, std::optional<int> nx,
                 std::optional<int> nt, std::optional<double> t_final,
                 const std::string& subsystem, const std::string& out_path) {
    const Config cfg = isscert::load_config(cfg_path);
    isscert::Grid grid{cfg.grid.nx, cfg.grid.nt, cfg.grid.t_final};
    if (nx) grid.nx = *nx;
    if (nt) grid.nt = *nt;
    if (t_final) grid.t_final = *t_final;
    if (grid.nx < 3 || grid.nt < 2 || !(grid.t_final > 0.0))
        throw isscert::ConfigError("grid requires nx >= 3, nt >= 2, t_final > 0");

    const isscert::SolverOptions opts;
    if (subsystem == "full") {
        isscert::write_trajectory_csv(isscert::simulate_full(cfg.spec, grid, opts),
                                      out_path);
        return kExitPass;
    }
    const auto tspec = isscert::transform_spec(cfg.spec);
    const auto params = isscert::choose_split_params(tspec, cfg.overrides);
    const auto td = isscert::transform_data(cfg.spec);
    const auto v = isscert::simulate_v(tspec, params, td.f_tilde, td.d0_tilde,
                                       td.d1_tilde, grid, opts);
    if (subsystem == "v") {
        isscert::write_trajectory_csv(v, out_path);
        return kExitPass;
    }
    isscert::write_trajectory_csv(
        isscert::simulate_w(tspec, params, cfg.spec.h, v, td.phi_tilde, grid, opts),
        out_path);
    return kExitPass;
}

int run_verify(const std::string& cfg_path, int trials, unsigned long long seed,
               std::optional<double> tol_rel, const std::string& out_path) {
    const Config cfg = isscert::load_config(cfg_path);
    if (trials < 0) throw isscert::ConfigError("--trials must be >= 0");

    isscert::ScenarioSuite suite;
    suite.base_spec = cfg.spec;
    suite.n_trials = trials;
    suite.seed = seed;
    suite.families = isscert::default_families(cfg.spec);

    const isscert::Grid grid{cfg.grid.nx, cfg.grid.nt, cfg.grid.t_final};
    const double tol = tol_rel ? *tol_rel : cfg.tolerances.tol_rel;
    const auto report = isscert::run_scenario_suite(suite, grid, {}, tol);
    emit(isscert::suite_report_json(report), out_path);
    return report.aggregate.passed ? kExitPass : kExitVerificationFailure;
}

int run_preset(const std::string& name, double a, double b, double c, double K1,
               double c2, double c3, const std::string& out_path) {
    Config cfg;
    if (name == "reaction-diffusion")
        cfg = isscert::preset_reaction_diffusion(a, b, c, K1);
    else if (name == "ginzburg-landau")
        cfg = isscert::preset_ginzburg_landau(a, b, c, c2, c3);
    else
        throw isscert::ConfigError("unknown preset: " + name);
    emit(isscert::config_to_json(cfg), out_path);
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ISS certificates for 1-D parabolic PDEs with boundary disturbances"};
    app.require_subcommand(1);

    std::string cfg_path, out_path;

    auto* validate = app.add_subcommand("validate", "Run all admissibility checks");
    validate->add_option("config", cfg_path, "JSON config file")->required();
    validate->add_option("--out", out_path, "Write the JSON report to this file");

    std::vector<std::string> override_args;
    bool closed_form = false;
    auto* gains = app.add_subcommand("gains", "Compute the certified gain set");
    gains->add_option("config", cfg_path, "JSON config file")->required();
    gains->add_option("--override", override_args,
                      "Split-parameter overrides, e.g. k1=0.5 eps=0.1");
    gains->add_flag("--closed-form", closed_form,
                    "Cross-check against the closed-form preset gains");
    gains->add_option("--out", out_path, "Write the gain record to this file");

    std::optional<int> nx, nt;
    std::optional<double> t_final;
    std::string subsystem = "full";
    std::string traj_path;
    auto* simulate = app.add_subcommand("simulate", "Write a trajectory CSV");
    simulate->add_option("config", cfg_path, "JSON config file")->required();
    simulate->add_option("--nx", nx, "Spatial nodes");
    simulate->add_option("--nt", nt, "Time steps");
    simulate->add_option("--t-final", t_final, "Final time");
    simulate->add_option("--out", traj_path, "Output CSV path")->required();
    simulate->add_option("--subsystem", subsystem, "full, v or w")
        ->check(CLI::IsMember({"full", "v", "w"}));

    int trials = 100;
    unsigned long long seed = 42;
    std::optional<double> tol_rel;
    auto* verify = app.add_subcommand("verify", "Run the randomized scenario suite");
    verify->add_option("config", cfg_path, "JSON config file")->required();
    verify->add_option("--trials", trials, "Number of randomized trials");
    verify->add_option("--seed", seed, "Deterministic scenario seed");
    verify->add_option("--tol-rel", tol_rel, "Relative bound tolerance");
    verify->add_option("--out", out_path, "Write the JSON report to this file");

    std::string preset_name;
    double pa = 1.0, pb = 0.0, pc = 1.0, pK1 = 1.0, pc2 = 1.0, pc3 = 1.0;
    auto* preset = app.add_subcommand("preset", "Emit a ready config document");
    preset->add_option("name", preset_name, "reaction-diffusion or ginzburg-landau")
        ->required();
    preset->add_option("--a", pa, "Diffusion coefficient");
    preset->add_option("--b", pb, "Advection coefficient");
    preset->add_option("--c", pc, "Reaction coefficient");
    preset->add_option("--K1", pK1, "Robin gain of the reaction-diffusion preset");
    preset->add_option("--c2", pc2, "Cubic coefficient");
    preset->add_option("--c3", pc3, "Quintic coefficient");
    preset->add_option("--out", out_path, "Write the config to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitConfigError;
    }

    try {
        if (app.got_subcommand(validate)) return run_validate(cfg_path, out_path);
        if (app.got_subcommand(gains))
            return run_gains(cfg_path, override_args, closed_form, out_path);
        if (app.got_subcommand(simulate))
            return run_simulate(cfg_path, nx, nt, t_final, subsystem, traj_path);
        if (app.got_subcommand(verify))
            return run_verify(cfg_path, trials, seed, tol_rel, out_path);
        if (app.got_subcommand(preset))
            return run_preset(preset_name, pa, pb, pc, pK1, pc2, pc3, out_path);
    } catch (const isscert::SolverFault& e) {
        std::cout << error_json("solver", e.what()).dump(2) << "\n";
        return kExitSolverFault;
    } catch (const isscert::ConfigError& e) {
        std::cout << error_json("config", e.what()).dump(2) << "\n";
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        std::cout << error_json("config", e.what()).dump(2) << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cout << error_json("internal", e.what()).dump(2) << "\n";
        return kExitConfigError;
    }
    return kExitConfigError;
}
