#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"

#include "isscert/model.hpp"
#include "isscert/solver.hpp"
#include "isscert/transform.hpp"
#include "isscert/verify.hpp"

namespace isscert {

/// Configuration or input-document problem: carries a JSON-pointer-style
/// location of the offending field.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct GridConfig {
    int nx = 201;
    int nt = 4000;
    double t_final = 1.0;
};

struct ToleranceConfig {
    double tol_rel = 1e-2;
    double s_max = 10.0;
    int n_samples = 1001;
    int t_samples = 64;
    double t_max = 1.0;
};

struct Config {
    ProblemSpec spec;
    SplitOverrides overrides;
    GridConfig grid;
    ToleranceConfig tolerances;
};

/// Parses and validates a JSON config document. Unknown fields are rejected;
/// errors name the offending field by JSON pointer.
Config load_config(const std::string& path);
Config config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const Config& config);

/// u(0) = d0, u_x(1) = -K1 u(1) + d1, h = 0.
Config preset_reaction_diffusion(double a, double b, double c, double K1);

/// u(0) = d0, u_x(1) = d1, h(s) = c2 s^3 + c3 s^5.
Config preset_ginzburg_landau(double a, double b, double c1, double c2, double c3);

nlohmann::json validation_report_json(const ValidationReport& report);
nlohmann::json verification_report_json(const VerificationReport& report);
nlohmann::json suite_report_json(const SuiteReport& report);

/// Flat coefficient record {beta_coeff, lambda, gamma{p,q,r}, ...,
/// nonlinearity descriptor}.
nlohmann::json gain_record_json(const GainSet& gains, const Nonlinearity& h);

/// Long-format CSV `t,x,value`, time-major, 17 significant digits, LF endings.
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

}  // namespace isscert
