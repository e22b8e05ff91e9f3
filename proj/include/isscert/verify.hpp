#pragma once

#include <optional>
#include <string>
#include <vector>

#include "isscert/model.hpp"
#include "isscert/solver.hpp"
#include "isscert/transform.hpp"

namespace isscert {

/// Outcome of one bound check. worst_margin is relative:
/// (bound - observed) / max(bound, observed, 1e-12), minimized over all
/// checked points; the check passes when worst_margin >= -tol_rel.
struct VerificationReport {
    std::string name;
    bool passed = true;
    double worst_margin = 0.0;
    double worst_t = 0.0;
    std::optional<double> worst_x;
    long n_points_checked = 0;
    double tol_rel = 0.0;
};

/// Sampling ranges for the randomized disturbance and initial-profile draws.
struct ScenarioFamilies {
    double amp_min = 1e-2, amp_max = 10.0;   // log-uniform disturbance amplitudes
    double omega_min = 1.5, omega_max = 12.0;
    double phi_amp_min = 1e-2, phi_amp_max = 1.0;
    int phi_mode_max = 4;
    int f_mode_max = 3;
};

struct ScenarioSuite {
    ProblemSpec base_spec;
    int n_trials = 0;
    unsigned long long seed = 0;
    ScenarioFamilies families;
};

struct TrialResult {
    int trial = 0;
    bool passed = true;
    double worst_margin = 0.0;
    std::vector<VerificationReport> checks;
};

struct SuiteReport {
    VerificationReport aggregate;
    std::vector<TrialResult> trials;
};

/// Transformed data of the split pipeline: f_tilde = e^{-bx/2a} f,
/// d0_tilde = d0, d1_tilde = e^{-b/2a} d1, phi_tilde = e^{-bx/2a} phi.
struct TildeData {
    Field f_tilde;
    Signal d0_tilde, d1_tilde;
    InitialProfile phi_tilde;
};

TildeData transform_data(const ProblemSpec& spec);

/// max |v| over the grid against the sup-norm bound M.
VerificationReport verify_max_estimate(const Trajectory& v_traj,
                                       const MaxEstimateBound& bound,
                                       double tol_rel);

/// ||w(.,t)|| <= phi_l2 e^{-lambda t} + G(s_f) + G0(s_0) + G1(s_1) per time level.
VerificationReport verify_w_l2(const Trajectory& w_traj, double phi_l2,
                               double lambda,
                               const std::array<KFunction, 3>& gains_tilde,
                               const std::array<double, 3>& sups_tilde,
                               double tol_rel);

/// ||u(.,t)|| against the certified bound per time level.
VerificationReport verify_iss(const Trajectory& u_traj, const GainSet& gains,
                              double phi_l2, const std::array<double, 3>& sups,
                              double tol_rel);

/// max |u - e^{bx/2a}(v + w)| <= tol_abs; margin reported relative to tol_abs.
VerificationReport verify_superposition(const Trajectory& u_traj,
                                        const Trajectory& v_traj,
                                        const Trajectory& w_traj, double a,
                                        double b, double tol_abs);

/// Trace inequality u(point)^2 <= 2/(q-p) ||u||^2 + (q-p) ||u_x||^2 on a
/// uniformly sampled profile, with 1e-8 slack.
bool agmon_check(const std::vector<double>& values, double p, double q,
                 double point);

struct ConvergencePoint {
    double dx = 0.0;
    double error = 0.0;
    std::optional<double> order;
};

/// Errors against the built-in analytic oracle (undisturbed Dirichlet-zero
/// problems with a single weighted sine mode); successive-ratio orders.
/// Throws std::invalid_argument when the scenario has no oracle.
std::vector<ConvergencePoint> convergence_study(const ProblemSpec& spec,
                                                const std::vector<Grid>& grids,
                                                const SolverOptions& opts = {});

/// Default sampling ranges: nonlinear problems cap the disturbance
/// amplitudes at 0.5 to keep the explicit nonlinear term well inside its
/// stability step; linear problems use the full [1e-2, 10] range.
ScenarioFamilies default_families(const ProblemSpec& spec);

/// Deterministic randomized scenario for trial index `trial` of the suite.
ProblemSpec make_trial_spec(const ScenarioSuite& suite, int trial);

/// One full pipeline pass: direct simulation, certificate, split simulation,
/// and the bound checks (certified estimate, sup-norm estimate, split identity).
TrialResult run_trial(const ProblemSpec& spec, int trial, const Grid& grid,
                      const SolverOptions& opts, double tol_rel);

/// All trials of the suite; parallelism capped by ISS_CERTIFY_THREADS
/// (0 or unset runs sequentially). Results are independent of the thread count.
SuiteReport run_scenario_suite(const ScenarioSuite& suite, const Grid& grid,
                               const SolverOptions& opts, double tol_rel);

}  // namespace isscert
