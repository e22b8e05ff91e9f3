#include "isscert/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

namespace isscert {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kMarginFloor = 1e-12;

double rel_margin(double bound, double observed) {
    return (bound - observed) / std::max({bound, observed, kMarginFloor});
}

}  // namespace

TildeData transform_data(const ProblemSpec& spec) {
    const double w = -spec.b / (2.0 * spec.a);
    TildeData td;
    td.f_tilde = spec.f.exp_weighted(w);
    td.d0_tilde = spec.d0;
    td.d1_tilde = spec.d1.scaled(std::exp(w));
    td.phi_tilde = spec.phi.exp_weighted(w);
    return td;
}

VerificationReport verify_max_estimate(const Trajectory& v_traj,
                                       const MaxEstimateBound& bound,
                                       double tol_rel) {
    if (v_traj.tag() != VariableTag::v_tilde)
        throw std::invalid_argument("verify_max_estimate: trajectory not tagged v_tilde");
    const Grid& g = v_traj.grid();

    VerificationReport r;
    r.name = "max_estimate";
    r.tol_rel = tol_rel;
    r.worst_margin = std::numeric_limits<double>::infinity();
    for (int n = 0; n <= g.nt; ++n)
        for (int j = 0; j < g.nx; ++j) {
            const double m = rel_margin(bound.value, std::fabs(v_traj.at(n, j)));
            if (m < r.worst_margin) {
                r.worst_margin = m;
                r.worst_t = g.t(n);
                r.worst_x = g.x(j);
            }
        }
    r.n_points_checked = static_cast<long>(g.nt + 1) * g.nx;
    r.passed = r.worst_margin >= -tol_rel;
    return r;
}

VerificationReport verify_w_l2(const Trajectory& w_traj, double phi_l2,
                               double lambda,
                               const std::array<KFunction, 3>& gains_tilde,
                               const std::array<double, 3>& sups_tilde,
                               double tol_rel) {
    if (w_traj.tag() != VariableTag::w_tilde)
        throw std::invalid_argument("verify_w_l2: trajectory not tagged w_tilde");
    const Grid& g = w_traj.grid();
    const double gain_sum = gains_tilde[0].value(sups_tilde[0]) +
                            gains_tilde[1].value(sups_tilde[1]) +
                            gains_tilde[2].value(sups_tilde[2]);

    VerificationReport r;
    r.name = "w_l2_estimate";
    r.tol_rel = tol_rel;
    r.worst_margin = std::numeric_limits<double>::infinity();
    for (int n = 0; n <= g.nt; ++n) {
        const double bound = phi_l2 * std::exp(-lambda * g.t(n)) + gain_sum;
        const double m = rel_margin(bound, l2_norm_row(w_traj.row(n), g.nx, g.dx()));
        if (m < r.worst_margin) {
            r.worst_margin = m;
            r.worst_t = g.t(n);
        }
    }
    r.n_points_checked = g.nt + 1;
    r.passed = r.worst_margin >= -tol_rel;
    return r;
}

VerificationReport verify_iss(const Trajectory& u_traj, const GainSet& gains,
                              double phi_l2, const std::array<double, 3>& sups,
                              double tol_rel) {
    if (u_traj.tag() != VariableTag::u)
        throw std::invalid_argument("verify_iss: trajectory not tagged u");
    const Grid& g = u_traj.grid();

    VerificationReport r;
    r.name = "iss_bound";
    r.tol_rel = tol_rel;
    r.worst_margin = std::numeric_limits<double>::infinity();
    for (int n = 0; n <= g.nt; ++n) {
        const double bound =
            evaluate_iss_bound(gains, phi_l2, sups[0], sups[1], sups[2], g.t(n));
        const double m = rel_margin(bound, l2_norm_row(u_traj.row(n), g.nx, g.dx()));
        if (m < r.worst_margin) {
            r.worst_margin = m;
            r.worst_t = g.t(n);
        }
    }
    r.n_points_checked = g.nt + 1;
    r.passed = r.worst_margin >= -tol_rel;
    return r;
}

VerificationReport verify_superposition(const Trajectory& u_traj,
                                        const Trajectory& v_traj,
                                        const Trajectory& w_traj, double a,
                                        double b, double tol_abs) {
    const Grid& g = u_traj.grid();
    const Grid& gv = v_traj.grid();
    const Grid& gw = w_traj.grid();
    if (gv.nx != g.nx || gv.nt != g.nt || gv.t_final != g.t_final ||
        gw.nx != g.nx || gw.nt != g.nt || gw.t_final != g.t_final)
        throw std::invalid_argument("verify_superposition: grid mismatch");

    VerificationReport r;
    r.name = "split_identity";
    r.tol_rel = 0.0;
    r.worst_margin = std::numeric_limits<double>::infinity();
    for (int j = 0; j < g.nx; ++j) {
        const double weight = std::exp(b * g.x(j) / (2.0 * a));
        for (int n = 0; n <= g.nt; ++n) {
            const double err =
                std::fabs(u_traj.at(n, j) - weight * (v_traj.at(n, j) + w_traj.at(n, j)));
            const double m = (tol_abs - err) / std::max(tol_abs, kMarginFloor);
            if (m < r.worst_margin) {
                r.worst_margin = m;
                r.worst_t = g.t(n);
                r.worst_x = g.x(j);
            }
        }
    }
    r.n_points_checked = static_cast<long>(g.nt + 1) * g.nx;
    r.passed = r.worst_margin >= 0.0;
    return r;
}

bool agmon_check(const std::vector<double>& values, double p, double q,
                 double point) {
    const int n = static_cast<int>(values.size());
    if (n < 5 || !(q > p) || point < p || point > q)
        throw std::invalid_argument("agmon_check: need >= 5 nodes and point in [p, q]");
    const double dx = (q - p) / (n - 1);

    const double s = (point - p) / dx;
    const int j = std::min(static_cast<int>(s), n - 2);
    const double frac = s - j;
    const double uc = (1.0 - frac) * values[j] + frac * values[j + 1];

    std::vector<double> sq(n), dsq(n);
    for (int i = 0; i < n; ++i) sq[i] = values[i] * values[i];
    for (int i = 1; i < n - 1; ++i) {
        const double d = (values[i + 1] - values[i - 1]) / (2.0 * dx);
        dsq[i] = d * d;
    }
    const double d0 = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * dx);
    const double dn = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * dx);
    dsq[0] = d0 * d0;
    dsq[n - 1] = dn * dn;

    const double l2 = simpson_integral(sq, dx);
    const double h1 = simpson_integral(dsq, dx);
    return uc * uc <= 2.0 / (q - p) * l2 + (q - p) * h1 + 1e-8;
}

namespace {

/// Analytic solution for undisturbed Dirichlet-zero problems whose initial
/// profile is a single exponentially weighted sine mode: the transform maps
/// them to a pure heat eigenmode.
std::optional<std::function<double(double, double)>> detect_oracle(
    const ProblemSpec& spec) {
    if (!spec.h.is_zero() || !spec.f.empty() || !spec.d0.empty() || !spec.d1.empty())
        return std::nullopt;
    if (spec.beta0 != 0.0 || spec.beta1 != 0.0) return std::nullopt;
    if (spec.phi.terms().size() != 1) return std::nullopt;
    const ProfileTerm& term = spec.phi.terms()[0];
    if (term.kind != ProfileTerm::Kind::sine_mode) return std::nullopt;
    const double w = spec.b / (2.0 * spec.a);
    if (std::fabs(spec.phi.exp_weight() - w) > 1e-14) return std::nullopt;

    const double amp = term.amplitude;
    const int mode = term.mode;
    const double mu = spec.a * mode * mode * kPi * kPi +
                      spec.b * spec.b / (4.0 * spec.a) + spec.c;
    return [amp, mode, w, mu](double x, double t) {
        return amp * std::exp(w * x) * std::sin(mode * kPi * x) * std::exp(-mu * t);
    };
}

}  // namespace

std::vector<ConvergencePoint> convergence_study(const ProblemSpec& spec,
                                                const std::vector<Grid>& grids,
                                                const SolverOptions& opts) {
    const auto oracle = detect_oracle(spec);
    if (!oracle)
        throw std::invalid_argument("convergence_study: no analytic oracle for this scenario");

    std::vector<ConvergencePoint> out;
    out.reserve(grids.size());
    for (const Grid& grid : grids) {
        const Trajectory u = simulate_full(spec, grid, opts);
        double err = 0.0;
        for (int j = 0; j < grid.nx; ++j)
            err = std::max(err, std::fabs(u.at(grid.nt, j) - (*oracle)(grid.x(j), grid.t_final)));
        ConvergencePoint pt;
        pt.dx = grid.dx();
        pt.error = err;
        if (!out.empty() && out.back().dx != pt.dx && err > 0.0 && out.back().error > 0.0)
            pt.order = std::log(out.back().error / err) / std::log(out.back().dx / pt.dx);
        out.push_back(pt);
    }
    return out;
}

namespace {

std::uint64_t trial_stream(std::uint64_t seed, int trial) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(trial) + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

ScenarioFamilies default_families(const ProblemSpec& spec) {
    ScenarioFamilies fam;
    if (!spec.h.is_zero()) {
        fam.amp_max = 0.5;
        fam.phi_amp_max = 0.5;
    }
    return fam;
}

ProblemSpec make_trial_spec(const ScenarioSuite& suite, int trial) {
    std::mt19937_64 rng(trial_stream(suite.seed, trial));
    const ScenarioFamilies& fam = suite.families;
    auto log_uniform = [&rng](double lo, double hi) {
        std::uniform_real_distribution<double> dist(std::log(lo), std::log(hi));
        return std::exp(dist(rng));
    };
    auto uniform = [&rng](double lo, double hi) {
        std::uniform_real_distribution<double> dist(lo, hi);
        return dist(rng);
    };
    auto uniform_int = [&rng](int lo, int hi) {
        std::uniform_int_distribution<int> dist(lo, hi);
        return dist(rng);
    };

    const double amp_d0 = log_uniform(fam.amp_min, fam.amp_max);
    const double omega_d0 = uniform(fam.omega_min, fam.omega_max);
    const double amp_d1 = log_uniform(fam.amp_min, fam.amp_max);
    const double omega_d1 = uniform(fam.omega_min, fam.omega_max);
    const double amp_f = log_uniform(fam.amp_min, fam.amp_max);
    const double omega_f = uniform(fam.omega_min, fam.omega_max);
    const int mode_f = uniform_int(1, fam.f_mode_max);
    const int mode_phi = uniform_int(1, fam.phi_mode_max);
    const double amp_phi = log_uniform(fam.phi_amp_min, fam.phi_amp_max);

    ProblemSpec spec = suite.base_spec;
    // Zero-phase sinusoids keep the t = 0 corners compatible with phi.
    spec.d0 = Signal::sinusoid(amp_d0, omega_d0);
    spec.d1 = Signal::sinusoid(amp_d1, omega_d1);
    FieldTerm ft;
    ft.space.kind = SpaceFactor::Kind::sine_mode;
    ft.space.amplitude = amp_f;
    ft.space.mode = mode_f;
    ft.time = {SignalTerm::Kind::sinusoid, 1.0, omega_f, 0.0};
    spec.f = Field().add_term(ft);
    spec.phi = InitialProfile::sine_mode(amp_phi, mode_phi);
    return spec;
}

TrialResult run_trial(const ProblemSpec& spec, int trial, const Grid& grid,
                      const SolverOptions& opts, double tol_rel) {
    try {
        const TransformedSpec tspec = transform_spec(spec);
        const SplitParams params = choose_split_params(tspec);
        const GainSet gains = compute_gain_set(spec, tspec, params);

        const int n_time_samples = 2001;
        const std::array<double, 3> sups = {
            spec.f.empty() ? 0.0 : sup_norm_field(spec.f, grid.t_final, 201, 201),
            spec.d0.empty() ? 0.0 : sup_norm_signal(spec.d0, grid.t_final, n_time_samples),
            spec.d1.empty() ? 0.0 : sup_norm_signal(spec.d1, grid.t_final, n_time_samples)};

        const Trajectory u = simulate_full(spec, grid, opts);
        const double phi_l2 = l2_norm_row(u.row(0), grid.nx, grid.dx());

        TrialResult result;
        result.trial = trial;
        result.checks.push_back(verify_iss(u, gains, phi_l2, sups, tol_rel));

        const TildeData td = transform_data(spec);
        const Trajectory v =
            simulate_v(tspec, params, td.f_tilde, td.d0_tilde, td.d1_tilde, grid, opts);
        const std::array<double, 3> sups_tilde = {
            td.f_tilde.empty() ? 0.0 : sup_norm_field(td.f_tilde, grid.t_final, 201, 201),
            td.d0_tilde.empty() ? 0.0
                                : sup_norm_signal(td.d0_tilde, grid.t_final, n_time_samples),
            td.d1_tilde.empty() ? 0.0
                                : sup_norm_signal(td.d1_tilde, grid.t_final, n_time_samples)};
        const MaxEstimateBound m = max_estimate_bound(tspec, params, sups_tilde[0],
                                                      sups_tilde[1], sups_tilde[2]);
        result.checks.push_back(verify_max_estimate(v, m, tol_rel));

        const Trajectory w =
            simulate_w(tspec, params, spec.h, v, td.phi_tilde, grid, opts);
        const double dx = grid.dx(), dt = grid.dt();
        result.checks.push_back(
            verify_superposition(u, v, w, spec.a, spec.b, 100.0 * (dx * dx + dt)));

        result.passed = true;
        result.worst_margin = std::numeric_limits<double>::infinity();
        for (const auto& c : result.checks) {
            result.passed = result.passed && c.passed;
            result.worst_margin = std::min(result.worst_margin, c.worst_margin);
        }
        return result;
    } catch (const SolverFault& fault) {
        throw SolverFault(std::string(fault.what()) + " (trial " + std::to_string(trial) + ")");
    }
}

namespace {

int configured_thread_count() {
    const char* env = std::getenv("ISS_CERTIFY_THREADS");
    if (!env || !*env) return 0;
    const long v = std::strtol(env, nullptr, 10);
    return v > 0 ? static_cast<int>(v) : 0;
}

}  // namespace

SuiteReport run_scenario_suite(const ScenarioSuite& suite, const Grid& grid,
                               const SolverOptions& opts, double tol_rel) {
    const int n = suite.n_trials;
    std::vector<TrialResult> results(static_cast<std::size_t>(std::max(n, 0)));
    std::vector<std::exception_ptr> errors(results.size());

    auto work = [&](int i) {
        try {
            results[i] = run_trial(make_trial_spec(suite, i), i, grid, opts, tol_rel);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };

    const int nthreads = std::min(configured_thread_count(), n);
    if (nthreads <= 1) {
        for (int i = 0; i < n; ++i) work(i);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&] {
                for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) work(i);
            });
        for (auto& th : pool) th.join();
    }
    for (int i = 0; i < n; ++i)
        if (errors[i]) std::rethrow_exception(errors[i]);

    SuiteReport report;
    report.trials = std::move(results);
    report.aggregate.name = "scenario_suite";
    report.aggregate.tol_rel = tol_rel;
    report.aggregate.passed = true;
    report.aggregate.worst_margin = 0.0;
    bool first = true;
    for (const TrialResult& trial : report.trials) {
        report.aggregate.passed = report.aggregate.passed && trial.passed;
        for (const auto& c : trial.checks) {
            report.aggregate.n_points_checked += c.n_points_checked;
            if (first || c.worst_margin < report.aggregate.worst_margin) {
                report.aggregate.worst_margin = c.worst_margin;
                report.aggregate.worst_t = c.worst_t;
                report.aggregate.worst_x = c.worst_x;
                first = false;
            }
        }
    }
    return report;
}

}  // namespace isscert
