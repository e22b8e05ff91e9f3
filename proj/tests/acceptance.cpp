// End-to-end acceptance checks for the certificate pipeline. Each criterion
// prints one PASS/FAIL line; the exit code is 0 only when all of them hold.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "isscert/config.hpp"
#include "isscert/model.hpp"
#include "isscert/solver.hpp"
#include "isscert/transform.hpp"
#include "isscert/verify.hpp"

using namespace isscert;

namespace {

constexpr double kPi = 3.14159265358979323846;

int g_failures = 0;

void report(int index, const std::string& what, bool passed, double seconds) {
    std::printf("%s: %2d %s (%.2fs)\n", passed ? "PASS" : "FAIL", index,
                what.c_str(), seconds);
    if (!passed) ++g_failures;
}

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

double gain_set_deviation(const GainSet& lhs, const GainSet& rhs) {
    double dev = 0.0;
    auto acc = [&dev](double x, double y) {
        const double denom = std::max({std::fabs(x), std::fabs(y), 1e-12});
        dev = std::max(dev, std::fabs(x - y) / denom);
    };
    acc(lhs.beta_coeff, rhs.beta_coeff);
    acc(lhs.lambda, rhs.lambda);
    const KFunction* l[3] = {&lhs.gamma, &lhs.gamma0, &lhs.gamma1};
    const KFunction* r[3] = {&rhs.gamma, &rhs.gamma0, &rhs.gamma1};
    for (int i = 0; i < 3; ++i) {
        acc(l[i]->p, r[i]->p);
        acc(l[i]->q, r[i]->q);
        acc(l[i]->r, r[i]->r);
    }
    return dev;
}

void criterion_1_reaction_diffusion_gains() {
    Stopwatch clock;
    double worst = 0.0;
    int count = 0;
    for (double a : {0.5, 1.0, 2.0})
        for (double b : {-1.0, 0.0, 1.0, 2.0})
            for (double delta : {0.5, 1.5}) {
                const double K1 = std::fabs(b) / (2.0 * a) + delta;
                const Config cfg = preset_reaction_diffusion(a, b, 1.0, K1);
                const TransformedSpec tspec = transform_spec(cfg.spec);
                const SplitParams params = choose_split_params(tspec);
                const GainSet assembled = compute_gain_set(cfg.spec, tspec, params);
                const GainSet closed =
                    closed_form_gains_reaction_diffusion(a, b, 1.0, K1, params.eps);
                worst = std::max(worst, gain_set_deviation(assembled, closed));
                ++count;
            }
    char what[160];
    std::snprintf(what, sizeof(what),
                  "linear Robin gains match the closed form on %d tuples "
                  "(max deviation %.2e)",
                  count, worst);
    report(1, what, worst <= 1e-12, clock.seconds());
}

void criterion_2_ginzburg_landau_gains() {
    Stopwatch clock;
    const double tuples[10][5] = {
        {1.0, 1.0, 1.0, 1.0, 1.0},  {1.0, 2.0, 1.0, 1.0, 1.0},
        {2.0, 1.0, 1.0, 1.0, 1.0},  {1.0, 0.5, 2.0, 1.0, 1.0},
        {1.0, 1.0, 1.0, 2.0, 1.0},  {1.0, 1.0, 1.0, 1.0, 3.0},
        {0.5, 1.0, 1.0, 1.0, 1.0},  {2.0, 3.0, 1.0, 2.0, 2.0},
        {1.0, 0.0, 1.0, 1.0, 1.0},  {1.0, -0.25, 1.0, 1.0, 1.0}};
    double worst = 0.0;
    for (const auto& t : tuples) {
        const Config cfg = preset_ginzburg_landau(t[0], t[1], t[2], t[3], t[4]);
        const TransformedSpec tspec = transform_spec(cfg.spec);
        const SplitParams params = choose_split_params(tspec);
        const GainSet assembled = compute_gain_set(cfg.spec, tspec, params);
        const GainSet closed =
            closed_form_gains_ginzburg_landau(t[0], t[1], t[2], t[3], t[4], params);
        worst = std::max(worst, gain_set_deviation(assembled, closed));
    }
    char what[160];
    std::snprintf(what, sizeof(what),
                  "cubic-quintic gains match the closed form on 10 tuples "
                  "(max deviation %.2e)",
                  worst);
    report(2, what, worst <= 1e-12, clock.seconds());
}

void criterion_3_solver_oracle() {
    Stopwatch clock;
    ProblemSpec spec;
    spec.phi = InitialProfile::sine_mode(1.0, 1);

    const Grid fine{201, 2000, 0.1};
    const Trajectory u = simulate_full(spec, fine, {});
    const double norm = l2_norm_row(u.row(fine.nt), fine.nx, fine.dx());
    const double expected = std::exp(-kPi * kPi * 0.1) / std::sqrt(2.0);
    const bool norm_ok = std::fabs(norm - expected) <= 1e-3;

    const auto points =
        convergence_study(spec, {{51, 2000, 0.1}, {101, 2000, 0.1}, {201, 2000, 0.1}});
    double min_order = 1e300;
    for (std::size_t i = 1; i < points.size(); ++i)
        min_order = std::min(min_order, points[i].order.value_or(0.0));

    char what[160];
    std::snprintf(what, sizeof(what),
                  "heat eigenmode norm error %.2e, spatial order >= %.2f",
                  std::fabs(norm - expected), min_order);
    report(3, what, norm_ok && min_order >= 1.9, clock.seconds());
}

void criterion_4_max_estimate(const std::vector<Config>& presets) {
    Stopwatch clock;
    const Grid grid{201, 2000, 1.0};
    double worst = 1e300;
    bool passed = true;
    for (const Config& cfg : presets) {
        ScenarioSuite suite;
        suite.base_spec = cfg.spec;
        suite.n_trials = 50;
        suite.seed = 42;
        suite.families = default_families(cfg.spec);
        for (int trial = 0; trial < suite.n_trials; ++trial) {
            const ProblemSpec spec = make_trial_spec(suite, trial);
            const TransformedSpec tspec = transform_spec(spec);
            const SplitParams params = choose_split_params(tspec);
            const TildeData tilde = transform_data(spec);
            const Trajectory v = simulate_v(tspec, params, tilde.f_tilde,
                                            tilde.d0_tilde, tilde.d1_tilde, grid, {});
            const MaxEstimateBound bound = max_estimate_bound(
                tspec, params, sup_norm_field(tilde.f_tilde, grid.t_final, 201, 201),
                sup_norm_signal(tilde.d0_tilde, grid.t_final, 2001),
                sup_norm_signal(tilde.d1_tilde, grid.t_final, 2001));
            const VerificationReport check = verify_max_estimate(v, bound, 1e-2);
            worst = std::min(worst, check.worst_margin);
            passed = passed && check.passed;
        }
    }
    char what[160];
    std::snprintf(what, sizeof(what),
                  "sup-norm estimate holds on 100 randomized linear scenarios "
                  "(worst margin %.2e)",
                  worst);
    report(4, what, passed, clock.seconds());
}

SuiteReport criterion_5_iss_suites(const std::vector<Config>& presets) {
    Stopwatch clock;
    setenv("ISS_CERTIFY_THREADS", "4", 1);
    SuiteReport merged;
    merged.aggregate.passed = true;
    merged.aggregate.worst_margin = 1e300;
    for (const Config& cfg : presets) {
        ScenarioSuite suite;
        suite.base_spec = cfg.spec;
        suite.n_trials = 100;
        suite.seed = 42;
        suite.families = default_families(cfg.spec);
        const SuiteReport report =
            run_scenario_suite(suite, Grid{201, 4000, 1.0}, {}, 1e-2);
        merged.aggregate.passed = merged.aggregate.passed && report.aggregate.passed;
        merged.aggregate.worst_margin =
            std::min(merged.aggregate.worst_margin, report.aggregate.worst_margin);
        merged.trials.insert(merged.trials.end(), report.trials.begin(),
                             report.trials.end());
    }
    unsetenv("ISS_CERTIFY_THREADS");
    char what[160];
    std::snprintf(what, sizeof(what),
                  "certified bound holds on 200 randomized trials "
                  "(worst margin %.2e)",
                  merged.aggregate.worst_margin);
    report(5, what, merged.aggregate.passed, clock.seconds());
    return merged;
}

void criterion_6_zero_disturbance_decay(const std::vector<Config>& presets) {
    Stopwatch clock;
    const Grid grid{201, 2000, 1.0};
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> mode(1, 4);
    bool passed = true;
    double worst = 1e300;
    for (const Config& cfg : presets) {
        const double amp_cap = cfg.spec.h.is_zero() ? 1.0 : 0.5;
        std::uniform_real_distribution<double> log_amp(std::log(1e-2),
                                                       std::log(amp_cap));
        for (int i = 0; i < 20; ++i) {
            ProblemSpec spec = cfg.spec;
            spec.f = Field();
            spec.d0 = Signal();
            spec.d1 = Signal();
            spec.phi = InitialProfile::sine_mode(std::exp(log_amp(rng)), mode(rng));

            const TransformedSpec tspec = transform_spec(spec);
            const SplitParams params = choose_split_params(tspec);
            const GainSet gains = compute_gain_set(spec, tspec, params);
            const Trajectory u = simulate_full(spec, grid, {});
            const double phi_l2 = l2_norm_row(u.row(0), grid.nx, grid.dx());
            for (const auto& [t, norm] : l2_profile(u)) {
                const double bound =
                    gains.beta_coeff * phi_l2 * std::exp(-gains.lambda * t);
                worst = std::min(worst, bound - norm * (1.0 - 1e-2));
                if (norm > bound * (1.0 + 1e-2)) passed = false;
            }
        }
    }
    char what[160];
    std::snprintf(what, sizeof(what),
                  "undisturbed solutions stay under the exponential envelope "
                  "(40 profiles)");
    report(6, what, passed, clock.seconds());
}

void criterion_7_split_identity(const SuiteReport& suites) {
    Stopwatch clock;
    bool passed = !suites.trials.empty();
    long n_checked = 0;
    for (const TrialResult& trial : suites.trials)
        for (const VerificationReport& check : trial.checks)
            if (check.name == "split_identity") {
                ++n_checked;
                passed = passed && check.passed;
            }
    passed = passed && n_checked == static_cast<long>(suites.trials.size());
    char what[160];
    std::snprintf(what, sizeof(what),
                  "superposition identity holds on all %ld suite trials", n_checked);
    report(7, what, passed, clock.seconds());
}

void criterion_8_trace_inequality() {
    Stopwatch clock;
    const int n = 401;
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_real_distribution<double> pt(0.0, 1.0);
    bool passed = true;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> values(n, 0.0);
        for (int k = 1; k <= 5; ++k) {
            const double s = coef(rng), c = coef(rng);
            for (int j = 0; j < n; ++j) {
                const double x = j / (n - 1.0);
                values[j] += s * std::sin(k * kPi * x) + c * std::cos(k * kPi * x);
            }
        }
        passed = passed && agmon_check(values, 0.0, 1.0, pt(rng));
    }
    report(8, "trace inequality holds on 1000 random trigonometric polynomials",
           passed, clock.seconds());
}

void criterion_9_horizon_independence() {
    Stopwatch clock;
    const Config cfg = preset_reaction_diffusion(1.0, 1.0, 1.0, 2.0);
    const TransformedSpec tspec = transform_spec(cfg.spec);
    const SplitParams params = choose_split_params(tspec);

    FieldTerm constant;
    constant.space.kind = SpaceFactor::Kind::polynomial;
    constant.space.coeffs = {0.7};
    constant.time = {SignalTerm::Kind::constant, 1.0};
    Field f;
    f.add_term(constant);
    const Signal d0 = Signal::constant(2.0);
    const Signal d1 = Signal::decaying_exp(0.5, 3.0);

    bool passed = true;
    for (double T : {0.5, 1.0, 4.0}) {
        const MaxEstimateBound at_T = max_estimate_bound(
            tspec, params, sup_norm_field(f, T, 101, 101),
            sup_norm_signal(d0, T, 1001), sup_norm_signal(d1, T, 1001));
        const MaxEstimateBound at_2T = max_estimate_bound(
            tspec, params, sup_norm_field(f, 2.0 * T, 101, 101),
            sup_norm_signal(d0, 2.0 * T, 1001), sup_norm_signal(d1, 2.0 * T, 1001));
        passed = passed && at_T.value == at_2T.value;
    }
    report(9, "sup-norm bound is bit-identical for horizons T and 2T", passed,
           clock.seconds());
}

void criterion_10_determinism() {
    Stopwatch clock;
    ScenarioSuite suite;
    suite.base_spec = preset_reaction_diffusion(1.0, 0.0, 1.0, 1.0).spec;
    suite.n_trials = 10;
    suite.seed = 42;
    suite.families = default_families(suite.base_spec);
    const Grid grid{101, 1000, 1.0};

    setenv("ISS_CERTIFY_THREADS", "0", 1);
    const std::string serial = suite_report_json(run_scenario_suite(suite, grid, {}, 1e-2)).dump();
    setenv("ISS_CERTIFY_THREADS", "4", 1);
    const std::string threaded = suite_report_json(run_scenario_suite(suite, grid, {}, 1e-2)).dump();
    const std::string repeated = suite_report_json(run_scenario_suite(suite, grid, {}, 1e-2)).dump();
    unsetenv("ISS_CERTIFY_THREADS");

    const bool passed = serial == threaded && threaded == repeated;
    report(10, "suite reports are byte-identical across thread counts and reruns",
           passed, clock.seconds());
}

}  // namespace

int main() {
    const std::vector<Config> presets = {
        preset_reaction_diffusion(1.0, 0.0, 1.0, 1.0),
        preset_ginzburg_landau(1.0, 1.0, 1.0, 1.0, 1.0)};

    criterion_1_reaction_diffusion_gains();
    criterion_2_ginzburg_landau_gains();
    criterion_3_solver_oracle();
    criterion_4_max_estimate(presets);
    const SuiteReport suites = criterion_5_iss_suites(presets);
    criterion_6_zero_disturbance_decay(presets);
    criterion_7_split_identity(suites);
    criterion_8_trace_inequality();
    criterion_9_horizon_independence();
    criterion_10_determinism();

    if (g_failures > 0) {
        std::printf("%d of 10 criteria failed\n", g_failures);
        return 1;
    }
    std::printf("all 10 criteria passed\n");
    return 0;
}
