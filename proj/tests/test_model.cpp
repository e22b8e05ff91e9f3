#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "isscert/model.hpp"

using namespace isscert;

namespace {

constexpr double kPi = 3.14159265358979323846;

bool has_check(const ValidationReport& report, const std::string& name, bool passed) {
    for (const auto& entry : report.checks)
        if (entry.name == name) return entry.passed == passed;
    return false;
}

}  // namespace

TEST_CASE("nonlinearity evaluation") {
    const Nonlinearity z = Nonlinearity::zero();
    CHECK(z.value(3.7) == 0.0);
    CHECK(z.derivative(-1.2) == 0.0);

    const Nonlinearity cubic = Nonlinearity::polynomial_odd({0.0, 1.0});  // s^3
    CHECK(cubic.value(0.0) == 0.0);
    CHECK(cubic.value(2.0) == doctest::Approx(8.0));
    CHECK(cubic.value(-2.0) == doctest::Approx(-8.0));
    CHECK(cubic.derivative(2.0) == doctest::Approx(12.0));

    const Nonlinearity cq = Nonlinearity::cubic_quintic(2.0, 3.0);
    CHECK(cq.value(0.0) == 0.0);
    CHECK(cq.value(1.5) == doctest::Approx(2.0 * std::pow(1.5, 3) + 3.0 * std::pow(1.5, 5)));
    CHECK(cq.derivative(1.5) ==
          doctest::Approx(6.0 * 1.5 * 1.5 + 15.0 * std::pow(1.5, 4)));
    CHECK_THROWS_AS(Nonlinearity::cubic_quintic(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("signal values, derivatives and scaling") {
    Signal s = Signal::constant(1.5);
    s.add_term({SignalTerm::Kind::sinusoid, 2.0, 3.0, 0.5});
    SignalTerm de;
    de.kind = SignalTerm::Kind::decaying_exp;
    de.amplitude = 0.7;
    de.rate = 1.3;
    s.add_term(de);

    CHECK(s.value(0.0) == doctest::Approx(1.5 + 2.0 * std::sin(0.5) + 0.7));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> tdist(0.0, 5.0);
    const double delta = 1e-5;
    for (int i = 0; i < 1000; ++i) {
        const double t = tdist(rng);
        const double fd = (s.value(t + delta) - s.value(t - delta)) / (2.0 * delta);
        CHECK(std::fabs(fd - s.derivative(t)) <= 1e-6);
    }

    const Signal doubled = s.scaled(2.0);
    CHECK(doubled.value(1.1) == doctest::Approx(2.0 * s.value(1.1)));
    CHECK(doubled.derivative(1.1) == doctest::Approx(2.0 * s.derivative(1.1)));
}

TEST_CASE("field evaluation is separable and supports exponential weights") {
    FieldTerm term;
    term.space.kind = SpaceFactor::Kind::sine_mode;
    term.space.amplitude = 2.0;
    term.space.mode = 3;
    term.time = {SignalTerm::Kind::sinusoid, 1.0, 4.0, 0.0};
    Field f;
    f.add_term(term);

    const double x = 0.3, t = 0.9;
    CHECK(f.value(x, t) ==
          doctest::Approx(2.0 * std::sin(3.0 * kPi * x) * std::sin(4.0 * t)));

    const Field g = f.exp_weighted(-0.5);
    CHECK(g.value(x, t) == doctest::Approx(std::exp(-0.5 * x) * f.value(x, t)));
    CHECK(std::isfinite(g.value(1.0, 100.0)));

    FieldTerm poly;
    poly.space.kind = SpaceFactor::Kind::polynomial;
    poly.space.coeffs = {1.0, 0.0, -1.0};  // 1 - x^2
    poly.time = {SignalTerm::Kind::constant, 3.0};
    Field p;
    p.add_term(poly);
    CHECK(p.value(0.5, 7.0) == doctest::Approx(3.0 * 0.75));
}

TEST_CASE("initial profile derivative consistency") {
    InitialProfile phi = InitialProfile::polynomial({0.0, 1.0, -2.0, 0.5});
    ProfileTerm sine;
    sine.kind = ProfileTerm::Kind::sine_mode;
    sine.amplitude = 1.7;
    sine.mode = 2;
    phi.add_term(sine);
    phi.set_exp_weight(0.4);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> xdist(0.01, 0.99);
    const double delta = 1e-5;
    for (int i = 0; i < 1000; ++i) {
        const double x = xdist(rng);
        const double fd = (phi.value(x + delta) - phi.value(x - delta)) / (2.0 * delta);
        CHECK(std::fabs(fd - phi.derivative(x)) <= 1e-6);
    }

    const InitialProfile unweighted = InitialProfile::sine_mode(1.0, 1);
    CHECK(unweighted.value(0.5) == doctest::Approx(1.0));
    CHECK(unweighted.derivative(0.5) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("validate_structure") {
    ProblemSpec spec;
    spec.a = 1.0;
    spec.b = 0.0;
    spec.c = 1.0;
    spec.alpha0 = 1.0;
    spec.beta0 = 0.0;
    spec.alpha1 = 1.0;
    spec.beta1 = 1.0;
    CHECK(validate_structure(spec).passed);

    SUBCASE("positive advection keeps the right boundary admissible") {
        spec.b = 2.0;
        spec.alpha1 = 0.0;
        spec.beta1 = 1.0;  // alpha1_tilde = 1 > 0
        CHECK(validate_structure(spec).passed);
    }

    SUBCASE("strong negative advection breaks the sign condition") {
        spec.b = -4.0;
        spec.alpha1 = 0.0;
        spec.beta1 = 1.0;  // alpha1_tilde = -2, -4*(-2) = 8 >= c_tilde = 5
        const auto report = validate_structure(spec);
        CHECK_FALSE(report.passed);
        CHECK(has_check(report, "boundary1_tilde_reaction", false));
    }

    SUBCASE("nonpositive c_tilde is rejected") {
        spec.c = -1.0;
        const auto report = validate_structure(spec);
        CHECK(has_check(report, "c_tilde_positive", false));
    }

    SUBCASE("pure Dirichlet never triggers the tilde sign conditions") {
        spec.beta0 = spec.beta1 = 0.0;
        spec.alpha1 = 1.0;
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> bdist(-3.0, 3.0);
        for (int i = 0; i < 50; ++i) {
            spec.b = bdist(rng);
            spec.c = 3.0;  // keeps c_tilde positive for |b| <= 3
            for (const auto& entry : validate_structure(spec).checks) {
                CHECK(entry.name.find("tilde_reaction") == std::string::npos);
                CHECK(entry.name.find("tilde_diffusion") == std::string::npos);
            }
        }
    }
}

TEST_CASE("check_nonlinearity") {
    const auto cubic = Nonlinearity::polynomial_odd({0.0, 1.0});
    CHECK(check_nonlinearity(cubic, 1.0, 10.0, 101).passed);

    CHECK(check_nonlinearity(Nonlinearity::cubic_quintic(1.0, 1.0), 1.0, 10.0, 101).passed);

    const auto negated = Nonlinearity::polynomial_odd({0.0, -1.0});  // -s^3
    const auto report = check_nonlinearity(negated, 1.0, 10.0, 101);
    CHECK_FALSE(report.passed);

    SUBCASE("analytic branch is sample-independent") {
        for (double s_max : {0.1, 1.0, 1000.0})
            for (double c_tilde : {1e-6, 1.0, 50.0})
                CHECK(check_nonlinearity(cubic, c_tilde, s_max, 3).passed);
    }

    CHECK_THROWS_AS(check_nonlinearity(cubic, 1.0, -1.0, 101), std::invalid_argument);
}

TEST_CASE("check_compatibility") {
    ProblemSpec spec;
    spec.c = 1.0;
    spec.alpha0 = 1.0;
    spec.beta0 = 0.0;
    spec.alpha1 = 1.0;
    spec.beta1 = 1.0;

    SUBCASE("decaying Dirichlet data matches the trace equation") {
        spec.d0 = Signal::decaying_exp(1.0, 1.0);  // d0' + d0 = 0
        spec.phi = InitialProfile::polynomial({0.0, 0.0, 1.0, -2.0, 1.0});
        CHECK(check_compatibility(spec, 32, 1.0).passed);
    }

    SUBCASE("sine mode violates the Robin initial trace") {
        spec.alpha1 = 0.0;
        spec.phi = InitialProfile::sine_mode(1.0, 1);  // phi_x(1) = -pi
        const auto report = check_compatibility(spec, 16, 1.0);
        CHECK(has_check(report, "robin1_initial_trace", false));
    }

    SUBCASE("all-Robin with zero profile and zero-phase sinusoids") {
        spec.beta0 = 1.0;
        spec.d0 = Signal::sinusoid(2.0, 3.0);
        spec.d1 = Signal::sinusoid(1.0, 5.0);
        CHECK(check_compatibility(spec, 16, 1.0).passed);
    }

    SUBCASE("nonzero d(0) on a Robin side fails") {
        spec.beta0 = 1.0;
        spec.d0 = Signal::constant(0.5);
        const auto report = check_compatibility(spec, 16, 1.0);
        CHECK(has_check(report, "robin0_data_zero_start", false));
    }
}
