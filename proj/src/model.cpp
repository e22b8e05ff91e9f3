#include "isscert/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace isscert {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

double poly_eval(const std::vector<double>& coeffs, double x) {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double poly_deriv_eval(const std::vector<double>& coeffs, double x) {
    double acc = 0.0;
    for (std::size_t n = coeffs.size(); n-- > 1;) acc = acc * x + coeffs[n] * static_cast<double>(n);
    return acc;
}

}  // namespace

Nonlinearity Nonlinearity::zero() { return Nonlinearity(); }

Nonlinearity Nonlinearity::polynomial_odd(std::vector<double> coeffs) {
    Nonlinearity h;
    h.kind_ = NonlinearityKind::polynomial_odd;
    h.coeffs_ = std::move(coeffs);
    return h;
}

Nonlinearity Nonlinearity::cubic_quintic(double c2, double c3) {
    if (!(c2 > 0.0) || !(c3 > 0.0))
        throw std::invalid_argument("cubic_quintic requires c2 > 0 and c3 > 0");
    Nonlinearity h;
    h.kind_ = NonlinearityKind::cubic_quintic;
    h.c2_ = c2;
    h.c3_ = c3;
    return h;
}

double Nonlinearity::value(double s) const {
    switch (kind_) {
        case NonlinearityKind::zero:
            return 0.0;
        case NonlinearityKind::polynomial_odd: {
            // h(s) = sum_i mu_i s^{2i+1} = s * P(s^2)
            return s * poly_eval(coeffs_, s * s);
        }
        case NonlinearityKind::cubic_quintic: {
            const double s2 = s * s;
            return s * s2 * (c2_ + c3_ * s2);
        }
    }
    return 0.0;
}

double Nonlinearity::derivative(double s) const {
    switch (kind_) {
        case NonlinearityKind::zero:
            return 0.0;
        case NonlinearityKind::polynomial_odd: {
            // h'(s) = sum_i (2i+1) mu_i s^{2i}
            double acc = 0.0;
            for (std::size_t i = coeffs_.size(); i-- > 0;)
                acc = acc * (s * s) + coeffs_[i] * static_cast<double>(2 * i + 1);
            return acc;
        }
        case NonlinearityKind::cubic_quintic: {
            const double s2 = s * s;
            return 3.0 * c2_ * s2 + 5.0 * c3_ * s2 * s2;
        }
    }
    return 0.0;
}

Signal Signal::constant(double amplitude) {
    Signal s;
    s.add_term({SignalTerm::Kind::constant, amplitude});
    return s;
}

Signal Signal::sinusoid(double amplitude, double omega, double phase) {
    Signal s;
    s.add_term({SignalTerm::Kind::sinusoid, amplitude, omega, phase});
    return s;
}

Signal Signal::decaying_exp(double amplitude, double rate) {
    SignalTerm t;
    t.kind = SignalTerm::Kind::decaying_exp;
    t.amplitude = amplitude;
    t.rate = rate;
    Signal s;
    s.add_term(t);
    return s;
}

Signal& Signal::add_term(SignalTerm term) {
    terms_.push_back(term);
    return *this;
}

double Signal::value(double t) const {
    double acc = 0.0;
    for (const auto& term : terms_) {
        switch (term.kind) {
            case SignalTerm::Kind::constant:
                acc += term.amplitude;
                break;
            case SignalTerm::Kind::sinusoid:
                acc += term.amplitude * std::sin(term.omega * t + term.phase);
                break;
            case SignalTerm::Kind::decaying_exp:
                acc += term.amplitude * std::exp(-term.rate * t);
                break;
        }
    }
    return acc;
}

double Signal::derivative(double t) const {
    double acc = 0.0;
    for (const auto& term : terms_) {
        switch (term.kind) {
            case SignalTerm::Kind::constant:
                break;
            case SignalTerm::Kind::sinusoid:
                acc += term.amplitude * term.omega * std::cos(term.omega * t + term.phase);
                break;
            case SignalTerm::Kind::decaying_exp:
                acc -= term.amplitude * term.rate * std::exp(-term.rate * t);
                break;
        }
    }
    return acc;
}

Signal Signal::scaled(double factor) const {
    Signal out = *this;
    for (auto& term : out.terms_) term.amplitude *= factor;
    return out;
}

namespace {

double space_value(const SpaceFactor& sf, double x) {
    if (sf.kind == SpaceFactor::Kind::polynomial) return poly_eval(sf.coeffs, x);
    return sf.amplitude * std::sin(sf.mode * kPi * x);
}

double signal_term_value(const SignalTerm& term, double t) {
    switch (term.kind) {
        case SignalTerm::Kind::constant:
            return term.amplitude;
        case SignalTerm::Kind::sinusoid:
            return term.amplitude * std::sin(term.omega * t + term.phase);
        case SignalTerm::Kind::decaying_exp:
            return term.amplitude * std::exp(-term.rate * t);
    }
    return 0.0;
}

}  // namespace

Field& Field::add_term(FieldTerm term) {
    terms_.push_back(std::move(term));
    return *this;
}

double Field::value(double x, double t) const {
    double acc = 0.0;
    for (const auto& term : terms_) acc += space_value(term.space, x) * signal_term_value(term.time, t);
    if (exp_weight_ != 0.0) acc *= std::exp(exp_weight_ * x);
    return acc;
}

Field Field::exp_weighted(double w) const {
    Field out = *this;
    out.exp_weight_ += w;
    return out;
}

InitialProfile InitialProfile::polynomial(std::vector<double> coeffs) {
    ProfileTerm t;
    t.kind = ProfileTerm::Kind::polynomial;
    t.coeffs = std::move(coeffs);
    InitialProfile p;
    p.add_term(std::move(t));
    return p;
}

InitialProfile InitialProfile::sine_mode(double amplitude, int mode) {
    ProfileTerm t;
    t.kind = ProfileTerm::Kind::sine_mode;
    t.amplitude = amplitude;
    t.mode = mode;
    InitialProfile p;
    p.add_term(std::move(t));
    return p;
}

InitialProfile& InitialProfile::add_term(ProfileTerm term) {
    terms_.push_back(std::move(term));
    return *this;
}

double InitialProfile::value(double x) const {
    double acc = 0.0;
    for (const auto& term : terms_) {
        if (term.kind == ProfileTerm::Kind::polynomial)
            acc += poly_eval(term.coeffs, x);
        else
            acc += term.amplitude * std::sin(term.mode * kPi * x);
    }
    if (exp_weight_ != 0.0) acc *= std::exp(exp_weight_ * x);
    return acc;
}

double InitialProfile::derivative(double x) const {
    double sum = 0.0, dsum = 0.0;
    for (const auto& term : terms_) {
        if (term.kind == ProfileTerm::Kind::polynomial) {
            sum += poly_eval(term.coeffs, x);
            dsum += poly_deriv_eval(term.coeffs, x);
        } else {
            sum += term.amplitude * std::sin(term.mode * kPi * x);
            dsum += term.amplitude * term.mode * kPi * std::cos(term.mode * kPi * x);
        }
    }
    if (exp_weight_ == 0.0) return dsum;
    return std::exp(exp_weight_ * x) * (exp_weight_ * sum + dsum);
}

InitialProfile InitialProfile::exp_weighted(double w) const {
    InitialProfile out = *this;
    out.exp_weight_ += w;
    return out;
}

void ValidationReport::add(CheckEntry entry) {
    passed = passed && entry.passed;
    checks.push_back(std::move(entry));
}

ValidationReport validate_structure(const ProblemSpec& spec) {
    ValidationReport report;

    report.add({"a_positive", spec.a > 0.0, "a = " + fmt(spec.a)});

    const double c_tilde = spec.b * spec.b / (4.0 * spec.a) + spec.c;
    report.add({"c_tilde_positive", c_tilde > 0.0, "b^2/4a + c = " + fmt(c_tilde)});

    const double alpha[2] = {spec.alpha0, spec.alpha1};
    const double beta[2] = {spec.beta0, spec.beta1};
    const double half = spec.b / (2.0 * spec.a);
    const double alpha_tilde[2] = {spec.alpha0 - half * spec.beta0,
                                   spec.alpha1 + half * spec.beta1};

    for (int i = 0; i < 2; ++i) {
        const std::string side = std::to_string(i);
        report.add({"boundary" + side + "_nonneg", alpha[i] >= 0.0 && beta[i] >= 0.0,
                    "alpha = " + fmt(alpha[i]) + ", beta = " + fmt(beta[i])});
        report.add({"boundary" + side + "_nondegenerate", alpha[i] + beta[i] > 0.0,
                    "alpha + beta = " + fmt(alpha[i] + beta[i])});

        // Sign conditions trigger only for Robin sides with alpha_tilde <= 0.
        if (beta[i] > 0.0 && alpha_tilde[i] <= 0.0) {
            const double ratio = alpha_tilde[i] / beta[i];
            report.add({"boundary" + side + "_tilde_reaction", -4.0 * ratio < c_tilde,
                        "-4*alpha_tilde/beta = " + fmt(-4.0 * ratio) +
                            " vs c_tilde = " + fmt(c_tilde)});
            report.add({"boundary" + side + "_tilde_diffusion", -ratio <= spec.a,
                        "-alpha_tilde/beta = " + fmt(-ratio) + " vs a = " + fmt(spec.a)});
        }
    }

    return report;
}

ValidationReport check_nonlinearity(const Nonlinearity& h, double c_tilde,
                                    double s_max, int n_samples) {
    if (!(s_max > 0.0) || n_samples < 3)
        throw std::invalid_argument("check_nonlinearity requires s_max > 0 and n_samples >= 3");

    ValidationReport report;
    report.add({"h_zero_at_origin", h.value(0.0) == 0.0, "h(0) = " + fmt(h.value(0.0))});

    // Analytic branch for the built-in kinds; conclusive for all s.
    if (h.kind() == NonlinearityKind::zero) {
        report.add({"analytic", true, "h identically zero"});
        return report;
    }
    if (h.kind() == NonlinearityKind::polynomial_odd) {
        bool nonneg = true;
        for (double mu : h.coeffs()) nonneg = nonneg && mu >= 0.0;
        report.add({"analytic", nonneg,
                    nonneg ? "all odd-polynomial coefficients nonnegative"
                           : "negative odd-polynomial coefficient"});
        if (nonneg) return report;  // sampling below only documents the failure otherwise
    }
    if (h.kind() == NonlinearityKind::cubic_quintic) {
        const bool ok = h.c2() > 0.0 && h.c3() > 0.0;
        report.add({"analytic", ok, "c2 = " + fmt(h.c2()) + ", c3 = " + fmt(h.c3())});
        if (ok) return report;
    }

    constexpr double tol = 1e-12;
    CheckEntry symm{"h_abs_symmetry", true, ""};
    CheckEntry neg{"c_tilde_plus_2hprime", true, ""};
    CheckEntry pos{"hprime_nonneg", true, ""};
    for (int k = 0; k < n_samples; ++k) {
        const double s = -s_max + 2.0 * s_max * k / (n_samples - 1);
        const double sym = h.value(std::fabs(s)) + h.value(s);
        if (sym < -tol && sym < (symm.worst_residual ? *symm.worst_residual : 0.0)) {
            symm.passed = false;
            symm.worst_location = s;
            symm.worst_residual = sym;
        }
        const double dh = h.derivative(s);
        if (s <= 0.0) {
            const double r = c_tilde + 2.0 * dh;
            if (r < -tol && r < (neg.worst_residual ? *neg.worst_residual : 0.0)) {
                neg.passed = false;
                neg.worst_location = s;
                neg.worst_residual = r;
            }
        } else if (dh < -tol && dh < (pos.worst_residual ? *pos.worst_residual : 0.0)) {
            pos.passed = false;
            pos.worst_location = s;
            pos.worst_residual = dh;
        }
    }
    for (auto* e : {&symm, &neg, &pos}) {
        if (!e->passed)
            e->detail = "worst residual " + fmt(*e->worst_residual) + " at s = " + fmt(*e->worst_location);
        report.add(*e);
    }
    return report;
}

ValidationReport check_compatibility(const ProblemSpec& spec, int t_samples,
                                     double t_max) {
    if (t_samples < 2)
        throw std::invalid_argument("check_compatibility requires t_samples >= 2");

    ValidationReport report;
    const Signal* d[2] = {&spec.d0, &spec.d1};
    const double alpha[2] = {spec.alpha0, spec.alpha1};
    const double beta[2] = {spec.beta0, spec.beta1};

    for (int i = 0; i < 2; ++i) {
        const std::string side = std::to_string(i);
        if (beta[i] == 0.0) {
            // d_i'(t) + c d_i(t) + alpha_i h(d_i/alpha_i) = alpha_i f(i,t) on (0, t_max].
            CheckEntry e{"dirichlet" + side + "_trace_ode", true, ""};
            double worst = 0.0, worst_t = 0.0;
            for (int k = 1; k <= t_samples; ++k) {
                const double t = t_max * k / t_samples;
                const double di = d[i]->value(t);
                const double res = d[i]->derivative(t) + spec.c * di +
                                   alpha[i] * spec.h.value(di / alpha[i]) -
                                   alpha[i] * spec.f.value(static_cast<double>(i), t);
                if (std::fabs(res) > std::fabs(worst)) {
                    worst = res;
                    worst_t = t;
                }
            }
            e.passed = std::fabs(worst) <= 1e-8;
            e.worst_residual = worst;
            e.worst_location = worst_t;
            e.detail = "worst residual " + fmt(worst) + " at t = " + fmt(worst_t);
            report.add(e);
        } else {
            const double sign = (i == 0) ? -1.0 : 1.0;  // -(-1)^i
            const double xi = static_cast<double>(i);
            const double trace = alpha[i] * spec.phi.value(xi) +
                                 sign * beta[i] * spec.phi.derivative(xi);
            report.add({"robin" + side + "_initial_trace", std::fabs(trace) <= 1e-10,
                        "alpha*phi(i) -(-1)^i beta*phi_x(i) = " + fmt(trace),
                        xi, trace});
            const double d0v = d[i]->value(0.0);
            report.add({"robin" + side + "_data_zero_start", std::fabs(d0v) <= 1e-10,
                        "d(0) = " + fmt(d0v), 0.0, d0v});
        }
    }
    return report;
}

}  // namespace isscert
