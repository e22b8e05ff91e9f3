#pragma once

#include <optional>
#include <string>
#include <vector>

namespace isscert {

enum class NonlinearityKind { zero, polynomial_odd, cubic_quintic };

/// Scalar nonlinearity h with h(0) = 0 and an exact analytic derivative.
/// polynomial_odd: h(s) = sum_i mu_i s^{2i+1}; cubic_quintic: h(s) = c2 s^3 + c3 s^5.
class Nonlinearity {
public:
    Nonlinearity() : kind_(NonlinearityKind::zero) {}

    static Nonlinearity zero();
    static Nonlinearity polynomial_odd(std::vector<double> coeffs);
    static Nonlinearity cubic_quintic(double c2, double c3);

    double value(double s) const;
    double derivative(double s) const;

    NonlinearityKind kind() const { return kind_; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    double c2() const { return c2_; }
    double c3() const { return c3_; }
    bool is_zero() const { return kind_ == NonlinearityKind::zero; }

private:
    NonlinearityKind kind_;
    std::vector<double> coeffs_;   // polynomial_odd
    double c2_ = 0.0, c3_ = 0.0;   // cubic_quintic
};

struct SignalTerm {
    enum class Kind { constant, sinusoid, decaying_exp } kind;
    double amplitude = 0.0;
    double omega = 0.0;  // sinusoid
    double phase = 0.0;  // sinusoid
    double rate = 0.0;   // decaying_exp
};

/// Scalar time signal d(t) built from constant, sinusoid and decaying
/// exponential terms, with an exact derivative.
class Signal {
public:
    Signal() = default;

    static Signal constant(double amplitude);
    static Signal sinusoid(double amplitude, double omega, double phase = 0.0);
    static Signal decaying_exp(double amplitude, double rate);

    Signal& add_term(SignalTerm term);

    double value(double t) const;
    double derivative(double t) const;

    /// Same signal with every amplitude multiplied by `factor`.
    Signal scaled(double factor) const;

    const std::vector<SignalTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

private:
    std::vector<SignalTerm> terms_;
};

struct SpaceFactor {
    enum class Kind { polynomial, sine_mode } kind;
    std::vector<double> coeffs;  // polynomial
    double amplitude = 0.0;      // sine_mode: A sin(k pi x)
    int mode = 1;
};

struct FieldTerm {
    SpaceFactor space;
    SignalTerm time;
};

/// Separable space-time field f(x,t) = e^{w x} * sum_k X_k(x) T_k(t).
/// The exponential weight w expresses transformed fields e^{-bx/2a} f.
class Field {
public:
    Field() = default;

    Field& add_term(FieldTerm term);
    Field& set_exp_weight(double w) { exp_weight_ = w; return *this; }

    double value(double x, double t) const;

    double exp_weight() const { return exp_weight_; }
    const std::vector<FieldTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    /// This field multiplied by e^{w x} (weights add).
    Field exp_weighted(double w) const;

private:
    std::vector<FieldTerm> terms_;
    double exp_weight_ = 0.0;
};

struct ProfileTerm {
    enum class Kind { polynomial, sine_mode } kind;
    std::vector<double> coeffs;  // polynomial
    double amplitude = 0.0;      // sine_mode: A sin(k pi x)
    int mode = 1;
};

/// Initial profile phi(x) = e^{w x} * sum_k term_k(x), with exact derivative.
class InitialProfile {
public:
    InitialProfile() = default;

    static InitialProfile polynomial(std::vector<double> coeffs);
    static InitialProfile sine_mode(double amplitude, int mode);

    InitialProfile& add_term(ProfileTerm term);
    InitialProfile& set_exp_weight(double w) { exp_weight_ = w; return *this; }

    double value(double x) const;
    double derivative(double x) const;

    double exp_weight() const { return exp_weight_; }
    const std::vector<ProfileTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    InitialProfile exp_weighted(double w) const;

private:
    std::vector<ProfileTerm> terms_;
    double exp_weight_ = 0.0;
};

/// Problem description: u_t - a u_xx + b u_x + c u + h(u) = f on (0,1),
/// alpha0 u(0) - beta0 u_x(0) = d0, alpha1 u(1) + beta1 u_x(1) = d1,
/// u(x,0) = phi(x).
struct ProblemSpec {
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;
    double alpha0 = 1.0, beta0 = 0.0;
    double alpha1 = 1.0, beta1 = 0.0;
    Nonlinearity h;
    Field f;
    Signal d0, d1;
    InitialProfile phi;
};

struct CheckEntry {
    std::string name;
    bool passed = true;
    std::string detail;
    std::optional<double> worst_location;
    std::optional<double> worst_residual;
};

struct ValidationReport {
    bool passed = true;
    std::vector<CheckEntry> checks;

    void add(CheckEntry entry);
};

/// Structural admissibility: a > 0, b^2/4a + c > 0, alpha_i + beta_i > 0,
/// and the tilde-coordinate sign conditions on boundaries with
/// beta_i > 0, alpha_i_tilde <= 0. Failures land in the report, not faults.
ValidationReport validate_structure(const ProblemSpec& spec);

/// Nonlinearity admissibility for a given c_tilde = b^2/4a + c. Conclusive
/// analytic check for the built-in kinds, dense sampling otherwise.
ValidationReport check_nonlinearity(const Nonlinearity& h, double c_tilde,
                                    double s_max, int n_samples);

/// Compatibility of boundary data with the reaction term (Dirichlet sides)
/// and of the initial profile with the boundary operator (Robin sides).
ValidationReport check_compatibility(const ProblemSpec& spec, int t_samples,
                                     double t_max);

}  // namespace isscert
