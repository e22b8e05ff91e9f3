#include "isscert/transform.hpp"

#include <cmath>
#include <stdexcept>

namespace isscert {

namespace {

double exp_half(double a, double b) { return std::exp(std::fabs(b) / (2.0 * a)); }

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

TransformedSpec transform_spec(const ProblemSpec& spec) {
    require(spec.a > 0.0, "transform_spec: a must be positive");
    TransformedSpec t;
    t.a = spec.a;
    t.b = spec.b;
    t.c_tilde = spec.b * spec.b / (4.0 * spec.a) + spec.c;
    require(t.c_tilde > 0.0, "transform_spec: b^2/4a + c must be positive");
    const double half = spec.b / (2.0 * spec.a);
    t.alpha0_tilde = spec.alpha0 - half * spec.beta0;
    t.alpha1_tilde = spec.alpha1 + half * spec.beta1;
    t.beta0_tilde = spec.beta0;
    t.beta1_tilde = spec.beta1;
    return t;
}

SplitParams choose_split_params(const TransformedSpec& tspec,
                                const SplitOverrides& overrides) {
    const double at[2] = {tspec.alpha0_tilde, tspec.alpha1_tilde};
    const double bt[2] = {tspec.beta0_tilde, tspec.beta1_tilde};

    SplitParams p;

    // k_i = 0 when alpha_tilde > 0 or beta_tilde = 0, else normalize
    // alpha_tilde + k_i = 1.
    double k[2];
    for (int i = 0; i < 2; ++i)
        k[i] = (at[i] > 0.0 || bt[i] == 0.0) ? 0.0 : 1.0 - at[i];
    if (overrides.k0) k[0] = *overrides.k0;
    if (overrides.k1) k[1] = *overrides.k1;

    // eps takes half the feasibility margin left by the structural conditions.
    double gmax = 0.0;
    for (int i = 0; i < 2; ++i)
        if (bt[i] > 0.0) gmax = std::max(gmax, -at[i] / bt[i]);
    double eps = 0.5 * (tspec.c_tilde / 2.0 - 2.0 * gmax);
    if (overrides.eps) eps = *overrides.eps;

    double epsi[2];
    for (int i = 0; i < 2; ++i)
        epsi[i] = (k[i] > 0.0) ? eps * bt[i] / (4.0 * k[i]) : 1.0;
    if (overrides.eps0) epsi[0] = *overrides.eps0;
    if (overrides.eps1) epsi[1] = *overrides.eps1;

    double C[2], lam[2];
    for (int i = 0; i < 2; ++i) {
        C[i] = (bt[i] > 0.0) ? k[i] * epsi[i] / (2.0 * bt[i]) - at[i] / bt[i] : 0.0;
        lam[i] = tspec.c_tilde - (2.0 * C[i] + tspec.c_tilde / 2.0 + eps / 2.0);
    }

    p.k0 = k[0];
    p.k1 = k[1];
    p.eps = eps;
    p.eps0 = epsi[0];
    p.eps1 = epsi[1];
    p.C0 = C[0];
    p.C1 = C[1];
    p.lambda0 = lam[0];
    p.lambda1 = lam[1];
    p.lambda = std::min(lam[0], lam[1]);

    // Feasibility re-check (defaults always pass; overrides may not).
    require(eps > 0.0 && eps < tspec.c_tilde, "infeasible");
    for (int i = 0; i < 2; ++i) {
        if (at[i] > 0.0 || bt[i] == 0.0)
            require(k[i] == 0.0, "infeasible");
        else
            require(k[i] >= 0.0 && at[i] + k[i] > 0.0, "infeasible");
        require(epsi[i] > 0.0, "infeasible");
        if (bt[i] > 0.0 && at[i] <= 0.0) require(C[i] <= tspec.a, "infeasible");
        require(2.0 * C[i] + tspec.c_tilde / 2.0 + eps / 2.0 < tspec.c_tilde,
                "infeasible");
    }
    require(p.lambda > 0.0, "infeasible");
    return p;
}

namespace {

struct GainPieces {
    double E;      // e^{|b|/2a}
    double N;      // sqrt(1/(lambda eps)) * E, nonlinear prefactor of the w-gains
    double S;      // sum over Robin sides of sqrt(k_i / (lambda beta_i eps_i))
    double Df;     // 1/c_tilde
    double D0, D1; // 1/(alpha_i_tilde + k_i)
    double G0, G1; // linear/nonlinear inner coefficients of the w-gains
};

GainPieces gain_pieces(const TransformedSpec& tspec, const SplitParams& params) {
    const double at[2] = {tspec.alpha0_tilde, tspec.alpha1_tilde};
    const double bt[2] = {tspec.beta0_tilde, tspec.beta1_tilde};
    const double k[2] = {params.k0, params.k1};
    const double epsi[2] = {params.eps0, params.eps1};

    GainPieces g;
    g.E = exp_half(tspec.a, tspec.b);
    require(params.lambda > 0.0 && params.eps > 0.0, "compute_gain_set: invalid split params");
    g.N = std::sqrt(1.0 / (params.lambda * params.eps)) * g.E;
    g.S = 0.0;
    for (int i = 0; i < 2; ++i) {
        if (bt[i] > 0.0 && k[i] > 0.0)
            g.S += std::sqrt(k[i] / (params.lambda * bt[i] * epsi[i]));
        require(at[i] + k[i] > 0.0, "compute_gain_set: alpha_tilde + k must be positive");
    }
    g.Df = 1.0 / tspec.c_tilde;
    g.D0 = 1.0 / (at[0] + k[0]);
    g.D1 = 1.0 / (at[1] + k[1]);
    // Cases (i), (ii), (iv) pair each boundary gain with its own side.
    // Case (iii) (beta0 = 0, beta1 > 0) swaps the inner coefficients,
    // matching the worked Ginzburg-Landau gains.
    if (bt[0] == 0.0 && bt[1] > 0.0) {
        g.G0 = g.D1;
        g.G1 = 1.0 / at[0];
        require(at[0] > 0.0, "compute_gain_set: alpha0_tilde must be positive in case (iii)");
    } else {
        g.G0 = g.D0;
        g.G1 = g.D1;
    }
    return g;
}

KFunction make_gain(double p, double q, double r, const Nonlinearity& h) {
    KFunction k;
    k.p = p;
    if (h.is_zero() || q == 0.0) {
        k.q = 0.0;
        k.r = 0.0;
    } else {
        k.q = q;
        k.r = r;
        k.h = h;
    }
    return k;
}

}  // namespace

std::array<KFunction, 3> compute_w_gains(const Nonlinearity& h,
                                         const TransformedSpec& tspec,
                                         const SplitParams& params) {
    const GainPieces g = gain_pieces(tspec, params);
    return {make_gain(g.Df * g.S, g.N, g.Df * g.E, h),
            make_gain(g.G0 * g.S, g.N, g.G0 * g.E, h),
            make_gain(g.G1 * g.S, g.N, g.G1 * g.E, h)};
}

GainSet compute_gain_set(const ProblemSpec& spec, const TransformedSpec& tspec,
                         const SplitParams& params) {
    const GainPieces g = gain_pieces(tspec, params);
    const Nonlinearity& h = spec.h;

    GainSet out;
    out.beta_coeff = g.E;
    out.lambda = params.lambda;
    // gamma absorbs sup|f~| <= e^{|b|/2a} sup|f| in its direct term; the
    // boundary gains keep the exact trace data.
    out.gamma = make_gain(g.E * g.Df * (g.E + g.S), g.E * g.N, g.Df * g.E, h);
    out.gamma0 = make_gain(g.E * (g.D0 + g.G0 * g.S), g.E * g.N, g.G0 * g.E, h);
    out.gamma1 = make_gain(g.E * (g.D1 + g.G1 * g.S), g.E * g.N, g.G1 * g.E, h);
    return out;
}

MaxEstimateBound max_estimate_bound(const TransformedSpec& tspec,
                                    const SplitParams& params,
                                    double sup_f_tilde, double sup_d0_tilde,
                                    double sup_d1_tilde) {
    require(sup_f_tilde >= 0.0 && sup_d0_tilde >= 0.0 && sup_d1_tilde >= 0.0,
            "max_estimate_bound: sup norms must be nonnegative");
    const double den0 = tspec.alpha0_tilde + params.k0;
    const double den1 = tspec.alpha1_tilde + params.k1;
    require(tspec.c_tilde > 0.0 && den0 > 0.0 && den1 > 0.0,
            "max_estimate_bound: nonpositive denominator");
    return {std::max({sup_f_tilde / tspec.c_tilde, sup_d0_tilde / den0,
                      sup_d1_tilde / den1})};
}

double evaluate_iss_bound(const GainSet& gains, double phi_l2, double sup_f,
                          double sup_d0, double sup_d1, double T) {
    return gains.beta_coeff * phi_l2 * std::exp(-gains.lambda * T) +
           gains.gamma.value(sup_f) + gains.gamma0.value(sup_d0) +
           gains.gamma1.value(sup_d1);
}

GainSet closed_form_gains_reaction_diffusion(double a, double b, double c,
                                             double K1, double eps) {
    require(a > 0.0, "reaction_diffusion gains: a must be positive");
    const double half = b / (2.0 * a);
    require(K1 > std::fabs(half), "reaction_diffusion gains: K1 > |b|/2a required");
    const double c_tilde = b * b / (4.0 * a) + c;
    require(c_tilde > 0.0, "reaction_diffusion gains: b^2/4a + c must be positive");
    require(eps > 0.0 && eps < c_tilde, "reaction_diffusion gains: eps out of range");
    require(2.0 * (K1 + half) - eps / 2.0 > 0.0,
            "reaction_diffusion gains: eps too large for K1");

    const double E = exp_half(a, b);
    GainSet out;
    out.beta_coeff = E;
    out.lambda = std::min(c_tilde / 2.0 - eps / 2.0,
                          c_tilde / 2.0 + 2.0 * (K1 + half) - eps / 2.0);
    out.gamma = make_gain(4.0 * a * E * E / (b * b + 4.0 * a * c), 0.0, 0.0, {});
    out.gamma0 = make_gain(E, 0.0, 0.0, {});
    out.gamma1 = make_gain(2.0 * a * E / (2.0 * a * K1 + b), 0.0, 0.0, {});
    return out;
}

GainSet closed_form_gains_ginzburg_landau(double a, double b, double c1,
                                          double c2, double c3,
                                          const SplitParams& params) {
    require(a > 0.0 && c2 > 0.0 && c3 > 0.0,
            "ginzburg_landau gains: a, c2, c3 must be positive");
    const double c_tilde = b * b / (4.0 * a) + c1;
    require(c_tilde > 0.0, "ginzburg_landau gains: b^2/4a + c1 must be positive");
    const double half = b / (2.0 * a);
    require(-2.0 * b / a < c_tilde && -half <= a,
            "ginzburg_landau gains: structural condition violated");
    require(params.k1 + half > 0.0,
            "ginzburg_landau gains: k1 + b/2a must be positive");
    require(params.lambda > 0.0 && params.eps > 0.0 && params.eps1 > 0.0,
            "ginzburg_landau gains: invalid split params");

    const Nonlinearity h = Nonlinearity::cubic_quintic(c2, c3);
    const double E = exp_half(a, b);
    const double S1 = params.k1 > 0.0
                          ? std::sqrt(params.k1 / (params.lambda * params.eps1))
                          : 0.0;
    const double N = std::sqrt(1.0 / (params.lambda * params.eps)) * E;
    const double Df = 4.0 * a / (b * b + 4.0 * a * c1);
    const double D1 = 2.0 * a / (b + 2.0 * a * params.k1);  // 1/(k1 + b/2a)

    GainSet out;
    out.beta_coeff = E;
    out.lambda = params.lambda;
    out.gamma = make_gain(Df * E * (E + S1), E * N, Df * E, h);
    out.gamma0 = make_gain(E * (1.0 + D1 * S1), E * N, D1 * E, h);
    out.gamma1 = make_gain(E * (D1 + S1), E * N, E, h);
    return out;
}

}  // namespace isscert
