#include "isscert/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>

namespace isscert {

namespace {

struct EngineProblem {
    double a = 1.0, b = 0.0, c = 0.0;
    double alpha[2] = {1.0, 1.0};
    double beta[2] = {0.0, 0.0};
    std::function<double(double)> d0, d1;
    std::function<double(double, double)> forcing;                      // (x, t)
    std::function<double(int, double, double, double)> nonlin;          // (j, x, t, u)
    std::function<double(int, double, double, double)> nonlin_deriv;    // |d/du|
    std::function<double(double)> initial;
};

struct Operator {
    std::vector<double> sub, diag, sup;  // L stencil rows
    double g_coef0 = 0.0, g_coef1 = 0.0; // boundary-data multipliers at rows 0, nx-1
    bool dirichlet0 = false, dirichlet1 = false;
};

Operator assemble(const EngineProblem& p, const Grid& grid) {
    const int nx = grid.nx;
    const double dx = grid.dx();
    Operator op;
    op.sub.assign(nx, 0.0);
    op.diag.assign(nx, 0.0);
    op.sup.assign(nx, 0.0);

    const double diff = p.a / (dx * dx);
    const double adv = p.b / (2.0 * dx);
    for (int j = 1; j < nx - 1; ++j) {
        op.sub[j] = diff + adv;
        op.diag[j] = -2.0 * diff - p.c;
        op.sup[j] = diff - adv;
    }

    op.dirichlet0 = p.beta[0] == 0.0;
    op.dirichlet1 = p.beta[1] == 0.0;

    // Ghost-node closure: the boundary condition eliminates the ghost value
    // from the second-order interior stencil.
    if (!op.dirichlet0) {
        const double ratio = p.alpha[0] / p.beta[0];
        op.diag[0] = -2.0 * diff - 2.0 * p.a * ratio / dx - p.b * ratio - p.c;
        op.sup[0] = 2.0 * diff;
        op.g_coef0 = 2.0 * p.a / (p.beta[0] * dx) + p.b / p.beta[0];
    }
    if (!op.dirichlet1) {
        const double ratio = p.alpha[1] / p.beta[1];
        op.sub[nx - 1] = 2.0 * diff;
        op.diag[nx - 1] = -2.0 * diff - 2.0 * p.a * ratio / dx + p.b * ratio - p.c;
        op.g_coef1 = 2.0 * p.a / (p.beta[1] * dx) - p.b / p.beta[1];
    }
    return op;
}

/// In-place Thomas solve of the tridiagonal system (sub, diag, sup) x = rhs.
void thomas_solve(const std::vector<double>& sub, std::vector<double> diag,
                  const std::vector<double>& sup, std::vector<double>& rhs,
                  std::vector<double>& x) {
    const int n = static_cast<int>(diag.size());
    for (int j = 1; j < n; ++j) {
        if (std::fabs(diag[j - 1]) < 1e-300) throw SolverFault("singular_row");
        const double m = sub[j] / diag[j - 1];
        diag[j] -= m * sup[j - 1];
        rhs[j] -= m * rhs[j - 1];
    }
    if (std::fabs(diag[n - 1]) < 1e-300) throw SolverFault("singular_row");
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for (int j = n - 2; j >= 0; --j) x[j] = (rhs[j] - sup[j] * x[j + 1]) / diag[j];
}

Trajectory run_engine(const EngineProblem& p, const Grid& grid,
                      const SolverOptions& opts, VariableTag tag) {
    const int nx = grid.nx;
    const double dt = grid.dt();
    const Operator op = assemble(p, grid);
    const bool has_nonlin = static_cast<bool>(p.nonlin);
    const double theta = opts.scheme == Scheme::imex_cn ? 0.5 : 1.0;

    Trajectory traj(grid, tag);
    for (int j = 0; j < nx; ++j) traj.at(0, j) = p.initial ? p.initial(grid.x(j)) : 0.0;

    std::vector<double> msub(nx), mdiag(nx), msup(nx), rhs(nx), expl(nx), unew(nx);

    // Implicit matrix I/dt - theta L, constant in time; Dirichlet rows are
    // identity rows.
    for (int j = 0; j < nx; ++j) {
        msub[j] = -theta * op.sub[j];
        mdiag[j] = 1.0 / dt - theta * op.diag[j];
        msup[j] = -theta * op.sup[j];
    }
    if (op.dirichlet0) { msub[0] = msup[0] = 0.0; mdiag[0] = 1.0; }
    if (op.dirichlet1) { msub[nx - 1] = msup[nx - 1] = 0.0; mdiag[nx - 1] = 1.0; }

    auto apply_explicit = [&](const double* u, double tn, double tnext) {
        // (I/dt + (1-theta) L) u^n plus the boundary-data sources.
        for (int j = 0; j < nx; ++j) {
            double lu = op.diag[j] * u[j];
            if (j > 0) lu += op.sub[j] * u[j - 1];
            if (j + 1 < nx) lu += op.sup[j] * u[j + 1];
            expl[j] = u[j] / dt + (1.0 - theta) * lu;
        }
        if (!op.dirichlet0)
            expl[0] += op.g_coef0 * ((1.0 - theta) * p.d0(tn) + theta * p.d0(tnext));
        if (!op.dirichlet1)
            expl[nx - 1] += op.g_coef1 * ((1.0 - theta) * p.d1(tn) + theta * p.d1(tnext));
    };

    auto solve_stage = [&](const double* u, double tn, double tnext,
                           const std::vector<double>& source, std::vector<double>& out) {
        (void)u;
        rhs = expl;
        for (int j = 0; j < nx; ++j) rhs[j] += source[j];
        if (op.dirichlet0) rhs[0] = p.d0(tnext) / p.alpha[0];
        if (op.dirichlet1) rhs[nx - 1] = p.d1(tnext) / p.alpha[1];
        (void)tn;
        thomas_solve(msub, mdiag, msup, rhs, out);
    };

    // Forcing rows are cached per time level; each step evaluates f only at
    // t_{n+1} and reuses the previous level.
    std::vector<double> frow_n(nx, 0.0), frow_next(nx, 0.0);
    if (p.forcing)
        for (int j = 0; j < nx; ++j) frow_n[j] = p.forcing(grid.x(j), grid.t(0));

    std::vector<double> src1(nx), src2(nx);
    for (int n = 0; n < grid.nt; ++n) {
        const double tn = grid.t(n);
        const double tnext = grid.t(n + 1);
        const double* u = traj.row(n);
        if (p.forcing)
            for (int j = 0; j < nx; ++j) frow_next[j] = p.forcing(grid.x(j), tnext);

        // Explicit-term stability guard over the running solution range.
        if (has_nonlin) {
            double hprime = 0.0;
            for (int j = 0; j < nx; ++j)
                hprime = std::max(hprime, std::fabs(p.nonlin_deriv(j, grid.x(j), tn, u[j])));
            const double dt_stab = 1.0 / (2.0 * hprime + std::fabs(p.c) + 1.0);
            if (dt > opts.dt_safety * dt_stab)
                throw SolverFault("instability: dt exceeds explicit nonlinear stability step");
        }

        apply_explicit(u, tn, tnext);

        for (int j = 0; j < nx; ++j) {
            src1[j] = frow_n[j];
            if (has_nonlin) src1[j] -= p.nonlin(j, grid.x(j), tn, u[j]);
        }

        if (opts.scheme == Scheme::implicit_euler) {
            // Forcing at t_{n+1}, nonlinearity frozen at the known level.
            for (int j = 0; j < nx; ++j)
                src2[j] = frow_next[j] + (src1[j] - frow_n[j]);
            solve_stage(u, tn, tnext, src2, unew);
        } else if (!has_nonlin) {
            for (int j = 0; j < nx; ++j)
                src2[j] = 0.5 * (frow_n[j] + frow_next[j]);
            solve_stage(u, tn, tnext, src2, unew);
        } else {
            // Heun average of the explicit source: predict, then re-evaluate
            // the nonlinearity at the predicted state.
            solve_stage(u, tn, tnext, src1, unew);
            for (int j = 0; j < nx; ++j) {
                const double s = frow_next[j] - p.nonlin(j, grid.x(j), tnext, unew[j]);
                src2[j] = 0.5 * (src1[j] + s);
            }
            solve_stage(u, tn, tnext, src2, unew);
        }
        frow_n.swap(frow_next);

        double* next = traj.row(n + 1);
        for (int j = 0; j < nx; ++j) {
            if (!std::isfinite(unew[j]) || std::fabs(unew[j]) > 1e12)
                throw SolverFault("instability");
            next[j] = unew[j];
        }
    }
    return traj;
}

}  // namespace

Trajectory simulate_full(const ProblemSpec& spec, const Grid& grid,
                         const SolverOptions& opts) {
    EngineProblem p;
    p.a = spec.a;
    p.b = spec.b;
    p.c = spec.c;
    p.alpha[0] = spec.alpha0;
    p.alpha[1] = spec.alpha1;
    p.beta[0] = spec.beta0;
    p.beta[1] = spec.beta1;
    p.d0 = [&spec](double t) { return spec.d0.value(t); };
    p.d1 = [&spec](double t) { return spec.d1.value(t); };
    if (!spec.f.empty())
        p.forcing = [&spec](double x, double t) { return spec.f.value(x, t); };
    if (!spec.h.is_zero()) {
        p.nonlin = [&spec](int, double, double, double u) { return spec.h.value(u); };
        p.nonlin_deriv = [&spec](int, double, double, double u) {
            return spec.h.derivative(u);
        };
    }
    p.initial = [&spec](double x) { return spec.phi.value(x); };
    return run_engine(p, grid, opts, VariableTag::u);
}

Trajectory simulate_v(const TransformedSpec& tspec, const SplitParams& params,
                      const Field& f_tilde, const Signal& d0_tilde,
                      const Signal& d1_tilde, const Grid& grid,
                      const SolverOptions& opts) {
    EngineProblem p;
    p.a = tspec.a;
    p.b = 0.0;
    p.c = tspec.c_tilde;
    p.alpha[0] = tspec.alpha0_tilde + params.k0;
    p.alpha[1] = tspec.alpha1_tilde + params.k1;
    p.beta[0] = tspec.beta0_tilde;
    p.beta[1] = tspec.beta1_tilde;
    p.d0 = [&d0_tilde](double t) { return d0_tilde.value(t); };
    p.d1 = [&d1_tilde](double t) { return d1_tilde.value(t); };
    if (!f_tilde.empty())
        p.forcing = [&f_tilde](double x, double t) { return f_tilde.value(x, t); };
    return run_engine(p, grid, opts, VariableTag::v_tilde);
}

Trajectory simulate_w(const TransformedSpec& tspec, const SplitParams& params,
                      const Nonlinearity& h, const Trajectory& v_traj,
                      const InitialProfile& phi_tilde, const Grid& grid,
                      const SolverOptions& opts) {
    const Grid& vg = v_traj.grid();
    if (vg.nx != grid.nx || vg.nt != grid.nt || vg.t_final != grid.t_final)
        throw std::invalid_argument("simulate_w: v trajectory grid mismatch");

    const double dt = grid.dt();
    auto time_index = [dt, &grid](double t) {
        int n = static_cast<int>(std::lround(t / dt));
        return std::clamp(n, 0, grid.nt);
    };

    EngineProblem p;
    p.a = tspec.a;
    p.b = 0.0;
    p.c = tspec.c_tilde;
    p.alpha[0] = tspec.alpha0_tilde;
    p.alpha[1] = tspec.alpha1_tilde;
    p.beta[0] = tspec.beta0_tilde;
    p.beta[1] = tspec.beta1_tilde;
    p.d0 = [&v_traj, &params, time_index](double t) {
        return params.k0 * v_traj.at(time_index(t), 0);
    };
    p.d1 = [&v_traj, &params, time_index, &grid](double t) {
        return params.k1 * v_traj.at(time_index(t), grid.nx - 1);
    };
    if (!h.is_zero()) {
        const double half = tspec.b / (2.0 * tspec.a);
        auto weights = std::make_shared<std::vector<double>>(grid.nx);
        for (int j = 0; j < grid.nx; ++j) (*weights)[j] = std::exp(half * grid.x(j));
        p.nonlin = [&h, &v_traj, time_index, weights](int j, double, double t, double w) {
            const double e = (*weights)[j];
            return h.value(e * (v_traj.at(time_index(t), j) + w)) / e;
        };
        p.nonlin_deriv = [&h, &v_traj, time_index, weights](int j, double, double t, double w) {
            return h.derivative((*weights)[j] * (v_traj.at(time_index(t), j) + w));
        };
    }
    p.initial = [&phi_tilde](double x) { return phi_tilde.value(x); };
    return run_engine(p, grid, opts, VariableTag::w_tilde);
}

Trajectory untransform(const Trajectory& traj, double a, double b) {
    if (traj.tag() == VariableTag::u)
        throw std::invalid_argument("untransform: trajectory is not in tilde variables");
    Trajectory out = traj;
    const Grid& g = traj.grid();
    for (int j = 0; j < g.nx; ++j) {
        const double w = std::exp(b * g.x(j) / (2.0 * a));
        for (int n = 0; n <= g.nt; ++n) out.at(n, j) = traj.at(n, j) * w;
    }
    out.set_tag(VariableTag::u);
    return out;
}

double simpson_integral(const std::vector<double>& values, double dx) {
    const int n = static_cast<int>(values.size());
    if (n < 2) return 0.0;
    int m = n - 1;  // interval count
    double acc = 0.0;
    int simpson_end = m;
    if (m % 2 != 0) simpson_end = m - 1;  // trapezoid tail on the last interval
    for (int j = 0; j + 2 <= simpson_end; j += 2)
        acc += dx / 3.0 * (values[j] + 4.0 * values[j + 1] + values[j + 2]);
    if (simpson_end != m) acc += 0.5 * dx * (values[m - 1] + values[m]);
    return acc;
}

double l2_norm_row(const double* values, int nx, double dx) {
    std::vector<double> sq(nx);
    for (int j = 0; j < nx; ++j) sq[j] = values[j] * values[j];
    return std::sqrt(std::max(0.0, simpson_integral(sq, dx)));
}

std::vector<std::pair<double, double>> l2_profile(const Trajectory& traj) {
    const Grid& g = traj.grid();
    std::vector<std::pair<double, double>> out;
    out.reserve(g.nt + 1);
    for (int n = 0; n <= g.nt; ++n)
        out.emplace_back(g.t(n), l2_norm_row(traj.row(n), g.nx, g.dx()));
    return out;
}

namespace {

/// Parabolic vertex refinement of |g| around sample k, using g^2 (smooth
/// through sign changes).
double refine_peak(const std::function<double(double)>& g, double t0, double dt,
                   int k, int n) {
    double best = std::fabs(g(t0 + k * dt));
    if (k <= 0 || k >= n - 1) return best;
    const double ym = g(t0 + (k - 1) * dt), y0 = g(t0 + k * dt), yp = g(t0 + (k + 1) * dt);
    const double am = ym * ym, a0 = y0 * y0, ap = yp * yp;
    const double denom = am - 2.0 * a0 + ap;
    if (denom >= 0.0) return best;  // not a local max of the fit
    const double delta = 0.5 * (am - ap) / denom;
    const double t_star = t0 + (k + std::clamp(delta, -1.0, 1.0)) * dt;
    return std::max(best, std::fabs(g(t_star)));
}

}  // namespace

double sup_norm_signal(const Signal& s, double t_final, int n) {
    if (n < 2) throw std::invalid_argument("sup_norm_signal: n >= 2 required");
    const double dt = t_final / (n - 1);
    int kbest = 0;
    double best = -1.0;
    for (int k = 0; k < n; ++k) {
        const double v = std::fabs(s.value(k * dt));
        if (v > best) { best = v; kbest = k; }
    }
    return refine_peak([&s](double t) { return s.value(t); }, 0.0, dt, kbest, n);
}

double sup_norm_field(const Field& f, double t_final, int nx, int nt) {
    if (nx < 2 || nt < 2) throw std::invalid_argument("sup_norm_field: nx, nt >= 2 required");
    const double dx = 1.0 / (nx - 1);
    const double dt = t_final / (nt - 1);
    int ibest = 0, kbest = 0;
    double best = -1.0;
    for (int i = 0; i < nx; ++i)
        for (int k = 0; k < nt; ++k) {
            const double v = std::fabs(f.value(i * dx, k * dt));
            if (v > best) { best = v; ibest = i; kbest = k; }
        }
    const double xb = ibest * dx;
    const double tb = kbest * dt;
    double refined = refine_peak([&f, xb](double t) { return f.value(xb, t); }, 0.0, dt, kbest, nt);
    refined = std::max(refined, refine_peak([&f, tb](double x) { return f.value(x, tb); },
                                            0.0, dx, ibest, nx));
    return refined;
}

}  // namespace isscert
