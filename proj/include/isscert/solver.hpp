#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "isscert/model.hpp"
#include "isscert/transform.hpp"

namespace isscert {

/// Uniform space-time grid on [0,1] x [0,t_final]: nodes x_j = j/(nx-1),
/// time levels t_n = n * t_final / nt.
struct Grid {
    int nx = 3;
    int nt = 2;
    double t_final = 1.0;

    double dx() const { return 1.0 / (nx - 1); }
    double dt() const { return t_final / nt; }
    double x(int j) const { return static_cast<double>(j) / (nx - 1); }
    double t(int n) const { return t_final * n / nt; }
};

enum class Scheme { imex_cn, implicit_euler };

struct SolverOptions {
    Scheme scheme = Scheme::imex_cn;
    bool newton_free = true;  // nonlinearity always explicit
    double dt_safety = 1.0;   // fraction of the explicit-term stability step
};

enum class VariableTag { u, v_tilde, w_tilde, u_tilde };

struct SolverFault : std::runtime_error {
    explicit SolverFault(const std::string& what) : std::runtime_error(what) {}
};

/// Space-time solution samples, row n holding the profile at t_n.
class Trajectory {
public:
    Trajectory() = default;
    Trajectory(Grid grid, VariableTag tag)
        : grid_(grid), tag_(tag), data_(static_cast<std::size_t>(grid.nt + 1) * grid.nx, 0.0) {}

    double at(int n, int j) const { return data_[static_cast<std::size_t>(n) * grid_.nx + j]; }
    double& at(int n, int j) { return data_[static_cast<std::size_t>(n) * grid_.nx + j]; }
    const double* row(int n) const { return data_.data() + static_cast<std::size_t>(n) * grid_.nx; }
    double* row(int n) { return data_.data() + static_cast<std::size_t>(n) * grid_.nx; }

    const Grid& grid() const { return grid_; }
    VariableTag tag() const { return tag_; }
    void set_tag(VariableTag tag) { tag_ = tag; }

private:
    Grid grid_;
    VariableTag tag_ = VariableTag::u;
    std::vector<double> data_;
};

/// Direct simulation of u_t - a u_xx + b u_x + c u + h(u) = f with the
/// original Robin/Dirichlet boundary data.
Trajectory simulate_full(const ProblemSpec& spec, const Grid& grid,
                         const SolverOptions& opts);

/// Linear split subsystem v_t - a v_xx + c_tilde v = f_tilde with boundary
/// coefficients (alpha_tilde_i + k_i, beta_tilde_i), zero initial data.
Trajectory simulate_v(const TransformedSpec& tspec, const SplitParams& params,
                      const Field& f_tilde, const Signal& d0_tilde,
                      const Signal& d1_tilde, const Grid& grid,
                      const SolverOptions& opts);

/// Nonlinear split subsystem carrying the initial data; coupled to the
/// v trajectory through the explicit source and the k_i v(i,t) boundary terms.
Trajectory simulate_w(const TransformedSpec& tspec, const SplitParams& params,
                      const Nonlinearity& h, const Trajectory& v_traj,
                      const InitialProfile& phi_tilde, const Grid& grid,
                      const SolverOptions& opts);

/// Multiplies column j by e^{b x_j / 2a}, mapping tilde variables back.
Trajectory untransform(const Trajectory& traj, double a, double b);

/// L2(0,1) norm per time level (composite Simpson, trapezoid tail on
/// grids with an odd interval count).
std::vector<std::pair<double, double>> l2_profile(const Trajectory& traj);

/// L2 norm of a single sampled profile.
double l2_norm_row(const double* values, int nx, double dx);

/// Composite Simpson integral of uniformly sampled values.
double simpson_integral(const std::vector<double>& values, double dx);

/// Sup of |s| on [0, t_final]: dense sampling plus one parabolic peak refinement.
double sup_norm_signal(const Signal& s, double t_final, int n);

/// Sup of |f| on [0,1] x [0, t_final], same strategy on a product grid.
double sup_norm_field(const Field& f, double t_final, int nx, int nt);

}  // namespace isscert
