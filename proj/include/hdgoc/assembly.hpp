#pragma once

#include "hdgoc/hdg_local.hpp"

#include <Eigen/Sparse>

#include <vector>

namespace hdgoc {

enum class TraceVariable : std::size_t { YHat = 0, ZHat = 1 };

/// Global numbering of the interior-face trace unknowns, face-major:
/// dof = (2 * interior_face + variable) * (k + 1) + mode.
struct TraceDofMap {
    std::size_t trace_dim{0};
    std::size_t num_interior_faces{0};

    [[nodiscard]] std::size_t dof(std::size_t interior_face, TraceVariable var, std::size_t mode) const
    {
        return (2 * interior_face + static_cast<std::size_t>(var)) * trace_dim + mode;
    }
    [[nodiscard]] std::size_t size() const { return 2 * num_interior_faces * trace_dim; }
};

struct GlobalTraceSystem {
    Eigen::SparseMatrix<double> matrix;
    Eigen::VectorXd rhs;
    TraceDofMap dofs;
};

/// Coefficients of (q_h, p_h, y_h, z_h, u_h) per element and (yhat, zhat) per interior face.
struct DiscreteSolution {
    const Discretization* disc{nullptr};
    int k{0};
    Eigen::VectorXd q, p;
    Eigen::VectorXd y, z, u;
    Eigen::VectorXd yhat, zhat;

    [[nodiscard]] FieldSet state_fields() const { return {q, y, yhat}; }
    [[nodiscard]] FieldSet adjoint_fields() const { return {p, z, zhat}; }
};

inline constexpr double kTraceSolveTolerance = 1e-10;

[[nodiscard]] std::vector<LocalSystem> assemble_local_systems(const Discretization& disc);

/// Schur complement D - C A^{-1} B of every element, accumulated in ascending element order.
[[nodiscard]] GlobalTraceSystem condense(const std::vector<LocalSystem>& locals, const Discretization& disc);

[[nodiscard]] double relative_residual(const GlobalTraceSystem& system, const Eigen::VectorXd& x);

/// Sparse LU solve; throws SolverFailure if factorization fails or the relative
/// residual exceeds kTraceSolveTolerance.
[[nodiscard]] Eigen::VectorXd solve_traces(const GlobalTraceSystem& system);

[[nodiscard]] DiscreteSolution recover(const Eigen::VectorXd& traces, const std::vector<LocalSystem>& locals,
                                       const Discretization& disc);

/// Assemble, condense, solve and recover.
[[nodiscard]] DiscreteSolution solve(const Discretization& disc);

/// J = 1/2 ||y_h - y_d||^2 + gamma/2 ||u_h||^2.
[[nodiscard]] double compute_cost(const DiscreteSolution& solution, const ProblemData& problem);

} // namespace hdgoc
