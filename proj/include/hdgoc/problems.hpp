#pragma once

#include "hdgoc/mesh.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hdgoc {

using ScalarField = std::function<double(Point)>;
using VectorField = std::function<Point(Point)>;

/// Manufactured state/adjoint pair; fluxes are -grad_y and -grad_z, the control is z / gamma.
struct ExactSolution {
    ScalarField y;
    VectorField grad_y;
    ScalarField z;
    VectorField grad_z;
};

/// Data of the control problem
///   -lap y + beta . grad y = f + u,  y = g on the boundary,
///   -lap z - div(beta z)   = y_d - y, z = 0 on the boundary,
///   z - gamma u = 0.
struct ProblemData {
    std::string name;
    VectorField beta;
    ScalarField div_beta;
    double gamma{1.0};
    ScalarField f;
    ScalarField g;
    ScalarField y_d;
    std::optional<ExactSolution> exact;
};

/// beta = (1,1), y = sin(pi x1), z = sin(pi x1) sin(pi x2).
[[nodiscard]] ProblemData example1(double gamma = 1.0);
/// beta = (x2, x1), same y and z.
[[nodiscard]] ProblemData example2(double gamma = 1.0);
/// y = x1, z = 0, beta = (1,1): reproduced exactly by the discretization for k >= 1.
[[nodiscard]] ProblemData poly_debug(double gamma = 1.0);

/// Looks up "example1", "example2" or "poly_debug"; throws ConfigError otherwise.
[[nodiscard]] ProblemData make_problem(const std::string& name, double gamma = 1.0);

/// Same beta and gamma, f = g = y_d = 0, no exact solution.
[[nodiscard]] ProblemData with_zero_data(ProblemData problem);

/// Residuals of the state and adjoint equations at x, using finite differences
/// of the supplied exact functions. Requires problem.exact.
struct ConsistencyResidual {
    double state{0.0};
    double adjoint{0.0};
};
[[nodiscard]] ConsistencyResidual consistency_residual(const ProblemData& problem, Point x);

/// Largest residual over the given sample points.
[[nodiscard]] double max_consistency_residual(const ProblemData& problem, std::span<const Point> points);

/// Quasi-random points in the open unit square (2-3 Halton sequence).
[[nodiscard]] std::vector<Point> halton_points(std::size_t count);

} // namespace hdgoc
