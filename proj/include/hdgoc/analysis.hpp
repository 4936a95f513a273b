#pragma once

#include "hdgoc/assembly.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hdgoc {

enum class Variable { Q, P, Y, Z, U };

inline constexpr std::array<Variable, 5> kAllVariables{Variable::Q, Variable::P, Variable::Y, Variable::Z,
                                                       Variable::U};

[[nodiscard]] std::string_view variable_name(Variable v);

/// ||exact - discrete||_{L2} for one of the five unknowns, using the error quadrature.
/// Throws InvalidArgument when the problem has no exact solution.
[[nodiscard]] double l2_error(const DiscreteSolution& solution, const ProblemData& problem, Variable variable);

/// L2 distance between a broken P^degree field (TriBasis coefficients per element) and a function.
[[nodiscard]] double l2_distance(const Mesh& mesh, const Eigen::VectorXd& coeffs, int degree,
                                 const ScalarField& exact, int exactness);
/// Same for a [P^degree]^2 field in the flux layout.
[[nodiscard]] double l2_distance(const Mesh& mesh, const Eigen::VectorXd& coeffs, int degree,
                                 const VectorField& exact, int exactness);

/// Errors at or below this value count as zero when forming rates.
inline constexpr double kZeroErrorFloor = 1e-12;

/// rate_i = log2(e_{i-1} / e_i); entry 0 and entries touching a zero error are absent.
[[nodiscard]] std::vector<std::optional<double>> compute_rates(std::span<const double> errors);

struct ConvergenceReport {
    std::string problem;
    int k{0};
    double gamma{1.0};
    double tau2{1.0};
    std::vector<std::size_t> levels;
    std::vector<double> h;
    std::vector<std::array<double, 5>> errors;                 ///< ordered as kAllVariables
    std::vector<std::array<std::optional<double>, 5>> rates;   ///< rates[0] is always absent

    [[nodiscard]] double error(std::size_t level, Variable v) const { return errors[level][static_cast<std::size_t>(v)]; }
    [[nodiscard]] std::optional<double> rate(std::size_t level, Variable v) const
    {
        return rates[level][static_cast<std::size_t>(v)];
    }
    /// Fills rates from errors.
    void finalize_rates();
};

/// Closed-form right-hand side of the energy identity B1(v, w, mu; v, w, mu) = ...
[[nodiscard]] double energy_identity_b1(const Discretization& disc, const FieldSet& v);
/// ... and of B2(v, w, mu; v, w, mu) = ...
[[nodiscard]] double energy_identity_b2(const Discretization& disc, const FieldSet& v);

/// Largest |<qhat.n + beta.n yhat, mu>| (and adjoint counterpart) summed over both sides
/// of any interior face, over all trace basis functions mu.
[[nodiscard]] double flux_conservation_residual(const DiscreteSolution& solution);

} // namespace hdgoc
