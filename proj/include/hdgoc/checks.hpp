#pragma once

#include "hdgoc/hdg_local.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hdgoc {

struct CheckOptions {
    std::uint64_t seed{12345};
    double tau2{1.0};
    Tau1Rule tau1_rule{Tau1Rule::FromBeta};
};

struct CheckResult {
    std::string name;
    bool passed{false};
    std::string detail;
};

struct CheckSummary {
    std::vector<CheckResult> results;

    [[nodiscard]] bool all_passed() const;
};

inline constexpr double kIdentityTolerance = 1e-10;
inline constexpr double kUniquenessTolerance = 1e-9;
inline constexpr double kConservationTolerance = 1e-9;
inline constexpr double kOrthogonalityTolerance = 1e-12;

/// Random coefficients, uniform in [-1, 1], for a (flux, state, trace) triple.
[[nodiscard]] FieldSet random_fields(const Discretization& disc, std::uint64_t seed);

/// Relative mismatch |B(v; v) - energy(v)| / |energy(v)| for B1 (state = true) or B2.
[[nodiscard]] double energy_identity_mismatch(const Discretization& disc, const FieldSet& v, bool state);

/// |B1(q,y,yh; p,-z,-zh) + B2(p,z,zh; -q,y,yh)| / max(|B1 term|, |B2 term|).
[[nodiscard]] double adjoint_identity_residual(const Discretization& disc, const FieldSet& state,
                                               const FieldSet& adjoint);
/// The unnormalized sum.
[[nodiscard]] double adjoint_identity_sum(const Discretization& disc, const FieldSet& state, const FieldSet& adjoint);

/// Largest |(f - Pf, phi)| over volume (state and flux spaces) and face basis functions.
[[nodiscard]] double projection_orthogonality_residual(const Mesh& mesh, int k);

/// Stabilization, energy identity, adjoint identity, uniqueness, flux conservation and
/// projection orthogonality suites.
[[nodiscard]] CheckSummary run_checks(const CheckOptions& options);

} // namespace hdgoc
