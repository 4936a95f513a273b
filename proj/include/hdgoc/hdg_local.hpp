#pragma once

#include "hdgoc/basis.hpp"
#include "hdgoc/mesh.hpp"
#include "hdgoc/problems.hpp"
#include "hdgoc/quadrature.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <vector>

namespace hdgoc {

/// How tau1 is obtained from tau2. Only FromBeta satisfies tau1 = tau2 + beta.n;
/// EqualTau2 exists to demonstrate what breaks without it.
enum class Tau1Rule { FromBeta, EqualTau2 };

struct StabilizationConfig {
    /// tau2 as a function of the face point and the element's outward normal.
    std::function<double(Point, Point)> tau2 = [](Point, Point) { return 1.0; };
    Tau1Rule tau1_rule = Tau1Rule::FromBeta;

    [[nodiscard]] static StabilizationConfig constant(double tau2_value, Tau1Rule rule = Tau1Rule::FromBeta);

    [[nodiscard]] double tau1(double tau2_value, double beta_n) const
    {
        return tau1_rule == Tau1Rule::FromBeta ? tau2_value + beta_n : tau2_value;
    }
};

/// Reference tables for polynomial degree k: fluxes in [P^k]^2, states in P^{k+1}, traces in P^k.
struct ReferenceElement {
    explicit ReferenceElement(int k);

    int k;
    TriBasis flux_basis;
    TriBasis state_basis;
    EdgeBasis trace_basis;
    QuadratureRule volume_rule;  ///< exactness 2(k+2)+2
    QuadratureRule edge_rule;    ///< exactness 2(k+1)+2
    QuadratureRule error_rule;   ///< exactness 2(k+2)+6

    Table flux_values;   ///< at volume_rule points
    Table state_values;
    Table flux_dxi, flux_deta, state_dxi, state_deta;
    Table trace_values;  ///< at edge_rule points

    /// Flux/state tables on each local face for both orientations, indexed [face][orientation > 0].
    std::array<std::array<Table, 2>, 3> face_flux_values;
    std::array<std::array<Table, 2>, 3> face_state_values;

    [[nodiscard]] std::size_t flux_dim() const { return flux_basis.dim(); }
    [[nodiscard]] std::size_t state_dim() const { return state_basis.dim(); }
    [[nodiscard]] std::size_t trace_dim() const { return trace_basis.dim(); }

    /// Reference coordinates of the point with global face parameter s.
    [[nodiscard]] static Point face_point(std::size_t local_face, int orientation, double s);
};

/// Offsets of the element unknowns x_K = [q1 q2 y p1 p2 z] and the local traces
/// [yhat(face 0..2) zhat(face 0..2)].
struct LocalLayout {
    explicit LocalLayout(const ReferenceElement& ref);

    Eigen::Index nv, nw, nm;
    Eigen::Index q1, q2, y, p1, p2, z;
    Eigen::Index interior_size;
    Eigen::Index trace_size;

    [[nodiscard]] Eigen::Index yhat(std::size_t face) const { return static_cast<Eigen::Index>(face) * nm; }
    [[nodiscard]] Eigen::Index zhat(std::size_t face) const { return (3 + static_cast<Eigen::Index>(face)) * nm; }
};

/// Mesh, data, degree and stabilization of one HDG discretization. Holds
/// non-owning references: mesh and problem must outlive it.
class Discretization {
public:
    Discretization(const Mesh& mesh, const ProblemData& problem, int k, StabilizationConfig stab = {});

    [[nodiscard]] const Mesh& mesh() const { return *mesh_; }
    [[nodiscard]] const ProblemData& problem() const { return *problem_; }
    [[nodiscard]] const StabilizationConfig& stabilization() const { return stab_; }
    [[nodiscard]] const ReferenceElement& reference() const { return ref_; }
    [[nodiscard]] const LocalLayout& layout() const { return layout_; }
    [[nodiscard]] int degree() const { return ref_.k; }
    /// Penalty length scale (global mesh parameter).
    [[nodiscard]] double h() const { return mesh_->h; }

    [[nodiscard]] std::size_t num_interior_faces() const { return interior_faces_.size(); }
    /// Position of a face among interior faces, or Mesh::npos for boundary faces.
    [[nodiscard]] std::size_t interior_index(std::size_t face) const { return interior_index_[face]; }
    [[nodiscard]] const std::vector<std::size_t>& interior_faces() const { return interior_faces_; }

    [[nodiscard]] std::size_t flux_size() const;   ///< global coefficients of one V_h field
    [[nodiscard]] std::size_t state_size() const;  ///< global coefficients of one W_h field
    [[nodiscard]] std::size_t trace_size() const;  ///< global coefficients of one M_h(o) field

    /// Throws StabilizationInvalid unless min(tau1 - beta.n/2) > 0 and min(tau2 + beta.n/2) > 0
    /// on the boundary of the element.
    void check_stabilization(std::size_t elem) const;
    void check_stabilization() const;

private:
    const Mesh* mesh_;
    const ProblemData* problem_;
    StabilizationConfig stab_;
    ReferenceElement ref_;
    LocalLayout layout_;
    std::vector<std::size_t> interior_index_;
    std::vector<std::size_t> interior_faces_;
};

/// Quadrature data of one face of one element in physical space.
struct FaceQuadrature {
    FaceGeometry geom;
    std::size_t face{0};
    bool interior{false};
    std::vector<double> s;         ///< global face parameter of each point
    std::vector<Point> x;
    std::vector<double> weights;   ///< w_q * |e|
    std::vector<double> beta_n;
    std::vector<double> tau1;
    std::vector<double> tau2;
    const Table* flux_values{nullptr};
    const Table* state_values{nullptr};
};

/// Quadrature data of one element in physical space.
struct ElementQuadrature {
    AffineMap map;
    std::vector<Point> x;
    std::vector<double> weights;   ///< w_q * det J
    std::vector<Point> beta;
    std::vector<double> div_beta;
    Table flux_dx, flux_dy, state_dx, state_dy;
    std::array<FaceQuadrature, 3> faces;
};

[[nodiscard]] ElementQuadrature element_quadrature(const Discretization& disc, std::size_t elem);

/// Per-element HDG blocks:
///   A x + B lambda = rhs_interior   (element equations, boundary data folded in)
///   C x + D lambda = rhs_trace      (flux-conservation rows on interior faces)
/// Rows/columns of boundary faces in the trace blocks are zero; their known trace
/// values are kept in boundary_traces.
struct LocalSystem {
    std::size_t element{0};
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    Eigen::MatrixXd C;
    Eigen::MatrixXd D;
    Eigen::VectorXd rhs_interior;
    Eigen::VectorXd rhs_trace;
    Eigen::VectorXd boundary_traces;
    std::array<bool, 3> interior_face{};
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
};

inline constexpr double kMinLocalRcond = 1e-13;

[[nodiscard]] LocalSystem assemble_element(const Discretization& disc, std::size_t elem);

/// Factors A in place; throws LocalSingularity when the reciprocal condition estimate is below kMinLocalRcond.
void factor_local(LocalSystem& local);

/// Global coefficient vectors for one triple (flux, state, interior trace).
struct FieldSet {
    Eigen::VectorXd flux;   ///< per element [component 1 | component 2], each flux_dim
    Eigen::VectorXd state;  ///< per element state_dim
    Eigen::VectorXd trace;  ///< per interior face trace_dim

    [[nodiscard]] static FieldSet zeros(const Discretization& disc);
    [[nodiscard]] FieldSet operator-() const { return {-flux, -state, -trace}; }
};

/// B1(q, y, yhat; r1, w1, mu1) summed over the mesh by direct quadrature of every term.
[[nodiscard]] double b1_apply(const Discretization& disc, const FieldSet& u, const FieldSet& test);
/// B2(p, z, zhat; r2, w2, mu2).
[[nodiscard]] double b2_apply(const Discretization& disc, const FieldSet& u, const FieldSet& test);

/// L2 projections onto the discrete spaces, computed with a rule of exactness projection_exactness(degree).
[[nodiscard]] int projection_exactness(int degree);
/// Element-wise projection onto P^degree; per element coefficients in the TriBasis of that degree.
[[nodiscard]] Eigen::VectorXd project_volume(const Mesh& mesh, const ScalarField& fn, int degree);
/// Component-wise projection of a vector field onto [P^degree]^2 in the FieldSet flux layout.
[[nodiscard]] Eigen::VectorXd project_volume(const Mesh& mesh, const VectorField& fn, int degree);
/// Face-wise projection onto P^degree for every mesh face (global face numbering).
[[nodiscard]] Eigen::VectorXd project_face(const Mesh& mesh, const ScalarField& fn, int degree);
/// Restriction of face coefficients to the interior faces of a discretization.
[[nodiscard]] Eigen::VectorXd interior_traces(const Discretization& disc, const Eigen::VectorXd& all_faces);

} // namespace hdgoc
