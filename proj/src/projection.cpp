#include "hdgoc/hdg_local.hpp"

#include "contract.hpp"

#include <algorithm>

namespace hdgoc {

int projection_exactness(int degree) { return std::min(2 * degree + 6, kMaxQuadratureExactness); }

// With a reference-orthonormal basis the physical mass matrix is det(J) I, so the
// projection coefficients are the reference moments of f.
Eigen::VectorXd project_volume(const Mesh& mesh, const ScalarField& fn, int degree)
{
    const TriBasis basis(degree);
    const QuadratureRule rule = tri_quadrature(projection_exactness(degree));
    const Table vals = basis.tabulate(rule.points);
    const auto dim = static_cast<Eigen::Index>(basis.dim());

    Eigen::VectorXd out(static_cast<Eigen::Index>(mesh.num_elements()) * dim);
    std::vector<double> fv(rule.size());
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const AffineMap map = element_map(mesh, e);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            fv[q] = fn(map.to_physical(rule.points[q]));
        }
        out.segment(static_cast<Eigen::Index>(e) * dim, dim) = detail::moments(vals, rule.weights, fv);
    }
    return out;
}

Eigen::VectorXd project_volume(const Mesh& mesh, const VectorField& fn, int degree)
{
    const auto dim = static_cast<Eigen::Index>(TriBasis::dim_for(degree));
    const Eigen::VectorXd c1 = project_volume(mesh, [&](Point x) { return fn(x).x; }, degree);
    const Eigen::VectorXd c2 = project_volume(mesh, [&](Point x) { return fn(x).y; }, degree);
    Eigen::VectorXd out(2 * c1.size());
    for (Eigen::Index e = 0; e < static_cast<Eigen::Index>(mesh.num_elements()); ++e) {
        out.segment(2 * e * dim, dim) = c1.segment(e * dim, dim);
        out.segment(2 * e * dim + dim, dim) = c2.segment(e * dim, dim);
    }
    return out;
}

Eigen::VectorXd project_face(const Mesh& mesh, const ScalarField& fn, int degree)
{
    const EdgeBasis basis(degree);
    const QuadratureRule rule = edge_quadrature(projection_exactness(degree));
    std::vector<double> s(rule.size());
    for (std::size_t q = 0; q < s.size(); ++q) {
        s[q] = rule.points[q].x;
    }
    const Table vals = basis.tabulate(s);
    const auto dim = static_cast<Eigen::Index>(basis.dim());

    Eigen::VectorXd out(static_cast<Eigen::Index>(mesh.num_faces()) * dim);
    std::vector<double> fv(rule.size());
    for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
        const Point a = mesh.vertices[mesh.faces[f][0]];
        const Point d = mesh.vertices[mesh.faces[f][1]] - a;
        for (std::size_t q = 0; q < s.size(); ++q) {
            fv[q] = fn(a + s[q] * d);
        }
        out.segment(static_cast<Eigen::Index>(f) * dim, dim) = detail::moments(vals, rule.weights, fv);
    }
    return out;
}

Eigen::VectorXd interior_traces(const Discretization& disc, const Eigen::VectorXd& all_faces)
{
    const auto nm = static_cast<Eigen::Index>(disc.reference().trace_dim());
    Eigen::VectorXd out(static_cast<Eigen::Index>(disc.trace_size()));
    for (std::size_t i = 0; i < disc.num_interior_faces(); ++i) {
        const auto f = static_cast<Eigen::Index>(disc.interior_faces()[i]);
        out.segment(static_cast<Eigen::Index>(i) * nm, nm) = all_faces.segment(f * nm, nm);
    }
    return out;
}

} // namespace hdgoc
