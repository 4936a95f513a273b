#include "hdgoc/analysis.hpp"

#include "hdgoc/error.hpp"

#include <algorithm>
#include <cmath>

namespace hdgoc {

std::string_view variable_name(Variable v)
{
    switch (v) {
    case Variable::Q:
        return "q";
    case Variable::P:
        return "p";
    case Variable::Y:
        return "y";
    case Variable::Z:
        return "z";
    case Variable::U:
        return "u";
    }
    return "?";
}

double l2_distance(const Mesh& mesh, const Eigen::VectorXd& coeffs, int degree, const ScalarField& exact,
                   int exactness)
{
    const TriBasis basis(degree);
    const QuadratureRule rule = tri_quadrature(exactness);
    const Table vals = basis.tabulate(rule.points);
    const auto dim = static_cast<Eigen::Index>(basis.dim());
    if (coeffs.size() != dim * static_cast<Eigen::Index>(mesh.num_elements())) {
        throw InvalidArgument("l2_distance: coefficient vector does not match mesh and degree");
    }

    // Element sums first, then a fixed-order reduction.
    std::vector<double> local(mesh.num_elements());
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const AffineMap map = element_map(mesh, e);
        const Eigen::VectorXd uh = vals.transpose() * coeffs.segment(static_cast<Eigen::Index>(e) * dim, dim);
        double s = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double d = exact(map.to_physical(rule.points[q])) - uh[static_cast<Eigen::Index>(q)];
            s += rule.weights[q] * d * d;
        }
        local[e] = s * map.det;
    }
    double total = 0.0;
    for (double v : local) {
        total += v;
    }
    return std::sqrt(total);
}

double l2_distance(const Mesh& mesh, const Eigen::VectorXd& coeffs, int degree, const VectorField& exact,
                   int exactness)
{
    const auto dim = static_cast<Eigen::Index>(TriBasis::dim_for(degree));
    const auto ne = static_cast<Eigen::Index>(mesh.num_elements());
    if (coeffs.size() != 2 * dim * ne) {
        throw InvalidArgument("l2_distance: flux coefficient vector does not match mesh and degree");
    }
    Eigen::VectorXd c1(dim * ne), c2(dim * ne);
    for (Eigen::Index e = 0; e < ne; ++e) {
        c1.segment(e * dim, dim) = coeffs.segment(2 * e * dim, dim);
        c2.segment(e * dim, dim) = coeffs.segment(2 * e * dim + dim, dim);
    }
    const double e1 = l2_distance(mesh, c1, degree, [&](Point x) { return exact(x).x; }, exactness);
    const double e2 = l2_distance(mesh, c2, degree, [&](Point x) { return exact(x).y; }, exactness);
    return std::sqrt(e1 * e1 + e2 * e2);
}

double l2_error(const DiscreteSolution& sol, const ProblemData& problem, Variable variable)
{
    if (!problem.exact) {
        throw InvalidArgument("l2_error: problem '" + problem.name + "' has no exact solution");
    }
    const ExactSolution& ex = *problem.exact;
    const Mesh& mesh = sol.disc->mesh();
    const int k = sol.k;
    const int exactness = sol.disc->reference().error_rule.exactness;
    const double gamma = problem.gamma;
    switch (variable) {
    case Variable::Q:
        return l2_distance(mesh, sol.q, k, [&](Point x) { return -1.0 * ex.grad_y(x); }, exactness);
    case Variable::P:
        return l2_distance(mesh, sol.p, k, [&](Point x) { return -1.0 * ex.grad_z(x); }, exactness);
    case Variable::Y:
        return l2_distance(mesh, sol.y, k + 1, ex.y, exactness);
    case Variable::Z:
        return l2_distance(mesh, sol.z, k + 1, ex.z, exactness);
    case Variable::U:
        return l2_distance(mesh, sol.u, k + 1, [&](Point x) { return ex.z(x) / gamma; }, exactness);
    }
    return 0.0;
}

std::vector<std::optional<double>> compute_rates(std::span<const double> errors)
{
    std::vector<std::optional<double>> rates(errors.size());
    for (std::size_t i = 1; i < errors.size(); ++i) {
        if (errors[i - 1] > kZeroErrorFloor && errors[i] > kZeroErrorFloor) {
            rates[i] = std::log2(errors[i - 1] / errors[i]);
        }
    }
    return rates;
}

void ConvergenceReport::finalize_rates()
{
    rates.assign(errors.size(), {});
    for (std::size_t v = 0; v < kAllVariables.size(); ++v) {
        std::vector<double> col(errors.size());
        for (std::size_t i = 0; i < errors.size(); ++i) {
            col[i] = errors[i][v];
        }
        const auto r = compute_rates(col);
        for (std::size_t i = 0; i < errors.size(); ++i) {
            rates[i][v] = r[i];
        }
    }
}

namespace {

/// Values of one (flux, state, trace) triple on one element, evaluated independently of the
/// operator code: volume flux/state, and per face the state, its face projection and the trace.
struct TripleValues {
    Eigen::VectorXd v1, v2, w;
    std::array<Eigen::VectorXd, 3> wf, pm_w, mu;
};

TripleValues evaluate_triple(const Discretization& disc, const ElementQuadrature& eq, std::size_t elem,
                             const FieldSet& f)
{
    const ReferenceElement& ref = disc.reference();
    const auto nv = static_cast<Eigen::Index>(ref.flux_dim());
    const auto nw = static_cast<Eigen::Index>(ref.state_dim());
    const auto nm = static_cast<Eigen::Index>(ref.trace_dim());
    const auto e = static_cast<Eigen::Index>(elem);

    TripleValues tv;
    tv.v1 = ref.flux_values.transpose() * f.flux.segment(2 * e * nv, nv);
    tv.v2 = ref.flux_values.transpose() * f.flux.segment(2 * e * nv + nv, nv);
    const Eigen::VectorXd cw = f.state.segment(e * nw, nw);
    tv.w = ref.state_values.transpose() * cw;
    for (std::size_t lf = 0; lf < 3; ++lf) {
        const FaceQuadrature& fq = eq.faces[lf];
        tv.wf[lf] = fq.state_values->transpose() * cw;
        // P_M w: face moments against the orthonormal trace basis, then resummed.
        Eigen::VectorXd mom = Eigen::VectorXd::Zero(nm);
        for (std::size_t q = 0; q < fq.s.size(); ++q) {
            const auto psi = ref.trace_basis.eval(fq.s[q]);
            for (Eigen::Index m = 0; m < nm; ++m) {
                mom[m] += ref.edge_rule.weights[q] * tv.wf[lf][static_cast<Eigen::Index>(q)] *
                          psi[static_cast<std::size_t>(m)];
            }
        }
        tv.pm_w[lf] = ref.trace_values.transpose() * mom;
        if (fq.interior) {
            const auto i = static_cast<Eigen::Index>(disc.interior_index(fq.face));
            tv.mu[lf] = ref.trace_values.transpose() * f.trace.segment(i * nm, nm);
        } else {
            tv.mu[lf] = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(fq.s.size()));
        }
    }
    return tv;
}

/// sign = +1: tau1 - beta.n / 2; sign = -1: tau2 + beta.n / 2.
double energy_identity(const Discretization& disc, const FieldSet& v, int sign)
{
    const double inv_h = 1.0 / disc.h();
    double total = 0.0;
    for (std::size_t e = 0; e < disc.mesh().num_elements(); ++e) {
        const ElementQuadrature eq = element_quadrature(disc, e);
        const TripleValues tv = evaluate_triple(disc, eq, e, v);
        for (std::size_t q = 0; q < eq.weights.size(); ++q) {
            const auto i = static_cast<Eigen::Index>(q);
            total += eq.weights[q] * (tv.v1[i] * tv.v1[i] + tv.v2[i] * tv.v2[i] -
                                      0.5 * eq.div_beta[q] * tv.w[i] * tv.w[i]);
        }
        for (std::size_t lf = 0; lf < 3; ++lf) {
            const FaceQuadrature& fq = eq.faces[lf];
            for (std::size_t q = 0; q < fq.s.size(); ++q) {
                const auto i = static_cast<Eigen::Index>(q);
                const double coef = sign > 0 ? fq.tau1[q] - 0.5 * fq.beta_n[q] : fq.tau2[q] + 0.5 * fq.beta_n[q];
                const double jump = tv.wf[lf][i] - tv.mu[lf][i];
                const double pjump = tv.pm_w[lf][i] - tv.mu[lf][i];
                total += fq.weights[q] * (coef * jump * jump + inv_h * pjump * pjump);
            }
        }
    }
    return total;
}

} // namespace

double energy_identity_b1(const Discretization& disc, const FieldSet& v) { return energy_identity(disc, v, +1); }

double energy_identity_b2(const Discretization& disc, const FieldSet& v) { return energy_identity(disc, v, -1); }

double flux_conservation_residual(const DiscreteSolution& sol)
{
    const Discretization& disc = *sol.disc;
    const ReferenceElement& ref = disc.reference();
    const auto nm = static_cast<Eigen::Index>(ref.trace_dim());
    const auto nf = static_cast<Eigen::Index>(disc.num_interior_faces());
    const double inv_h = 1.0 / disc.h();

    Eigen::VectorXd state_jump = Eigen::VectorXd::Zero(nf * nm);
    Eigen::VectorXd adjoint_jump = Eigen::VectorXd::Zero(nf * nm);
    const FieldSet sf = sol.state_fields();
    const FieldSet af = sol.adjoint_fields();

    for (std::size_t e = 0; e < disc.mesh().num_elements(); ++e) {
        const ElementQuadrature eq = element_quadrature(disc, e);
        const TripleValues st = evaluate_triple(disc, eq, e, sf);
        const TripleValues ad = evaluate_triple(disc, eq, e, af);
        const auto nv = static_cast<Eigen::Index>(ref.flux_dim());
        const auto ei = static_cast<Eigen::Index>(e);
        for (std::size_t lf = 0; lf < 3; ++lf) {
            const FaceQuadrature& fq = eq.faces[lf];
            if (!fq.interior) {
                continue;
            }
            const Point n = fq.geom.normal;
            const Eigen::VectorXd qn = n.x * (fq.flux_values->transpose() * sol.q.segment(2 * ei * nv, nv)) +
                                       n.y * (fq.flux_values->transpose() * sol.q.segment(2 * ei * nv + nv, nv));
            const Eigen::VectorXd pn = n.x * (fq.flux_values->transpose() * sol.p.segment(2 * ei * nv, nv)) +
                                       n.y * (fq.flux_values->transpose() * sol.p.segment(2 * ei * nv + nv, nv));
            const auto slot = static_cast<Eigen::Index>(disc.interior_index(fq.face)) * nm;
            for (std::size_t q = 0; q < fq.s.size(); ++q) {
                const auto i = static_cast<Eigen::Index>(q);
                const double qhat = qn[i] + inv_h * (st.pm_w[lf][i] - st.mu[lf][i]) +
                                    fq.tau1[q] * (st.wf[lf][i] - st.mu[lf][i]);
                const double phat = pn[i] + inv_h * (ad.pm_w[lf][i] - ad.mu[lf][i]) +
                                    fq.tau2[q] * (ad.wf[lf][i] - ad.mu[lf][i]);
                const double fy = qhat + fq.beta_n[q] * st.mu[lf][i];
                const double fz = phat - fq.beta_n[q] * ad.mu[lf][i];
                for (Eigen::Index m = 0; m < nm; ++m) {
                    const double psi = ref.trace_values(m, i);
                    state_jump[slot + m] += fq.weights[q] * fy * psi;
                    adjoint_jump[slot + m] += fq.weights[q] * fz * psi;
                }
            }
        }
    }
    if (state_jump.size() == 0) {
        return 0.0;
    }
    return std::max(state_jump.cwiseAbs().maxCoeff(), adjoint_jump.cwiseAbs().maxCoeff());
}

} // namespace hdgoc
