#include "hdgoc/assembly.hpp"

#include "hdgoc/error.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <limits>

namespace hdgoc {

namespace {

/// Global dof of each local trace slot, or npos for boundary faces.
std::vector<std::size_t> local_to_global(const Discretization& disc, const TraceDofMap& map, std::size_t elem)
{
    const LocalLayout& L = disc.layout();
    std::vector<std::size_t> g(static_cast<std::size_t>(L.trace_size), Mesh::npos);
    for (std::size_t lf = 0; lf < 3; ++lf) {
        const std::size_t ii = disc.interior_index(disc.mesh().elem_faces[elem][lf].face);
        if (ii == Mesh::npos) {
            continue;
        }
        for (std::size_t m = 0; m < map.trace_dim; ++m) {
            g[static_cast<std::size_t>(L.yhat(lf)) + m] = map.dof(ii, TraceVariable::YHat, m);
            g[static_cast<std::size_t>(L.zhat(lf)) + m] = map.dof(ii, TraceVariable::ZHat, m);
        }
    }
    return g;
}

TraceDofMap make_dof_map(const Discretization& disc)
{
    return {disc.reference().trace_dim(), disc.num_interior_faces()};
}

} // namespace

std::vector<LocalSystem> assemble_local_systems(const Discretization& disc)
{
    std::vector<LocalSystem> locals;
    locals.reserve(disc.mesh().num_elements());
    for (std::size_t e = 0; e < disc.mesh().num_elements(); ++e) {
        locals.push_back(assemble_element(disc, e));
    }
    return locals;
}

GlobalTraceSystem condense(const std::vector<LocalSystem>& locals, const Discretization& disc)
{
    GlobalTraceSystem sys;
    sys.dofs = make_dof_map(disc);
    const auto n = static_cast<Eigen::Index>(sys.dofs.size());
    sys.rhs = Eigen::VectorXd::Zero(n);

    const auto t = static_cast<std::size_t>(disc.layout().trace_size);
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(locals.size() * t * t / 2);

    for (const LocalSystem& ls : locals) {
        const std::vector<std::size_t> g = local_to_global(disc, sys.dofs, ls.element);
        const Eigen::MatrixXd ainv_b = ls.lu.solve(ls.B);
        const Eigen::VectorXd ainv_f = ls.lu.solve(ls.rhs_interior);
        const Eigen::MatrixXd schur = ls.D - ls.C * ainv_b;
        const Eigen::VectorXd r = ls.rhs_trace - ls.C * ainv_f;
        for (std::size_t i = 0; i < t; ++i) {
            if (g[i] == Mesh::npos) {
                continue;
            }
            sys.rhs[static_cast<Eigen::Index>(g[i])] += r[static_cast<Eigen::Index>(i)];
            for (std::size_t j = 0; j < t; ++j) {
                if (g[j] == Mesh::npos) {
                    continue;
                }
                triplets.emplace_back(static_cast<int>(g[i]), static_cast<int>(g[j]),
                                      schur(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
            }
        }
    }
    sys.matrix.resize(n, n);
    sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
    sys.matrix.makeCompressed();
    return sys;
}

double relative_residual(const GlobalTraceSystem& system, const Eigen::VectorXd& x)
{
    const double bnorm = system.rhs.norm();
    return (system.matrix * x - system.rhs).norm() / std::max(bnorm, 1.0);
}

Eigen::VectorXd solve_traces(const GlobalTraceSystem& system)
{
    if (system.matrix.rows() == 0) {
        return Eigen::VectorXd::Zero(0);
    }
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(system.matrix);
    lu.factorize(system.matrix);
    if (lu.info() != Eigen::Success) {
        throw SolverFailure("sparse LU factorization of the trace system failed: " + lu.lastErrorMessage(),
                            std::numeric_limits<double>::infinity());
    }
    Eigen::VectorXd x = lu.solve(system.rhs);
    const double res = relative_residual(system, x);
    if (lu.info() != Eigen::Success || !(res <= kTraceSolveTolerance)) {
        throw SolverFailure("trace solve did not reach the residual tolerance", res);
    }
    return x;
}

DiscreteSolution recover(const Eigen::VectorXd& traces, const std::vector<LocalSystem>& locals,
                         const Discretization& disc)
{
    const LocalLayout& L = disc.layout();
    const TraceDofMap map = make_dof_map(disc);
    if (static_cast<std::size_t>(traces.size()) != map.size()) {
        throw InvalidArgument("recover: trace vector has the wrong size");
    }

    DiscreteSolution sol;
    sol.disc = &disc;
    sol.k = disc.degree();
    sol.q.resize(static_cast<Eigen::Index>(disc.flux_size()));
    sol.p.resize(sol.q.size());
    sol.y.resize(static_cast<Eigen::Index>(disc.state_size()));
    sol.z.resize(sol.y.size());
    sol.yhat.resize(static_cast<Eigen::Index>(disc.trace_size()));
    sol.zhat.resize(sol.yhat.size());

    const Eigen::Index nv = L.nv;
    const Eigen::Index nw = L.nw;
    const Eigen::Index nm = L.nm;
    for (const LocalSystem& ls : locals) {
        const std::vector<std::size_t> g = local_to_global(disc, map, ls.element);
        Eigen::VectorXd lambda = Eigen::VectorXd::Zero(L.trace_size);
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g[i] != Mesh::npos) {
                lambda[static_cast<Eigen::Index>(i)] = traces[static_cast<Eigen::Index>(g[i])];
            }
        }
        const Eigen::VectorXd x = ls.lu.solve(ls.rhs_interior - ls.B * lambda);
        const auto e = static_cast<Eigen::Index>(ls.element);
        sol.q.segment(2 * e * nv, 2 * nv) = x.segment(L.q1, 2 * nv);
        sol.y.segment(e * nw, nw) = x.segment(L.y, nw);
        sol.p.segment(2 * e * nv, 2 * nv) = x.segment(L.p1, 2 * nv);
        sol.z.segment(e * nw, nw) = x.segment(L.z, nw);
    }
    for (std::size_t i = 0; i < disc.num_interior_faces(); ++i) {
        for (std::size_t m = 0; m < map.trace_dim; ++m) {
            const auto slot = static_cast<Eigen::Index>(i) * nm + static_cast<Eigen::Index>(m);
            sol.yhat[slot] = traces[static_cast<Eigen::Index>(map.dof(i, TraceVariable::YHat, m))];
            sol.zhat[slot] = traces[static_cast<Eigen::Index>(map.dof(i, TraceVariable::ZHat, m))];
        }
    }
    sol.u = sol.z / disc.problem().gamma;
    return sol;
}

DiscreteSolution solve(const Discretization& disc)
{
    const std::vector<LocalSystem> locals = assemble_local_systems(disc);
    const GlobalTraceSystem sys = condense(locals, disc);
    return recover(solve_traces(sys), locals, disc);
}

double compute_cost(const DiscreteSolution& solution, const ProblemData& problem)
{
    const Discretization& disc = *solution.disc;
    const ReferenceElement& ref = disc.reference();
    const QuadratureRule& rule = ref.error_rule;
    const Table vals = ref.state_basis.tabulate(rule.points);
    const auto nw = static_cast<Eigen::Index>(ref.state_dim());

    double misfit = 0.0;
    double control = 0.0;
    for (std::size_t e = 0; e < disc.mesh().num_elements(); ++e) {
        const AffineMap map = element_map(disc.mesh(), e);
        const auto ei = static_cast<Eigen::Index>(e);
        const Eigen::VectorXd yh = vals.transpose() * solution.y.segment(ei * nw, nw);
        const Eigen::VectorXd uh = vals.transpose() * solution.u.segment(ei * nw, nw);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double w = rule.weights[q] * map.det;
            const double d = yh[static_cast<Eigen::Index>(q)] - problem.y_d(map.to_physical(rule.points[q]));
            misfit += w * d * d;
            control += w * uh[static_cast<Eigen::Index>(q)] * uh[static_cast<Eigen::Index>(q)];
        }
    }
    return 0.5 * misfit + 0.5 * problem.gamma * control;
}

} // namespace hdgoc
