#include "hdgoc/hdg_local.hpp"

#include "contract.hpp"
#include "hdgoc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hdgoc {

using detail::gram;
using detail::moments;
using detail::scaled;

StabilizationConfig StabilizationConfig::constant(double tau2_value, Tau1Rule rule)
{
    StabilizationConfig cfg;
    cfg.tau2 = [tau2_value](Point, Point) { return tau2_value; };
    cfg.tau1_rule = rule;
    return cfg;
}

namespace {

constexpr std::array<Point, 3> kRefVertices{Point{0.0, 0.0}, Point{1.0, 0.0}, Point{0.0, 1.0}};

int checked_degree(int k)
{
    if (k < 0) {
        throw InvalidArgument("polynomial degree k must be non-negative");
    }
    return k;
}

} // namespace

Point ReferenceElement::face_point(std::size_t local_face, int orientation, double s)
{
    const Point a = kRefVertices[local_face];
    const Point b = kRefVertices[(local_face + 1) % 3];
    return orientation > 0 ? a + s * (b - a) : b + s * (a - b);
}

ReferenceElement::ReferenceElement(int degree)
    : k(checked_degree(degree)),
      flux_basis(degree),
      state_basis(degree + 1),
      trace_basis(degree),
      volume_rule(tri_quadrature(2 * (degree + 2) + 2)),
      edge_rule(edge_quadrature(2 * (degree + 1) + 2)),
      error_rule(tri_quadrature(2 * (degree + 2) + 6))
{
    flux_values = flux_basis.tabulate(volume_rule.points);
    state_values = state_basis.tabulate(volume_rule.points);
    flux_basis.tabulate_grad(volume_rule.points, flux_dxi, flux_deta);
    state_basis.tabulate_grad(volume_rule.points, state_dxi, state_deta);

    std::vector<double> s(edge_rule.size());
    for (std::size_t q = 0; q < s.size(); ++q) {
        s[q] = edge_rule.points[q].x;
    }
    trace_values = trace_basis.tabulate(s);

    for (std::size_t lf = 0; lf < 3; ++lf) {
        for (int o = 0; o < 2; ++o) {
            std::vector<Point> pts(s.size());
            for (std::size_t q = 0; q < s.size(); ++q) {
                pts[q] = face_point(lf, o == 1 ? 1 : -1, s[q]);
            }
            face_flux_values[lf][o] = flux_basis.tabulate(pts);
            face_state_values[lf][o] = state_basis.tabulate(pts);
        }
    }
}

LocalLayout::LocalLayout(const ReferenceElement& ref)
    : nv(static_cast<Eigen::Index>(ref.flux_dim())),
      nw(static_cast<Eigen::Index>(ref.state_dim())),
      nm(static_cast<Eigen::Index>(ref.trace_dim())),
      q1(0),
      q2(nv),
      y(2 * nv),
      p1(2 * nv + nw),
      p2(3 * nv + nw),
      z(4 * nv + nw),
      interior_size(4 * nv + 2 * nw),
      trace_size(6 * nm)
{
}

Discretization::Discretization(const Mesh& mesh, const ProblemData& problem, int k, StabilizationConfig stab)
    : mesh_(&mesh), problem_(&problem), stab_(std::move(stab)), ref_(k), layout_(ref_)
{
    if (!(problem.gamma > 0.0)) {
        throw InvalidArgument("gamma must be positive");
    }
    interior_index_.assign(mesh.num_faces(), Mesh::npos);
    for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
        if (!mesh.is_boundary(f)) {
            interior_index_[f] = interior_faces_.size();
            interior_faces_.push_back(f);
        }
    }
}

std::size_t Discretization::flux_size() const { return mesh_->num_elements() * 2 * ref_.flux_dim(); }
std::size_t Discretization::state_size() const { return mesh_->num_elements() * ref_.state_dim(); }
std::size_t Discretization::trace_size() const { return interior_faces_.size() * ref_.trace_dim(); }

ElementQuadrature element_quadrature(const Discretization& disc, std::size_t elem)
{
    const Mesh& mesh = disc.mesh();
    const ProblemData& prob = disc.problem();
    const ReferenceElement& ref = disc.reference();

    ElementQuadrature eq;
    eq.map = element_map(mesh, elem);
    const double det = eq.map.det;
    const std::size_t nq = ref.volume_rule.size();
    eq.x.resize(nq);
    eq.weights.resize(nq);
    eq.beta.resize(nq);
    eq.div_beta.resize(nq);
    for (std::size_t q = 0; q < nq; ++q) {
        eq.x[q] = eq.map.to_physical(ref.volume_rule.points[q]);
        eq.weights[q] = ref.volume_rule.weights[q] * det;
        eq.beta[q] = prob.beta(eq.x[q]);
        eq.div_beta[q] = prob.div_beta(eq.x[q]);
    }
    const auto& ij = eq.map.inv_jac;
    eq.flux_dx = ij[0] * ref.flux_dxi + ij[1] * ref.flux_deta;
    eq.flux_dy = ij[2] * ref.flux_dxi + ij[3] * ref.flux_deta;
    eq.state_dx = ij[0] * ref.state_dxi + ij[1] * ref.state_deta;
    eq.state_dy = ij[2] * ref.state_dxi + ij[3] * ref.state_deta;

    const std::size_t ne = ref.edge_rule.size();
    for (std::size_t lf = 0; lf < 3; ++lf) {
        FaceQuadrature& fq = eq.faces[lf];
        const ElementFace ef = mesh.elem_faces[elem][lf];
        fq.geom = face_geometry(mesh, elem, lf);
        fq.face = ef.face;
        fq.interior = !mesh.is_boundary(ef.face);
        fq.s.resize(ne);
        fq.x.resize(ne);
        fq.weights.resize(ne);
        fq.beta_n.resize(ne);
        fq.tau1.resize(ne);
        fq.tau2.resize(ne);
        for (std::size_t q = 0; q < ne; ++q) {
            fq.s[q] = ref.edge_rule.points[q].x;
            fq.x[q] = fq.geom.at(fq.s[q]);
            fq.weights[q] = ref.edge_rule.weights[q] * fq.geom.length;
            fq.beta_n[q] = dot(prob.beta(fq.x[q]), fq.geom.normal);
            fq.tau2[q] = disc.stabilization().tau2(fq.x[q], fq.geom.normal);
            fq.tau1[q] = disc.stabilization().tau1(fq.tau2[q], fq.beta_n[q]);
        }
        const int o = ef.orientation > 0 ? 1 : 0;
        fq.flux_values = &ref.face_flux_values[lf][o];
        fq.state_values = &ref.face_state_values[lf][o];
    }
    return eq;
}

namespace {

void check_stabilization(const ElementQuadrature& eq, std::size_t elem)
{
    double worst1 = std::numeric_limits<double>::infinity();
    double worst2 = std::numeric_limits<double>::infinity();
    for (const FaceQuadrature& fq : eq.faces) {
        for (std::size_t q = 0; q < fq.s.size(); ++q) {
            worst1 = std::min(worst1, fq.tau1[q] - 0.5 * fq.beta_n[q]);
            worst2 = std::min(worst2, fq.tau2[q] + 0.5 * fq.beta_n[q]);
        }
    }
    if (!(worst1 > 0.0) || !(worst2 > 0.0)) {
        throw StabilizationInvalid("stabilization violates positivity on element " + std::to_string(elem) +
                                   ": min(tau1 - beta.n/2) = " + std::to_string(worst1) +
                                   ", min(tau2 + beta.n/2) = " + std::to_string(worst2));
    }
}

} // namespace

void Discretization::check_stabilization(std::size_t elem) const
{
    hdgoc::check_stabilization(element_quadrature(*this, elem), elem);
}

void Discretization::check_stabilization() const
{
    for (std::size_t e = 0; e < mesh_->num_elements(); ++e) {
        check_stabilization(e);
    }
}

void factor_local(LocalSystem& local)
{
    local.lu.compute(local.A);
    // rcond() reports 1 when a pivot is exactly zero, so screen the pivots first.
    const Eigen::VectorXd pivots = local.lu.matrixLU().diagonal().cwiseAbs();
    const bool broken = pivots.size() > 0 && (!(pivots.minCoeff() > 0.0) || !pivots.allFinite());
    const double rcond = broken ? 0.0 : local.lu.rcond();
    if (!(rcond >= kMinLocalRcond)) {
        throw LocalSingularity(local.element, rcond);
    }
}

LocalSystem assemble_element(const Discretization& disc, std::size_t elem)
{
    const ReferenceElement& ref = disc.reference();
    const LocalLayout& L = disc.layout();
    const ProblemData& prob = disc.problem();
    const ElementQuadrature eq = element_quadrature(disc, elem);
    check_stabilization(eq, elem);

    const double inv_h = 1.0 / disc.h();
    const double inv_gamma = 1.0 / prob.gamma;
    const Eigen::Index nv = L.nv;
    const Eigen::Index nw = L.nw;
    const Eigen::Index nm = L.nm;

    LocalSystem ls;
    ls.element = elem;
    ls.A = Eigen::MatrixXd::Zero(L.interior_size, L.interior_size);
    ls.B = Eigen::MatrixXd::Zero(L.interior_size, L.trace_size);
    ls.C = Eigen::MatrixXd::Zero(L.trace_size, L.interior_size);
    ls.D = Eigen::MatrixXd::Zero(L.trace_size, L.trace_size);
    ls.rhs_interior = Eigen::VectorXd::Zero(L.interior_size);
    ls.rhs_trace = Eigen::VectorXd::Zero(L.trace_size);
    ls.boundary_traces = Eigen::VectorXd::Zero(L.trace_size);

    auto& A = ls.A;
    const Table& V = ref.flux_values;
    const Table& W = ref.state_values;
    const std::span<const double> w = eq.weights;

    // Volume terms.
    const Table mass_v = gram(V, V, w);
    const Table mass_w = gram(W, W, w);
    const Table div_vx = gram(eq.flux_dx, W, w);  // (d r/dx, y)
    const Table div_vy = gram(eq.flux_dy, W, w);
    const Table grad_wx = gram(eq.state_dx, V, w);  // (q, d w/dx)
    const Table grad_wy = gram(eq.state_dy, V, w);
    const auto wbx = scaled(w, [&](std::size_t q) { return eq.beta[q].x; });
    const auto wby = scaled(w, [&](std::size_t q) { return eq.beta[q].y; });
    const auto wdiv = scaled(w, [&](std::size_t q) { return eq.div_beta[q]; });
    const Table convect = gram(eq.state_dx, W, wbx) + gram(eq.state_dy, W, wby);  // (beta y, grad w)

    A.block(L.q1, L.q1, nv, nv) += mass_v;
    A.block(L.q2, L.q2, nv, nv) += mass_v;
    A.block(L.q1, L.y, nv, nw) -= div_vx;
    A.block(L.q2, L.y, nv, nw) -= div_vy;
    A.block(L.y, L.q1, nw, nv) -= grad_wx;
    A.block(L.y, L.q2, nw, nv) -= grad_wy;
    A.block(L.y, L.y, nw, nw) -= convect + gram(W, W, wdiv);
    A.block(L.y, L.z, nw, nw) -= inv_gamma * mass_w;  // u_h = z_h / gamma

    A.block(L.p1, L.p1, nv, nv) += mass_v;
    A.block(L.p2, L.p2, nv, nv) += mass_v;
    A.block(L.p1, L.z, nv, nw) -= div_vx;
    A.block(L.p2, L.z, nv, nw) -= div_vy;
    A.block(L.z, L.p1, nw, nv) -= grad_wx;
    A.block(L.z, L.p2, nw, nv) -= grad_wy;
    A.block(L.z, L.z, nw, nw) += convect;
    A.block(L.z, L.y, nw, nw) += mass_w;

    std::vector<double> fvals(w.size()), ydvals(w.size());
    for (std::size_t q = 0; q < w.size(); ++q) {
        fvals[q] = prob.f(eq.x[q]);
        ydvals[q] = prob.y_d(eq.x[q]);
    }
    ls.rhs_interior.segment(L.y, nw) = moments(W, w, fvals);
    ls.rhs_interior.segment(L.z, nw) = moments(W, w, ydvals);

    // Face terms.
    const Table& psi = ref.trace_values;
    for (std::size_t lf = 0; lf < 3; ++lf) {
        const FaceQuadrature& fq = eq.faces[lf];
        const Table& Vf = *fq.flux_values;
        const Table& Wf = *fq.state_values;
        const std::span<const double> ws = fq.weights;
        const Point n = fq.geom.normal;
        const std::size_t nq = ws.size();

        const auto wnx = scaled(ws, [&](std::size_t) { return n.x; });
        const auto wny = scaled(ws, [&](std::size_t) { return n.y; });
        const auto wtau1 = scaled(ws, [&](std::size_t q) { return fq.tau1[q]; });
        const auto wtau2 = scaled(ws, [&](std::size_t q) { return fq.tau2[q]; });
        // <h^{-1} P_M y, w> = (1 / (h |e|)) E^T E with E = <psi, w>_e
        const Table proj = gram(psi, Wf, ws);
        const Eigen::MatrixXd penalty = (inv_h / fq.geom.length) * (proj.transpose() * proj);

        const Table qn_w_x = gram(Wf, Vf, wnx);
        const Table qn_w_y = gram(Wf, Vf, wny);
        A.block(L.y, L.q1, nw, nv) += qn_w_x;
        A.block(L.y, L.q2, nw, nv) += qn_w_y;
        A.block(L.y, L.y, nw, nw) += gram(Wf, Wf, wtau1) + penalty;
        A.block(L.z, L.p1, nw, nv) += qn_w_x;
        A.block(L.z, L.p2, nw, nv) += qn_w_y;
        A.block(L.z, L.z, nw, nw) += gram(Wf, Wf, wtau2) + penalty;

        const Eigen::Index yh = L.yhat(lf);
        const Eigen::Index zh = L.zhat(lf);
        const auto wy = scaled(ws, [&](std::size_t q) { return fq.beta_n[q] - inv_h - fq.tau1[q]; });
        const auto wz = scaled(ws, [&](std::size_t q) { return fq.beta_n[q] + inv_h + fq.tau2[q]; });
        const Table rn_x = gram(Vf, psi, wnx);
        const Table rn_y = gram(Vf, psi, wny);
        ls.B.block(L.q1, yh, nv, nm) += rn_x;
        ls.B.block(L.q2, yh, nv, nm) += rn_y;
        ls.B.block(L.y, yh, nw, nm) += gram(Wf, psi, wy);
        ls.B.block(L.p1, zh, nv, nm) += rn_x;
        ls.B.block(L.p2, zh, nv, nm) += rn_y;
        ls.B.block(L.z, zh, nw, nm) -= gram(Wf, psi, wz);

        if (fq.interior) {
            ls.interior_face[lf] = true;
            const auto wpen1 = scaled(ws, [&](std::size_t q) { return inv_h + fq.tau1[q]; });
            const auto wpen2 = scaled(ws, [&](std::size_t q) { return inv_h + fq.tau2[q]; });
            const Table mu_qn_x = rn_x.transpose();
            const Table mu_qn_y = rn_y.transpose();
            ls.C.block(yh, L.q1, nm, nv) -= mu_qn_x;
            ls.C.block(yh, L.q2, nm, nv) -= mu_qn_y;
            ls.C.block(yh, L.y, nm, nw) -= gram(psi, Wf, wpen1);
            ls.C.block(zh, L.p1, nm, nv) -= mu_qn_x;
            ls.C.block(zh, L.p2, nm, nv) -= mu_qn_y;
            ls.C.block(zh, L.z, nm, nw) -= gram(psi, Wf, wpen2);
            ls.D.block(yh, yh, nm, nm) -= gram(psi, psi, wy);
            ls.D.block(zh, zh, nm, nm) += gram(psi, psi, wz);
        } else {
            // yhat = P_M g and zhat = 0 on the boundary; both folded into the element rhs.
            std::vector<double> gvals(nq);
            std::vector<double> unit(nq);
            for (std::size_t q = 0; q < nq; ++q) {
                gvals[q] = prob.g(fq.x[q]);
                unit[q] = ref.edge_rule.weights[q];
            }
            const Eigen::VectorXd pm_g = moments(psi, unit, gvals);
            ls.boundary_traces.segment(yh, nm) = pm_g;
            ls.rhs_interior -= ls.B.middleCols(yh, nm) * pm_g;
        }
    }

    factor_local(ls);
    return ls;
}

FieldSet FieldSet::zeros(const Discretization& disc)
{
    return {Eigen::VectorXd::Zero(static_cast<Eigen::Index>(disc.flux_size())),
            Eigen::VectorXd::Zero(static_cast<Eigen::Index>(disc.state_size())),
            Eigen::VectorXd::Zero(static_cast<Eigen::Index>(disc.trace_size()))};
}

namespace {

void check_sizes(const Discretization& disc, const FieldSet& f, const char* what)
{
    if (static_cast<std::size_t>(f.flux.size()) != disc.flux_size() ||
        static_cast<std::size_t>(f.state.size()) != disc.state_size() ||
        static_cast<std::size_t>(f.trace.size()) != disc.trace_size()) {
        throw InvalidArgument(std::string(what) + ": coefficient vector sizes do not match the discretization");
    }
}

/// Field values of one element needed by the bilinear forms.
struct LocalValues {
    Eigen::VectorXd v1, v2, div_v;  ///< flux components and divergence at volume points
    Eigen::VectorXd w, w_dx, w_dy;  ///< state and gradient at volume points
    std::array<Eigen::VectorXd, 3> vn, wf, pm_w, mu;  ///< per face: flux.n, state, P_M state, trace
};

LocalValues evaluate(const Discretization& disc, const ElementQuadrature& eq, std::size_t elem,
                     const FieldSet& f)
{
    const ReferenceElement& ref = disc.reference();
    const auto nv = static_cast<Eigen::Index>(ref.flux_dim());
    const auto nw = static_cast<Eigen::Index>(ref.state_dim());
    const auto nm = static_cast<Eigen::Index>(ref.trace_dim());
    const auto e = static_cast<Eigen::Index>(elem);

    const Eigen::VectorXd c1 = f.flux.segment(e * 2 * nv, nv);
    const Eigen::VectorXd c2 = f.flux.segment(e * 2 * nv + nv, nv);
    const Eigen::VectorXd cw = f.state.segment(e * nw, nw);

    LocalValues lv;
    lv.v1 = ref.flux_values.transpose() * c1;
    lv.v2 = ref.flux_values.transpose() * c2;
    lv.div_v = eq.flux_dx.transpose() * c1 + eq.flux_dy.transpose() * c2;
    lv.w = ref.state_values.transpose() * cw;
    lv.w_dx = eq.state_dx.transpose() * cw;
    lv.w_dy = eq.state_dy.transpose() * cw;

    const Eigen::Map<const Eigen::VectorXd> unit(ref.edge_rule.weights.data(),
                                                 static_cast<Eigen::Index>(ref.edge_rule.size()));
    for (std::size_t lf = 0; lf < 3; ++lf) {
        const FaceQuadrature& fq = eq.faces[lf];
        const Point n = fq.geom.normal;
        lv.vn[lf] = n.x * (fq.flux_values->transpose() * c1) + n.y * (fq.flux_values->transpose() * c2);
        lv.wf[lf] = fq.state_values->transpose() * cw;
        const Eigen::VectorXd pm = ref.trace_values * unit.cwiseProduct(lv.wf[lf]);
        lv.pm_w[lf] = ref.trace_values.transpose() * pm;
        if (fq.interior) {
            const auto i = static_cast<Eigen::Index>(disc.interior_index(fq.face));
            lv.mu[lf] = ref.trace_values.transpose() * f.trace.segment(i * nm, nm);
        } else {
            lv.mu[lf] = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(fq.s.size()));
        }
    }
    return lv;
}

/// sign = +1 gives B1 (state), sign = -1 gives B2 (adjoint).
double b_apply(const Discretization& disc, const FieldSet& u, const FieldSet& t, int sign)
{
    const double inv_h = 1.0 / disc.h();
    const bool state = sign > 0;
    double total = 0.0;
    for (std::size_t e = 0; e < disc.mesh().num_elements(); ++e) {
        const ElementQuadrature eq = element_quadrature(disc, e);
        const LocalValues a = evaluate(disc, eq, e, u);
        const LocalValues b = evaluate(disc, eq, e, t);

        double vol = 0.0;
        for (std::size_t q = 0; q < eq.weights.size(); ++q) {
            const auto i = static_cast<Eigen::Index>(q);
            const double bx = eq.beta[q].x;
            const double by = eq.beta[q].y;
            double term = a.v1[i] * b.v1[i] + a.v2[i] * b.v2[i] - a.w[i] * b.div_v[i] -
                          (a.v1[i] + sign * bx * a.w[i]) * b.w_dx[i] -
                          (a.v2[i] + sign * by * a.w[i]) * b.w_dy[i];
            if (state) {
                term -= eq.div_beta[q] * a.w[i] * b.w[i];
            }
            vol += eq.weights[q] * term;
        }
        total += vol;

        for (std::size_t lf = 0; lf < 3; ++lf) {
            const FaceQuadrature& fq = eq.faces[lf];
            const std::vector<double>& tau = state ? fq.tau1 : fq.tau2;
            double face = 0.0;
            for (std::size_t q = 0; q < fq.s.size(); ++q) {
                const auto i = static_cast<Eigen::Index>(q);
                double term = (a.vn[lf][i] + inv_h * a.pm_w[lf][i] + tau[q] * a.wf[lf][i]) * b.wf[lf][i];
                if (fq.interior) {
                    const double bn = fq.beta_n[q];
                    const double hat = a.mu[lf][i];
                    term += hat * b.vn[lf][i];
                    if (state) {
                        term += (bn - inv_h - tau[q]) * hat * b.wf[lf][i];
                    } else {
                        term -= (bn + inv_h + tau[q]) * hat * b.wf[lf][i];
                    }
                    const double flux = a.vn[lf][i] + sign * bn * hat + inv_h * (a.pm_w[lf][i] - hat) +
                                        tau[q] * (a.wf[lf][i] - hat);
                    term -= flux * b.mu[lf][i];
                }
                face += fq.weights[q] * term;
            }
            total += face;
        }
    }
    return total;
}

} // namespace

double b1_apply(const Discretization& disc, const FieldSet& u, const FieldSet& test)
{
    check_sizes(disc, u, "b1_apply");
    check_sizes(disc, test, "b1_apply");
    return b_apply(disc, u, test, +1);
}

double b2_apply(const Discretization& disc, const FieldSet& u, const FieldSet& test)
{
    check_sizes(disc, u, "b2_apply");
    check_sizes(disc, test, "b2_apply");
    return b_apply(disc, u, test, -1);
}

} // namespace hdgoc
