#include "hdgoc/basis.hpp"
#include "hdgoc/error.hpp"
#include "hdgoc/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

using namespace hdgoc;

namespace {

double factorial(int n)
{
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

double integrate(const QuadratureRule& rule, int a, int b)
{
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
        sum += rule.weights[q] * std::pow(rule.points[q].x, a) * std::pow(rule.points[q].y, b);
    }
    return sum;
}

double integrate_edge(const QuadratureRule& rule, int p)
{
    double sum = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) sum += rule.weights[q] * std::pow(rule.points[q].x, p);
    return sum;
}

} // namespace

TEST(Quadrature, TriangleExamples)
{
    const QuadratureRule rule = tri_quadrature(4);
    EXPECT_NEAR(integrate(rule, 0, 0), 0.5, 1e-15);
    EXPECT_NEAR(integrate(rule, 1, 1), 1.0 / 24.0, 1e-15);
    EXPECT_NEAR(integrate(rule, 4, 0), 1.0 / 30.0, 1e-15);
}

TEST(Quadrature, EdgeExamples)
{
    const QuadratureRule rule = edge_quadrature(2);
    EXPECT_NEAR(integrate_edge(rule, 0), 1.0, 1e-15);
    EXPECT_NEAR(integrate_edge(rule, 2), 1.0 / 3.0, 1e-15);

    std::vector<double> nodes, weights;
    gauss_legendre(3, nodes, weights);
    double sum = 0.0;
    for (std::size_t i = 0; i < 3; ++i) sum += weights[i] * std::pow(nodes[i], 5);
    EXPECT_NEAR(sum, 1.0 / 6.0, 1e-15);
}

TEST(Quadrature, MonomialExactness)
{
    for (int p = 0; p <= kMaxQuadratureExactness; ++p) {
        const QuadratureRule rule = tri_quadrature(p);
        EXPECT_GE(rule.exactness, p);
        for (int a = 0; a <= p; ++a) {
            for (int b = 0; a + b <= p; ++b) {
                const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
                EXPECT_NEAR(integrate(rule, a, b), exact, 1e-13) << p << " " << a << " " << b;
            }
        }
        const QuadratureRule edge = edge_quadrature(p);
        for (int a = 0; a <= p; ++a) {
            EXPECT_NEAR(integrate_edge(edge, a), 1.0 / (a + 1), 1e-14) << p << " " << a;
        }
    }
}

TEST(Quadrature, WeightsPositiveAndPointsInside)
{
    for (int p = 0; p <= kMaxQuadratureExactness; ++p) {
        const QuadratureRule rule = tri_quadrature(p);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            EXPECT_GT(rule.weights[q], 0.0);
            EXPECT_GE(rule.points[q].x, 0.0);
            EXPECT_GE(rule.points[q].y, 0.0);
            EXPECT_LE(rule.points[q].x + rule.points[q].y, 1.0);
        }
    }
}

TEST(Quadrature, UnsupportedExactnessThrows)
{
    EXPECT_THROW((void)tri_quadrature(kMaxQuadratureExactness + 1), UnsupportedDegree);
    EXPECT_THROW((void)edge_quadrature(kMaxQuadratureExactness + 1), UnsupportedDegree);
}

TEST(Basis, Dimensions)
{
    EXPECT_EQ(TriBasis(0).dim(), 1u);
    EXPECT_EQ(TriBasis(1).dim(), 3u);
    EXPECT_EQ(TriBasis(2).dim(), 6u);
    for (int k = 0; k <= 6; ++k) {
        EXPECT_EQ(TriBasis(k).dim(), static_cast<std::size_t>((k + 1) * (k + 2) / 2));
        EXPECT_EQ(EdgeBasis(k).dim(), static_cast<std::size_t>(k + 1));
    }
}

TEST(Basis, ConstantValue)
{
    const TriBasis basis(0);
    for (Point x : {Point{0.1, 0.2}, Point{0.0, 0.0}, Point{0.5, 0.5}}) {
        const auto v = basis.eval(x);
        ASSERT_EQ(v.size(), 1u);
        EXPECT_NEAR(v[0], std::sqrt(2.0), 1e-14);
    }
}

TEST(Basis, TriangleOrthonormal)
{
    for (int k = 0; k <= 6; ++k) {
        const TriBasis basis(k);
        const QuadratureRule rule = tri_quadrature(2 * k);
        const Table t = basis.tabulate(rule.points);
        Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(basis.dim()),
                                                     static_cast<Eigen::Index>(basis.dim()));
        for (Eigen::Index i = 0; i < gram.rows(); ++i) {
            for (Eigen::Index j = 0; j < gram.cols(); ++j) {
                for (std::size_t q = 0; q < rule.size(); ++q) {
                    const auto qi = static_cast<Eigen::Index>(q);
                    gram(i, j) += rule.weights[q] * t(i, qi) * t(j, qi);
                }
            }
        }
        EXPECT_LT((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff(), 1e-12)
            << "degree " << k;
    }
}

TEST(Basis, Nested)
{
    const TriBasis low(2);
    const TriBasis high(4);
    for (Point x : {Point{0.1, 0.7}, Point{0.33, 0.33}}) {
        const auto a = low.eval(x);
        const auto b = high.eval(x);
        for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
    }
}

TEST(Basis, EdgeOrthonormal)
{
    for (int k = 0; k <= 6; ++k) {
        const EdgeBasis basis(k);
        const QuadratureRule rule = edge_quadrature(2 * k);
        for (std::size_t i = 0; i < basis.dim(); ++i) {
            for (std::size_t j = 0; j < basis.dim(); ++j) {
                double sum = 0.0;
                for (std::size_t q = 0; q < rule.size(); ++q) {
                    const auto v = basis.eval(rule.points[q].x);
                    sum += rule.weights[q] * v[i] * v[j];
                }
                EXPECT_NEAR(sum, i == j ? 1.0 : 0.0, 1e-13);
            }
        }
    }
}

TEST(Basis, GradientMatchesFiniteDifference)
{
    const TriBasis basis(4);
    const double step = 1e-6;
    for (Point x : {Point{0.2, 0.3}, Point{0.6, 0.1}, Point{0.1, 0.1}}) {
        const auto grads = basis.eval_grad(x);
        const auto px = basis.eval({x.x + step, x.y});
        const auto mx = basis.eval({x.x - step, x.y});
        const auto py = basis.eval({x.x, x.y + step});
        const auto my = basis.eval({x.x, x.y - step});
        for (std::size_t i = 0; i < basis.dim(); ++i) {
            EXPECT_NEAR(grads[i].x, (px[i] - mx[i]) / (2 * step), 1e-6);
            EXPECT_NEAR(grads[i].y, (py[i] - my[i]) / (2 * step), 1e-6);
        }
    }
}

TEST(Basis, TabulateMatchesEval)
{
    const TriBasis basis(3);
    const QuadratureRule rule = tri_quadrature(5);
    const Table t = basis.tabulate(rule.points);
    Table dxi, deta;
    basis.tabulate_grad(rule.points, dxi, deta);
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const auto v = basis.eval(rule.points[q]);
        const auto g = basis.eval_grad(rule.points[q]);
        for (std::size_t i = 0; i < basis.dim(); ++i) {
            const auto r = static_cast<Eigen::Index>(i);
            const auto c = static_cast<Eigen::Index>(q);
            EXPECT_NEAR(t(r, c), v[i], 1e-12 * (1.0 + std::abs(v[i])));
            EXPECT_NEAR(dxi(r, c), g[i].x, 1e-12 * (1.0 + std::abs(g[i].x)));
            EXPECT_NEAR(deta(r, c), g[i].y, 1e-12 * (1.0 + std::abs(g[i].y)));
        }
    }
}

TEST(Basis, PointOutsideThrows)
{
    const TriBasis basis(1);
    EXPECT_THROW((void)basis.eval({0.8, 0.8}), InvalidArgument);
    EXPECT_THROW((void)basis.eval({-0.1, 0.2}), InvalidArgument);
    EXPECT_THROW((void)TriBasis(-1), InvalidArgument);
}

TEST(Basis, LegendreValues)
{
    std::vector<double> v(4), d(4);
    legendre(3, 0.5, v, d);
    EXPECT_NEAR(v[2], 0.5 * (3 * 0.25 - 1), 1e-15);
    EXPECT_NEAR(v[3], 0.5 * (5 * 0.125 - 3 * 0.5), 1e-15);
    EXPECT_NEAR(d[3], 0.5 * (15 * 0.25 - 3), 1e-15);
}
