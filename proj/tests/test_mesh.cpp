#include "hdgoc/error.hpp"
#include "hdgoc/mesh.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <utility>

using namespace hdgoc;

namespace {

std::size_t count_boundary(const Mesh& mesh)
{
    std::size_t count = 0;
    for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
        count += mesh.is_boundary(f) ? 1 : 0;
    }
    return count;
}

} // namespace

TEST(Mesh, SingleSquare)
{
    const Mesh mesh = build_uniform(1);
    EXPECT_EQ(mesh.num_elements(), 2u);
    EXPECT_EQ(mesh.num_faces(), 5u);
    EXPECT_EQ(mesh.num_interior_faces(), 1u);
    EXPECT_EQ(count_boundary(mesh), 4u);
}

TEST(Mesh, FourByFourCountsAndEuler)
{
    const Mesh mesh = build_uniform(4);
    EXPECT_EQ(mesh.num_elements(), 32u);
    EXPECT_EQ(mesh.num_faces(), 56u);
    EXPECT_EQ(mesh.num_interior_faces(), 40u);
    EXPECT_EQ(count_boundary(mesh), 16u);
    const auto euler = static_cast<long>(mesh.vertices.size()) - static_cast<long>(mesh.num_faces()) +
                       static_cast<long>(mesh.num_elements());
    EXPECT_EQ(euler, 1);
}

TEST(Mesh, CountFormulas)
{
    for (std::size_t n = 1; n <= 32; ++n) {
        const Mesh mesh = build_uniform(n);
        EXPECT_EQ(mesh.num_elements(), 2 * n * n) << n;
        EXPECT_EQ(mesh.num_faces(), 2 * n * (n + 1) + n * n) << n;
        EXPECT_EQ(count_boundary(mesh), 4 * n) << n;
    }
}

TEST(Mesh, MeshParameter)
{
    const Mesh mesh = build_uniform(16);
    EXPECT_DOUBLE_EQ(mesh.h, std::sqrt(2.0) / 16.0);
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        EXPECT_NEAR(mesh.diameter(e), mesh.h, 1e-15);
    }
}

TEST(Mesh, ZeroRefinementThrows)
{
    EXPECT_THROW((void)build_uniform(0), InvalidArgument);
}

TEST(Mesh, ElementsCounterClockwiseAndTileSquare)
{
    const Mesh mesh = build_uniform(5);
    double area = 0.0;
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        EXPECT_GT(mesh.jacobian_det(e), 0.0);
        area += 0.5 * mesh.jacobian_det(e);
    }
    EXPECT_NEAR(area, 1.0, 1e-14);
}

TEST(Mesh, ReferenceTriangleFaces)
{
    Mesh mesh;
    mesh.vertices = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    mesh.elements = {{0, 1, 2}};
    mesh.faces = {{0, 1}, {1, 2}, {0, 2}};
    mesh.elem_faces = {{ElementFace{0, 1}, ElementFace{1, 1}, ElementFace{2, -1}}};

    const FaceGeometry bottom = face_geometry(mesh, 0, 0);
    EXPECT_NEAR(bottom.normal.x, 0.0, 1e-15);
    EXPECT_NEAR(bottom.normal.y, -1.0, 1e-15);
    EXPECT_NEAR(bottom.length, 1.0, 1e-15);

    const FaceGeometry hyp = face_geometry(mesh, 0, 1);
    EXPECT_NEAR(hyp.normal.x, 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(hyp.normal.y, 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(hyp.length, std::sqrt(2.0), 1e-15);
}

TEST(Mesh, SharedFacesSeeOppositeNormalsAndSamePoints)
{
    const Mesh mesh = build_uniform(3);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
        const auto [e0, e1] = mesh.face_elements[f];
        if (mesh.is_boundary(f)) {
            EXPECT_EQ(e1, Mesh::npos);
            continue;
        }
        std::size_t l0 = 3, l1 = 3;
        for (std::size_t lf = 0; lf < 3; ++lf) {
            if (mesh.elem_faces[e0][lf].face == f) l0 = lf;
            if (mesh.elem_faces[e1][lf].face == f) l1 = lf;
        }
        ASSERT_LT(l0, 3u);
        ASSERT_LT(l1, 3u);
        EXPECT_EQ(mesh.elem_faces[e0][l0].orientation, -mesh.elem_faces[e1][l1].orientation);

        const FaceGeometry g0 = face_geometry(mesh, e0, l0);
        const FaceGeometry g1 = face_geometry(mesh, e1, l1);
        EXPECT_EQ(g0.normal.x, -g1.normal.x);
        EXPECT_EQ(g0.normal.y, -g1.normal.y);
        for (double s : {0.0, 0.3, 1.0}) {
            EXPECT_NEAR(g0.at(s).x, g1.at(s).x, 1e-15);
            EXPECT_NEAR(g0.at(s).y, g1.at(s).y, 1e-15);
        }
        seen.insert({e0, e1});
    }
    EXPECT_EQ(seen.size(), mesh.num_interior_faces());
}

TEST(Mesh, AffineMapRoundTrip)
{
    const Mesh mesh = build_uniform(4);
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const AffineMap map = element_map(mesh, e);
        EXPECT_NEAR(map.det, mesh.jacobian_det(e), 1e-15);
        const Point ref{0.2, 0.3};
        const Point back = map.to_reference(map.to_physical(ref));
        EXPECT_NEAR(back.x, ref.x, 1e-14);
        EXPECT_NEAR(back.y, ref.y, 1e-14);
        for (std::size_t i = 0; i < 3; ++i) {
            const Point corner = i == 0 ? Point{0, 0} : (i == 1 ? Point{1, 0} : Point{0, 1});
            const Point v = map.to_physical(corner);
            EXPECT_NEAR(v.x, mesh.vertices[mesh.elements[e][i]].x, 1e-15);
            EXPECT_NEAR(v.y, mesh.vertices[mesh.elements[e][i]].y, 1e-15);
        }
    }
}
