#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace hdgoc {

struct Point {
    double x{0.0};
    double y{0.0};
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }

enum class FaceClass : std::uint8_t { Interior, Boundary };

/// Face of an element together with the sign relating its local
/// counter-clockwise traversal to the global (low index -> high index) orientation.
struct ElementFace {
    std::size_t face{0};
    int orientation{1};
};

/// Geometry of one face as seen from one of its elements.
struct FaceGeometry {
    Point normal;   ///< outward unit normal for the element
    double length{0.0};
    Point origin;   ///< x(0); x(s) = origin + s * direction, s in [0,1]
    Point direction;

    [[nodiscard]] Point at(double s) const { return origin + s * direction; }
};

/// Conforming triangulation of a polygonal domain.
///
/// Local face i of an element joins local vertices i and (i+1) % 3. Faces store
/// their vertex pair with the smaller vertex index first; that order fixes the
/// face parametrization shared by both neighbours.
struct Mesh {
    std::vector<Point> vertices;
    std::vector<std::array<std::size_t, 3>> elements;
    std::vector<std::array<std::size_t, 2>> faces;
    std::vector<FaceClass> face_class;
    std::vector<std::array<ElementFace, 3>> elem_faces;
    /// Incident elements per face; the second entry is npos for boundary faces.
    std::vector<std::array<std::size_t, 2>> face_elements;
    double h{0.0};

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    [[nodiscard]] std::size_t num_elements() const { return elements.size(); }
    [[nodiscard]] std::size_t num_faces() const { return faces.size(); }
    [[nodiscard]] std::size_t num_interior_faces() const;
    [[nodiscard]] bool is_boundary(std::size_t face) const { return face_class[face] == FaceClass::Boundary; }

    /// Twice the signed area of an element (the Jacobian determinant of its affine map).
    [[nodiscard]] double jacobian_det(std::size_t elem) const;
    [[nodiscard]] double diameter(std::size_t elem) const;
};

/// n x n squares on [0,1]^2, each split along the lower-left to upper-right diagonal.
[[nodiscard]] Mesh build_uniform(std::size_t n);

[[nodiscard]] FaceGeometry face_geometry(const Mesh& mesh, std::size_t elem, std::size_t local_face);

/// Affine map from the reference triangle (0,0),(1,0),(0,1) onto an element.
struct AffineMap {
    Point origin;
    std::array<double, 4> jac{};      ///< column-major [dx/dxi, dy/dxi, dx/deta, dy/deta]
    std::array<double, 4> inv_jac{};  ///< same layout, inverse
    double det{0.0};

    [[nodiscard]] Point to_physical(Point ref) const;
    [[nodiscard]] Point to_reference(Point phys) const;
    /// Maps a reference gradient to the physical gradient (J^{-T} g).
    [[nodiscard]] Point pull_gradient(Point ref_grad) const;
};

[[nodiscard]] AffineMap element_map(const Mesh& mesh, std::size_t elem);

} // namespace hdgoc
