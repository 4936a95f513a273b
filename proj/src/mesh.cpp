#include "hdgoc/mesh.hpp"

#include "hdgoc/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace hdgoc {

std::size_t Mesh::num_interior_faces() const
{
    return static_cast<std::size_t>(std::count(face_class.begin(), face_class.end(), FaceClass::Interior));
}

double Mesh::jacobian_det(std::size_t elem) const
{
    const auto& e = elements.at(elem);
    const Point a = vertices[e[0]];
    const Point b = vertices[e[1]];
    const Point c = vertices[e[2]];
    return (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
}

double Mesh::diameter(std::size_t elem) const
{
    const auto& e = elements.at(elem);
    double d = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        const Point t = vertices[e[(i + 1) % 3]] - vertices[e[i]];
        d = std::max(d, std::sqrt(dot(t, t)));
    }
    return d;
}

Mesh build_uniform(std::size_t n)
{
    if (n == 0) {
        throw InvalidArgument("build_uniform: n must be >= 1");
    }

    Mesh mesh;
    const std::size_t nv = n + 1;
    mesh.vertices.reserve(nv * nv);
    for (std::size_t j = 0; j < nv; ++j) {
        for (std::size_t i = 0; i < nv; ++i) {
            mesh.vertices.push_back({static_cast<double>(i) / static_cast<double>(n),
                                     static_cast<double>(j) / static_cast<double>(n)});
        }
    }

    const auto vid = [nv](std::size_t i, std::size_t j) { return j * nv + i; };
    mesh.elements.reserve(2 * n * n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t a = vid(i, j);
            const std::size_t b = vid(i + 1, j);
            const std::size_t c = vid(i + 1, j + 1);
            const std::size_t d = vid(i, j + 1);
            mesh.elements.push_back({a, b, c});
            mesh.elements.push_back({a, c, d});
        }
    }

    std::map<std::pair<std::size_t, std::size_t>, std::size_t> lookup;
    mesh.elem_faces.resize(mesh.elements.size());
    for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
        const auto& verts = mesh.elements[e];
        for (std::size_t lf = 0; lf < 3; ++lf) {
            const std::size_t va = verts[lf];
            const std::size_t vb = verts[(lf + 1) % 3];
            const auto key = std::minmax(va, vb);
            auto [it, inserted] = lookup.try_emplace({key.first, key.second}, mesh.faces.size());
            if (inserted) {
                mesh.faces.push_back({key.first, key.second});
                mesh.face_elements.push_back({e, Mesh::npos});
            } else {
                mesh.face_elements[it->second][1] = e;
            }
            mesh.elem_faces[e][lf] = {it->second, va < vb ? 1 : -1};
        }
    }

    mesh.face_class.resize(mesh.faces.size());
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        mesh.face_class[f] = mesh.face_elements[f][1] == Mesh::npos ? FaceClass::Boundary : FaceClass::Interior;
    }

    mesh.h = std::sqrt(2.0) / static_cast<double>(n);
    return mesh;
}

FaceGeometry face_geometry(const Mesh& mesh, std::size_t elem, std::size_t local_face)
{
    if (elem >= mesh.num_elements() || local_face > 2) {
        throw InvalidArgument("face_geometry: index out of range (element " + std::to_string(elem) +
                              ", local face " + std::to_string(local_face) + ")");
    }
    const auto& verts = mesh.elements[elem];
    const Point t = mesh.vertices[verts[(local_face + 1) % 3]] - mesh.vertices[verts[local_face]];
    const double len = std::sqrt(dot(t, t));

    const auto& fv = mesh.faces[mesh.elem_faces[elem][local_face].face];
    FaceGeometry g;
    g.normal = {t.y / len, -t.x / len};
    g.length = len;
    g.origin = mesh.vertices[fv[0]];
    g.direction = mesh.vertices[fv[1]] - g.origin;
    return g;
}

Point AffineMap::to_physical(Point ref) const
{
    return {origin.x + jac[0] * ref.x + jac[2] * ref.y, origin.y + jac[1] * ref.x + jac[3] * ref.y};
}

Point AffineMap::to_reference(Point phys) const
{
    const Point d = phys - origin;
    return {inv_jac[0] * d.x + inv_jac[2] * d.y, inv_jac[1] * d.x + inv_jac[3] * d.y};
}

Point AffineMap::pull_gradient(Point g) const
{
    // (J^{-1})^T g
    return {inv_jac[0] * g.x + inv_jac[1] * g.y, inv_jac[2] * g.x + inv_jac[3] * g.y};
}

AffineMap element_map(const Mesh& mesh, std::size_t elem)
{
    const auto& e = mesh.elements.at(elem);
    const Point a = mesh.vertices[e[0]];
    const Point b = mesh.vertices[e[1]];
    const Point c = mesh.vertices[e[2]];

    AffineMap m;
    m.origin = a;
    m.jac = {b.x - a.x, b.y - a.y, c.x - a.x, c.y - a.y};
    m.det = m.jac[0] * m.jac[3] - m.jac[2] * m.jac[1];
    const double inv = 1.0 / m.det;
    m.inv_jac = {m.jac[3] * inv, -m.jac[1] * inv, -m.jac[2] * inv, m.jac[0] * inv};
    return m;
}

} // namespace hdgoc
