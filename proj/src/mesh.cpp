#include "oseentp/mesh.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "oseentp/kahan.hpp"

namespace oseentp {

double SurfaceMesh::area() const {
    NeumaierSum<double> s;
    for (const auto& n : nodes) s.add(n.w);
    return s.value();
}

Vec3 SurfaceMesh::normal_integral() const {
    NeumaierSum<Vec3> s;
    for (const auto& n : nodes) s.add(n.w * n.normal);
    return s.value();
}

Vec3 SurfaceMesh::centroid() const {
    Vec3 c{};
    for (const auto& v : vertices) c += v;
    return (1.0 / static_cast<double>(vertices.size())) * c;
}

double SurfaceMesh::circumscribed_radius() const {
    Vec3 c = centroid();
    double r = 0;
    for (const auto& v : vertices) r = std::max(r, norm(v - c));
    return r;
}

namespace {

double signed_volume(const std::vector<Vec3>& verts,
                     const std::vector<std::array<int, 3>>& tris, const Vec3& origin) {
    NeumaierSum<double> v;
    for (const auto& t : tris) {
        Vec3 a = verts[static_cast<std::size_t>(t[0])] - origin;
        Vec3 b = verts[static_cast<std::size_t>(t[1])] - origin;
        Vec3 c = verts[static_cast<std::size_t>(t[2])] - origin;
        v.add(dot(a, cross(b, c)) / 6.0);
    }
    return v.value();
}

}  // namespace

SurfaceMesh make_mesh(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> triangles,
                      QuadRule rule) {
    if (vertices.empty() || triangles.empty())
        throw std::invalid_argument("make_mesh: empty geometry");
    for (const auto& t : triangles)
        for (int i : t)
            if (i < 0 || static_cast<std::size_t>(i) >= vertices.size())
                throw std::invalid_argument("make_mesh: triangle index out of range");

    SurfaceMesh m;
    m.vertices = std::move(vertices);
    m.triangles = std::move(triangles);
    m.rule = rule;

    // Normalize winding: positive enclosed volume => facet normals outward.
    if (signed_volume(m.vertices, m.triangles, m.centroid()) < 0)
        for (auto& t : m.triangles) std::swap(t[1], t[2]);

    m.nodes.reserve(m.triangles.size() * (rule == QuadRule::centroid ? 1 : 3));
    for (const auto& t : m.triangles) {
        const Vec3& a = m.vertices[static_cast<std::size_t>(t[0])];
        const Vec3& b = m.vertices[static_cast<std::size_t>(t[1])];
        const Vec3& c = m.vertices[static_cast<std::size_t>(t[2])];
        Vec3 cr = cross(b - a, c - a);
        double area2 = norm(cr);
        if (!(area2 > 0)) throw std::invalid_argument("make_mesh: degenerate triangle");
        Vec3 n = (1.0 / area2) * cr;
        double area = 0.5 * area2;
        m.max_diameter = std::max({m.max_diameter, norm(b - a), norm(c - b), norm(a - c)});
        if (rule == QuadRule::centroid) {
            m.nodes.push_back({(1.0 / 3.0) * (a + b + c), n, area});
        } else {
            m.nodes.push_back({0.5 * (a + b), n, area / 3.0});
            m.nodes.push_back({0.5 * (b + c), n, area / 3.0});
            m.nodes.push_back({0.5 * (c + a), n, area / 3.0});
        }
    }
    return m;
}

SurfaceMesh sphere_mesh(const Vec3& center, double radius, int level, QuadRule rule) {
    if (!(radius > 0)) throw std::invalid_argument("sphere_mesh: radius must be positive");
    if (level < 0) throw std::invalid_argument("sphere_mesh: negative level");

    const double p = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> verts = {
        {-1, p, 0}, {1, p, 0}, {-1, -p, 0}, {1, -p, 0}, {0, -1, p},  {0, 1, p},
        {0, -1, -p}, {0, 1, -p}, {p, 0, -1}, {p, 0, 1},  {-p, 0, -1}, {-p, 0, 1}};
    std::vector<std::array<int, 3>> tris = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
        {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
        {3, 8, 9},   {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
    for (auto& v : verts) v = normalized(v);

    for (int l = 0; l < level; ++l) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int i, int j) {
            auto key = std::minmax(i, j);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            Vec3 m = normalized(0.5 * (verts[static_cast<std::size_t>(i)] +
                                       verts[static_cast<std::size_t>(j)]));
            verts.push_back(m);
            int idx = static_cast<int>(verts.size()) - 1;
            midpoint.emplace(key, idx);
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(tris.size() * 4);
        for (const auto& t : tris) {
            int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
            next.push_back({t[0], ab, ca});
            next.push_back({t[1], bc, ab});
            next.push_back({t[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        tris = std::move(next);
    }

    for (auto& v : verts) v = center + radius * v;
    return make_mesh(std::move(verts), std::move(tris), rule);
}

SurfaceMesh load_mesh_json(const std::string& path, QuadRule rule) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("load_mesh_json: cannot open " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("load_mesh_json: " + std::string(e.what()));
    }
    if (!j.is_object() || !j.contains("vertices") || !j.contains("triangles"))
        throw std::invalid_argument("load_mesh_json: need {vertices, triangles}");
    std::vector<Vec3> verts;
    for (const auto& v : j.at("vertices")) {
        if (!v.is_array() || v.size() != 3)
            throw std::invalid_argument("load_mesh_json: vertex must be [x,y,z]");
        verts.push_back({v[0].get<double>(), v[1].get<double>(), v[2].get<double>()});
    }
    std::vector<std::array<int, 3>> tris;
    for (const auto& t : j.at("triangles")) {
        if (!t.is_array() || t.size() != 3)
            throw std::invalid_argument("load_mesh_json: triangle must be [i,j,k]");
        tris.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
    }
    return make_mesh(std::move(verts), std::move(tris), rule);
}

}  // namespace oseentp
