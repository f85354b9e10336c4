#pragma once

#include <array>
#include <string>
#include <vector>

#include "oseentp/vec.hpp"

// Triangulated closed surfaces with facet quadrature. The quadrature lives on
// the flat facets (the polyhedron IS the integration surface), so divergence-
// theorem identities hold to machine precision at every refinement level.
// Normals stored here point OUT of the body; callers that need the opposite
// orientation negate explicitly.

namespace oseentp {

enum class QuadRule {
    centroid,     // 1 node per facet, degree 1
    three_point,  // edge midpoints, weight area/3, degree 2
};

struct QuadNode {
    Vec3 y;
    Vec3 normal;  // unit, body-outward
    double w;     // > 0
};

struct SurfaceMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<QuadNode> nodes;
    double max_diameter = 0.0;  // longest triangle edge
    QuadRule rule = QuadRule::centroid;

    double area() const;
    Vec3 normal_integral() const;           // should vanish for closed surfaces
    double circumscribed_radius() const;    // max vertex distance from centroid
    Vec3 centroid() const;
};

// Subdivided-icosahedron sphere; level 0 has 20 triangles, x4 per level.
SurfaceMesh sphere_mesh(const Vec3& center, double radius, int level,
                        QuadRule rule = QuadRule::centroid);

// Builds quadrature from raw geometry. Triangle winding is normalized so that
// normals point away from the enclosed volume (signed-volume test).
SurfaceMesh make_mesh(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> triangles,
                      QuadRule rule);

// JSON file {"vertices": [[x,y,z],...], "triangles": [[i,j,k],...]} with
// zero-based indices; normals and weights are recomputed, never read.
SurfaceMesh load_mesh_json(const std::string& path, QuadRule rule = QuadRule::centroid);

}  // namespace oseentp
