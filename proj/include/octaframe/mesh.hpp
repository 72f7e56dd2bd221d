#pragma once

#include <octaframe/sh_algebra.hpp>

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace octaframe {

using Vertices = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;
using Faces = Eigen::Matrix<int, Eigen::Dynamic, 3, Eigen::RowMajor>;

/// Edge shared by two faces. face0 traverses it as v0 -> v1, face1 as v1 -> v0.
struct InteriorEdge
{
    int face0 = -1;
    int face1 = -1;
    int v0 = -1;
    int v1 = -1;
    double weight = 0;  ///< |e| / |e*|, e* joining the two barycenters
};

struct BoundaryEdge
{
    int face = -1;
    int v0 = -1;
    int v1 = -1;
};

/// Validated, consistently oriented, edge-manifold triangle mesh. Immutable once built.
class SurfaceMesh
{
public:
    SurfaceMesh() = default;

    /// Validates and builds adjacency, normals and dual-edge weights. Throws MeshError.
    static SurfaceMesh build(Vertices vertices, Faces faces);

    const Vertices& vertices() const { return vertices_; }
    const Faces& faces() const { return faces_; }
    const std::vector<Vec3>& face_normals() const { return normals_; }
    const std::vector<InteriorEdge>& interior_edges() const { return interior_; }
    const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_; }

    int num_vertices() const { return static_cast<int>(vertices_.rows()); }
    int num_faces() const { return static_cast<int>(faces_.rows()); }
    int num_edges() const { return static_cast<int>(interior_.size() + boundary_.size()); }
    int euler_characteristic() const { return euler_; }
    bool is_closed() const { return boundary_.empty(); }

    Vec3 vertex(int v) const { return vertices_.row(v).transpose(); }
    Vec3 barycenter(int f) const;
    double face_area(int f) const;
    /// Interior angle of face f at its local corner k (0, 1, 2).
    double corner_angle(int f, int k) const;
    double mean_edge_length(int f) const;
    /// Angle between the normals of the two faces of an interior edge (0 for flat).
    double dihedral_deviation(const InteriorEdge& e) const;
    double bounding_box_diagonal() const;

private:
    Vertices vertices_;
    Faces faces_;
    std::vector<Vec3> normals_;
    std::vector<InteriorEdge> interior_;
    std::vector<BoundaryEdge> boundary_;
    int euler_ = 0;
};

/// w_e = |e| / |barycenter(t1) - barycenter(t2)| per interior edge, in interior_edges() order.
std::vector<double> edge_weights(const SurfaceMesh& mesh);

/// 2*pi - (sum of corner angles) per vertex; boundary vertices included as-is.
std::vector<double> vertex_angle_defects(const SurfaceMesh& mesh);

/// Marks vertices touching a boundary edge.
std::vector<bool> boundary_vertices(const SurfaceMesh& mesh);

// ---------------------------------------------------------------------------
// OBJ input/output

/// Parses ASCII OBJ (v/f records). Polygons are fan-triangulated; a message is
/// appended to `warnings` for each one. Throws IoError or MeshError.
SurfaceMesh load_obj(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);
SurfaceMesh parse_obj(const std::string& text, std::vector<std::string>* warnings = nullptr);

/// Canonical writer: "v x y z" and "f a b c", numbers at 17 significant digits.
std::string format_obj(const SurfaceMesh& mesh);
void save_obj(const SurfaceMesh& mesh, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Procedural meshes

/// Unit cube centred at the origin, every face split into n x n quads (12 n^2 triangles).
SurfaceMesh make_cube(int subdivisions = 1);

/// Two planar strips meeting at a straight crease along x with the given interior
/// dihedral angle (pi = flat). nx segments along the crease, nu across each strip.
SurfaceMesh make_wedge(double dihedral, int nx = 10, int nu = 10);

/// make_cube(subdivisions) with every vertex jittered by Gaussian noise of standard
/// deviation sigma * (grid spacing) per coordinate. Same seed gives the same mesh.
SurfaceMesh make_noisy_cube(double sigma, std::uint64_t seed, int subdivisions = 6);

/// Unit square in the z = 0 plane split into n x n quads.
SurfaceMesh make_flat_grid(int n);

/// Intersection of three orthogonal unit cylinders, obtained by radially projecting a
/// subdivided cube onto its boundary.
SurfaceMesh make_three_cylinders(int subdivisions = 8);

/// Icosahedron subdivided `levels` times and projected to the unit sphere.
SurfaceMesh make_icosphere(int levels = 2);

/// Parses NAME[:params] (cube[:n], wedge:dihedral[:nx[:nu]], noisy_cube:sigma:seed[:n],
/// flat_grid:n, cylinder3[:n], icosphere[:levels]). Throws ConfigError on bad input.
SurfaceMesh make_canonical_mesh(const std::string& spec);

} // namespace octaframe
