#include <octaframe/error.hpp>
#include <octaframe/mesh.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

namespace octaframe {

namespace {

struct HalfEdgeUse
{
    int face;
    int from;
    int to;
};

std::uint64_t edge_key(int a, int b)
{
    const auto lo = static_cast<std::uint64_t>(std::min(a, b));
    const auto hi = static_cast<std::uint64_t>(std::max(a, b));
    return (hi << 32) | lo;
}

std::string edge_name(int a, int b)
{
    return "(" + std::to_string(std::min(a, b)) + ", " + std::to_string(std::max(a, b)) + ")";
}

constexpr std::size_t kMaxListed = 20;

} // namespace

SurfaceMesh SurfaceMesh::build(Vertices vertices, Faces faces)
{
    SurfaceMesh mesh;
    mesh.vertices_ = std::move(vertices);
    mesh.faces_ = std::move(faces);
    const int nv = mesh.num_vertices();
    const int nf = mesh.num_faces();

    for (int f = 0; f < nf; ++f) {
        for (int k = 0; k < 3; ++k) {
            const int v = mesh.faces_(f, k);
            if (v < 0 || v >= nv) {
                throw MeshError(MeshError::Kind::IndexRange,
                                "face " + std::to_string(f) + " references vertex " + std::to_string(v) +
                                    " outside [0, " + std::to_string(nv) + ")",
                                {std::to_string(f)});
            }
        }
    }

    const double diag = mesh.bounding_box_diagonal();
    const double area_floor = 1e-14 * std::max(diag * diag, 1e-300);
    std::vector<std::string> degenerate;
    mesh.normals_.resize(nf);
    for (int f = 0; f < nf; ++f) {
        const Vec3 a = mesh.vertex(mesh.faces_(f, 0));
        const Vec3 n = (mesh.vertex(mesh.faces_(f, 1)) - a).cross(mesh.vertex(mesh.faces_(f, 2)) - a);
        if (0.5 * n.norm() <= area_floor) {
            degenerate.push_back(std::to_string(f));
            continue;
        }
        mesh.normals_[f] = n.normalized();
    }
    if (!degenerate.empty()) {
        const std::string shown = degenerate.front();
        throw MeshError(MeshError::Kind::DegenerateFace,
                        "degenerate (zero-area) face " + shown +
                            (degenerate.size() > 1 ? " and " + std::to_string(degenerate.size() - 1) + " more" : ""),
                        degenerate);
    }

    std::unordered_map<std::uint64_t, std::size_t> slot;
    std::vector<std::vector<HalfEdgeUse>> uses;
    for (int f = 0; f < nf; ++f) {
        for (int k = 0; k < 3; ++k) {
            const int a = mesh.faces_(f, k);
            const int b = mesh.faces_(f, (k + 1) % 3);
            auto [it, inserted] = slot.try_emplace(edge_key(a, b), uses.size());
            if (inserted) uses.emplace_back();
            uses[it->second].push_back({f, a, b});
        }
    }

    std::vector<std::string> non_manifold;
    std::vector<std::string> misoriented;
    for (const auto& u : uses) {
        if (u.size() > 2) {
            non_manifold.push_back(edge_name(u[0].from, u[0].to));
        } else if (u.size() == 2) {
            if (u[0].from == u[1].from) {
                misoriented.push_back(edge_name(u[0].from, u[0].to));
                continue;
            }
            mesh.interior_.push_back({u[0].face, u[1].face, u[0].from, u[0].to, 0.0});
        } else {
            mesh.boundary_.push_back({u[0].face, u[0].from, u[0].to});
        }
    }
    if (!non_manifold.empty()) {
        std::string msg = "non-manifold edges (more than two incident faces):";
        for (std::size_t i = 0; i < std::min(non_manifold.size(), kMaxListed); ++i) msg += " " + non_manifold[i];
        throw MeshError(MeshError::Kind::NonManifoldEdge, msg, non_manifold);
    }
    if (!misoriented.empty()) {
        std::string msg = "inconsistently oriented or non-orientable mesh at edges:";
        for (std::size_t i = 0; i < std::min(misoriented.size(), kMaxListed); ++i) msg += " " + misoriented[i];
        throw MeshError(MeshError::Kind::Orientation, msg, misoriented);
    }

    for (InteriorEdge& e : mesh.interior_) {
        const double dual = (mesh.barycenter(e.face0) - mesh.barycenter(e.face1)).norm();
        if (dual <= 1e-14 * diag) {
            throw MeshError(MeshError::Kind::Geometry,
                            "coincident barycenters across edge " + edge_name(e.v0, e.v1),
                            {edge_name(e.v0, e.v1)});
        }
        e.weight = (mesh.vertex(e.v0) - mesh.vertex(e.v1)).norm() / dual;
    }

    std::vector<char> used(nv, 0);
    for (int f = 0; f < nf; ++f) {
        for (int k = 0; k < 3; ++k) used[mesh.faces_(f, k)] = 1;
    }
    const auto nv_used = static_cast<int>(std::count(used.begin(), used.end(), 1));
    mesh.euler_ = nv_used - mesh.num_edges() + nf;
    return mesh;
}

Vec3 SurfaceMesh::barycenter(int f) const
{
    return (vertex(faces_(f, 0)) + vertex(faces_(f, 1)) + vertex(faces_(f, 2))) / 3.0;
}

double SurfaceMesh::face_area(int f) const
{
    const Vec3 a = vertex(faces_(f, 0));
    return 0.5 * (vertex(faces_(f, 1)) - a).cross(vertex(faces_(f, 2)) - a).norm();
}

double SurfaceMesh::corner_angle(int f, int k) const
{
    const Vec3 p = vertex(faces_(f, k));
    const Vec3 a = vertex(faces_(f, (k + 1) % 3)) - p;
    const Vec3 b = vertex(faces_(f, (k + 2) % 3)) - p;
    return std::atan2(a.cross(b).norm(), a.dot(b));
}

double SurfaceMesh::mean_edge_length(int f) const
{
    double sum = 0;
    for (int k = 0; k < 3; ++k) sum += (vertex(faces_(f, k)) - vertex(faces_(f, (k + 1) % 3))).norm();
    return sum / 3.0;
}

double SurfaceMesh::dihedral_deviation(const InteriorEdge& e) const
{
    const Vec3& a = normals_[e.face0];
    const Vec3& b = normals_[e.face1];
    return std::atan2(a.cross(b).norm(), a.dot(b));
}

double SurfaceMesh::bounding_box_diagonal() const
{
    if (vertices_.rows() == 0) return 0.0;
    return (vertices_.colwise().maxCoeff() - vertices_.colwise().minCoeff()).norm();
}

std::vector<double> edge_weights(const SurfaceMesh& mesh)
{
    std::vector<double> w;
    w.reserve(mesh.interior_edges().size());
    for (const InteriorEdge& e : mesh.interior_edges()) w.push_back(e.weight);
    return w;
}

std::vector<double> vertex_angle_defects(const SurfaceMesh& mesh)
{
    std::vector<double> defect(mesh.num_vertices(), 2.0 * std::numbers::pi);
    for (int f = 0; f < mesh.num_faces(); ++f) {
        for (int k = 0; k < 3; ++k) defect[mesh.faces()(f, k)] -= mesh.corner_angle(f, k);
    }
    return defect;
}

std::vector<bool> boundary_vertices(const SurfaceMesh& mesh)
{
    std::vector<bool> on(mesh.num_vertices(), false);
    for (const BoundaryEdge& e : mesh.boundary_edges()) {
        on[e.v0] = true;
        on[e.v1] = true;
    }
    return on;
}

} // namespace octaframe
