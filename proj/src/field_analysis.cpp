#include <octaframe/error.hpp>
#include <octaframe/field_analysis.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace octaframe {

namespace {

using std::numbers::pi;

// Angle of d from the edge direction, measured counter-clockwise about n.
double angle_from_edge(const Vec3& edge, const Vec3& d, const Vec3& n)
{
    return std::atan2(edge.cross(d).dot(n), edge.dot(d));
}

// Residual of the jump after removing the matching quarter turn; ties go to the smaller k.
double matched_residual(double jump)
{
    const double k = std::ceil(jump / (pi / 2) - 0.5);
    return jump - k * (pi / 2);
}

} // namespace

std::vector<FaceCross> extract_field(const SurfaceMesh& mesh, const FieldVector& f, std::span<const int> degenerate_faces)
{
    std::vector<FaceCross> out(mesh.num_faces());
    for (int t = 0; t < mesh.num_faces(); ++t) {
        try {
            out[t].cross = extract_cross(frame_of(f, t), mesh.face_normals()[t]);
        } catch (const DegenerateFrameError&) {
            out[t].cross.normal = mesh.face_normals()[t];
            out[t].cross.dirs = {Vec3::Zero(), Vec3::Zero()};
            out[t].degenerate = true;
        }
    }
    for (int t : degenerate_faces) {
        if (t >= 0 && t < mesh.num_faces()) out[t].degenerate = true;
    }
    return out;
}

std::vector<SingularityRecord> singularity_indices(const SurfaceMesh& mesh, std::span<const FaceCross> crosses)
{
    if (static_cast<int>(crosses.size()) != mesh.num_faces()) {
        throw ConfigError("singularity_indices: one cross per face expected");
    }
    const int nv = mesh.num_vertices();
    std::vector<double> turning = vertex_angle_defects(mesh);
    std::vector<bool> unknown(nv, false);
    std::vector<bool> used(nv, false);
    const std::vector<bool> on_boundary = boundary_vertices(mesh);

    for (int t = 0; t < mesh.num_faces(); ++t) {
        for (int k = 0; k < 3; ++k) {
            const int v = mesh.faces()(t, k);
            used[v] = true;
            if (crosses[t].degenerate) unknown[v] = true;
        }
    }

    const auto& normals = mesh.face_normals();
    for (const InteriorEdge& e : mesh.interior_edges()) {
        if (crosses[e.face0].degenerate || crosses[e.face1].degenerate) continue;
        const Vec3 edge = (mesh.vertex(e.v1) - mesh.vertex(e.v0)).normalized();
        const double a0 = angle_from_edge(edge, crosses[e.face0].cross.dirs[0], normals[e.face0]);
        const double a1 = angle_from_edge(edge, crosses[e.face1].cross.dirs[0], normals[e.face1]);
        const double r = matched_residual(a1 - a0);
        // Counter-clockwise about v1 the loop passes face0 -> face1; about v0, face1 -> face0.
        turning[e.v1] += r;
        turning[e.v0] -= r;
    }

    std::vector<SingularityRecord> out;
    for (int v = 0; v < nv; ++v) {
        if (!used[v] || on_boundary[v]) continue;
        if (unknown[v]) {
            out.push_back({v, 0, true});
            continue;
        }
        const int quarters = static_cast<int>(std::lround(4.0 * turning[v] / (2.0 * pi)));
        if (quarters != 0) out.push_back({v, quarters, false});
    }
    return out;
}

int total_quarters(std::span<const SingularityRecord> records)
{
    int sum = 0;
    for (const SingularityRecord& r : records) {
        if (!r.unknown) sum += r.quarters;
    }
    return sum;
}

CreaseAlignment crease_alignment_score(const SurfaceMesh& mesh, std::span<const FaceCross> crosses,
                                       double crease_angle_threshold)
{
    CreaseAlignment out;
    const auto& edges = mesh.interior_edges();
    double sum = 0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const InteriorEdge& e = edges[i];
        const double dihedral = mesh.dihedral_deviation(e);
        if (!(dihedral > crease_angle_threshold)) continue;
        const Vec3 edge = (mesh.vertex(e.v1) - mesh.vertex(e.v0)).normalized();
        double worst = -1;
        for (int face : {e.face0, e.face1}) {
            if (crosses[face].degenerate) continue;
            const double c = std::clamp(std::abs(edge.dot(crosses[face].cross.dirs[0])), 0.0, 1.0);
            const double phi = std::acos(c);
            worst = std::max(worst, std::min(phi, pi / 2 - phi));
        }
        if (worst < 0) {
            ++out.skipped;
            continue;
        }
        out.edges.push_back({static_cast<int>(i), e.v0, e.v1, dihedral, worst});
        out.max_angle = std::max(out.max_angle, worst);
        sum += worst;
    }
    if (!out.edges.empty()) out.mean_angle = sum / static_cast<double>(out.edges.size());
    return out;
}

std::vector<DeviationPoint> normal_deviation_experiment(std::span<const double> epsilon_grid, int samples,
                                                        std::uint64_t seed)
{
    if (samples < 0) throw ConfigError("sample count must be >= 0");
    for (double eps : epsilon_grid) {
        if (!(eps >= 0.0 && eps < normal_weight())) throw ConfigError("epsilon must lie in [0, sqrt(7/12))");
    }

    // One set of unit-ball draws, scaled by each epsilon.
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform;
    std::vector<Vec7> draws(samples);
    for (Vec7& d : draws) {
        for (int k = 0; k < 7; ++k) d[k] = normal(rng);
        d *= std::pow(uniform(rng), 1.0 / 7.0) / d.norm();
    }

    const ShFrame f0 = canonical_frame();
    ProjectionOptions options;
    options.seed = seed;
    std::vector<DeviationPoint> out;
    double running = 0;
    for (double eps : epsilon_grid) {
        double worst = 0;
        if (eps > 0) {
            for (const Vec7& d : draws) {
                ShFrame q = f0;
                q.segment<7>(1) += eps * d;
                const Mat3 r = project_to_variety(q, options).rotation;
                const double c = std::min(1.0, r.row(2).cwiseAbs().maxCoeff());
                worst = std::max(worst, std::acos(c) * 180.0 / pi);
            }
        }
        running = std::max(running, worst);
        out.push_back({eps, worst, running});
    }
    return out;
}

} // namespace octaframe
