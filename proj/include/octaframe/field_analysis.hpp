#pragma once

#include <octaframe/energy.hpp>
#include <octaframe/mesh.hpp>
#include <octaframe/octa_variety.hpp>

#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

namespace octaframe {

struct FaceCross
{
    ExtractedCross cross;     ///< zero-filled when extraction failed
    bool degenerate = false;  ///< flagged by the solve, or no tangential part to read
};

/// extract_cross on every face. Faces listed in `degenerate_faces` are still extracted
/// when possible but keep the flag.
std::vector<FaceCross> extract_field(const SurfaceMesh& mesh, const FieldVector& f,
                                     std::span<const int> degenerate_faces = {});

struct SingularityRecord
{
    int vertex = -1;
    int quarters = 0;      ///< index in units of 1/4
    bool unknown = false;  ///< a face of the one-ring is degenerate

    double index() const { return quarters / 4.0; }
};

/// Matching index of the cross field around each interior vertex. Only non-zero and
/// unknown vertices are returned.
std::vector<SingularityRecord> singularity_indices(const SurfaceMesh& mesh, std::span<const FaceCross> crosses);

/// Sum of known indices in quarters.
int total_quarters(std::span<const SingularityRecord> records);

struct CreaseEdgeScore
{
    int edge = -1;  ///< position in mesh.interior_edges()
    int v0 = -1;
    int v1 = -1;
    double dihedral = 0;  ///< deviation from flat, radians
    double angle = 0;     ///< misalignment in [0, pi/4], radians
};

struct CreaseAlignment
{
    std::vector<CreaseEdgeScore> edges;
    double max_angle = 0;
    double mean_angle = 0;
    int skipped = 0;  ///< crease edges with both sides degenerate
};

/// Per crease edge, the worst of the two sides of the smallest angle between a cross
/// direction and the edge.
CreaseAlignment crease_alignment_score(const SurfaceMesh& mesh, std::span<const FaceCross> crosses,
                                       double crease_angle_threshold = std::numbers::pi / 6);

struct DeviationPoint
{
    double epsilon = 0;
    double sample_max_degrees = 0;  ///< max over this epsilon's samples
    double max_degrees = 0;         ///< running max over the grid up to this epsilon
};

/// Perturbs the 7 constrained components of the z-aligned frame uniformly inside a
/// ball of radius epsilon, projects onto the variety and measures how far the nearest
/// frame axis is tilted from z.
std::vector<DeviationPoint> normal_deviation_experiment(std::span<const double> epsilon_grid, int samples,
                                                        std::uint64_t seed);

} // namespace octaframe
