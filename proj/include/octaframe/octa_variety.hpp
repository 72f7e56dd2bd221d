#pragma once

#include <octaframe/sh_algebra.hpp>

#include <array>
#include <cstdint>

namespace octaframe {

/// Frames farther than this from the variety are treated as degenerate.
inline constexpr double kDegeneracyThreshold = 0.665;

/// Below this tangential scale no twist can be read from a frame.
inline constexpr double kMinTangentialScale = 1e-6;

struct ProjectionOptions
{
    int random_starts = 8;
    int refined_starts = 6;  ///< best-valued starts that get Newton refinement
    double gradient_tolerance = 1e-10;
    int max_newton_iterations = 100;
    std::uint64_t seed = 0x5eed;
};

struct Projection
{
    ShFrame frame;        ///< e^{v.L} f0, unit norm
    Vec3 axis_angle;      ///< v
    Mat3 rotation;        ///< e^{[v]}
    double distance = 0;  ///< |frame - q|
    bool low_confidence = false;  ///< |q| too small for the direction to be defined
};

/// Nearest point of the octahedral variety to q, by multi-start Newton ascent of
/// q^T e^{v.L} f0 over rotations.
Projection project_to_variety(const ShFrame& q, const ProjectionOptions& options = {});

/// |pi_V(q) - q|.
double degeneracy_distance(const ShFrame& q, const ProjectionOptions& options = {});

/// A tangent cross read off a normal-aligned frame.
struct ExtractedCross
{
    Vec3 normal;
    double theta = 0;  ///< twist about the normal, in [0, pi/2)
    double scale = 0;  ///< tangential magnitude relative to a unit frame
    std::array<Vec3, 2> dirs;
};

/// Inverts the alignment parameterization. Throws DegenerateFrameError when the
/// tangential scale is below kMinTangentialScale.
ExtractedCross extract_cross(const ShFrame& f, const Vec3& normal);

/// e^{v_n.L} applied to the z-aligned frame with twist theta and tangential scale s.
ShFrame aligned_frame(const Vec3& normal, double theta, double scale = 1.0);

/// Reduce an angle into [0, pi/2).
double reduce_quarter_turn(double theta);

} // namespace octaframe
