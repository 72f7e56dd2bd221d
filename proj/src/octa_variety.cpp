#include <octaframe/error.hpp>
#include <octaframe/octa_variety.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace octaframe {

namespace {

using Quat = Eigen::Quaterniond;

ShFrame rotated_canonical(const Quat& q)
{
    const auto [alpha, beta, gamma] = zyz_angles(q.toRotationMatrix());
    ShFrame f = twist_z(gamma);
    f = exp_y_matrix(beta) * f;
    return exp_twist_matrix(alpha) * f;
}

// Starts covering the quotient of SO(3) by the cube group: rotations by half and a
// quarter of the fundamental angle about every symmetry axis of the cube.
const std::vector<Quat>& symmetric_starts()
{
    static const std::vector<Quat> starts = [] {
        using std::numbers::pi;
        std::vector<Quat> out;
        out.push_back(Quat::Identity());
        std::vector<std::pair<Vec3, double>> axes;
        for (int i = 0; i < 3; ++i) axes.emplace_back(Vec3::Unit(i), pi / 2);
        for (int sy : {-1, 1}) {
            for (int sz : {-1, 1}) axes.emplace_back(Vec3(1, sy, sz).normalized(), 2 * pi / 3);
        }
        for (int i = 0; i < 3; ++i) {
            for (int s : {-1, 1}) {
                Vec3 a = Vec3::Zero();
                a[i] = 1;
                a[(i + 1) % 3] = s;
                axes.emplace_back(a.normalized(), pi);
            }
        }
        for (double frac : {0.5, 0.25}) {
            for (const auto& [axis, angle] : axes) out.emplace_back(Eigen::AngleAxisd(frac * angle, axis));
        }
        return out;
    }();
    return starts;
}

Quat random_rotation(std::mt19937_64& rng)
{
    std::normal_distribution<double> normal;
    Quat q(normal(rng), normal(rng), normal(rng), normal(rng));
    q.normalize();
    return q;
}

struct Ascent
{
    Quat rotation;
    ShFrame frame;
    double value;
};

// Newton ascent of dir^T e^{w.L} g over w, re-centred at every step.
Ascent refine(const ShFrame& dir, Ascent a, const ProjectionOptions& options)
{
    const AngularMomentum& l = angular_momentum();
    for (int iter = 0; iter < options.max_newton_iterations; ++iter) {
        std::array<Vec9, 3> lg;
        std::array<Vec9, 3> lq;
        Vec3 grad;
        for (int i = 0; i < 3; ++i) {
            lg[i] = l[i] * a.frame;
            lq[i] = -(l[i] * dir);  // L_i^T q
            grad[i] = dir.dot(lg[i]);
        }
        if (grad.norm() < options.gradient_tolerance) break;

        Mat3 hess;
        for (int i = 0; i < 3; ++i) {
            for (int j = i; j < 3; ++j) {
                hess(i, j) = hess(j, i) = 0.5 * (lq[i].dot(lg[j]) + lq[j].dot(lg[i]));
            }
        }
        Eigen::SelfAdjointEigenSolver<Mat3> eig(hess);
        const double floor = 1e-3 * std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
        Vec3 step = Vec3::Zero();
        for (int k = 0; k < 3; ++k) {
            const Vec3 u = eig.eigenvectors().col(k);
            const double lambda = eig.eigenvalues()[k];
            const double curvature = lambda < -floor ? -lambda : std::max(std::abs(lambda), floor);
            step += (u.dot(grad) / curvature) * u;
        }

        bool accepted = false;
        for (double t = 1.0; t > 1e-10; t *= 0.5) {
            const Vec3 w = t * step;
            const double angle = w.norm();
            Quat candidate = angle > 0 ? Quat(Eigen::AngleAxisd(angle, w / angle)) * a.rotation : a.rotation;
            candidate.normalize();
            const ShFrame g = rotated_canonical(candidate);
            const double value = dir.dot(g);
            if (value >= a.value - 1e-15) {
                accepted = value > a.value || t == 1.0;
                a = {candidate, g, value};
                break;
            }
        }
        if (!accepted) break;
    }
    return a;
}

} // namespace

Projection project_to_variety(const ShFrame& q, const ProjectionOptions& options)
{
    Projection out;
    const double norm = q.norm();
    if (norm < 1e-8) {
        out.frame = canonical_frame();
        out.axis_angle = Vec3::Zero();
        out.rotation = Mat3::Identity();
        out.distance = (out.frame - q).norm();
        out.low_confidence = true;
        return out;
    }
    const ShFrame dir = q / norm;

    std::vector<Ascent> candidates;
    for (const Quat& r : symmetric_starts()) {
        const ShFrame g = rotated_canonical(r);
        candidates.push_back({r, g, dir.dot(g)});
    }
    std::mt19937_64 rng(options.seed);
    for (int i = 0; i < options.random_starts; ++i) {
        const Quat r = random_rotation(rng);
        const ShFrame g = rotated_canonical(r);
        candidates.push_back({r, g, dir.dot(g)});
    }
    const auto n_refine = std::min<std::size_t>(std::max(options.refined_starts, 1), candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + n_refine, candidates.end(),
                      [](const Ascent& a, const Ascent& b) { return a.value > b.value; });

    Ascent best = refine(dir, candidates[0], options);
    for (std::size_t i = 1; i < n_refine; ++i) {
        Ascent a = refine(dir, candidates[i], options);
        if (a.value > best.value) best = a;
    }

    const Eigen::AngleAxisd aa(best.rotation);
    out.frame = best.frame;
    out.axis_angle = aa.angle() * aa.axis();
    out.rotation = best.rotation.toRotationMatrix();
    out.distance = (out.frame - q).norm();
    return out;
}

double degeneracy_distance(const ShFrame& q, const ProjectionOptions& options)
{
    return project_to_variety(q, options).distance;
}

double reduce_quarter_turn(double theta)
{
    constexpr double quarter = std::numbers::pi / 2;
    double r = std::fmod(theta, quarter);
    if (r < 0) r += quarter;
    if (quarter - r < 1e-12) r = 0.0;
    return r;
}

ShFrame aligned_frame(const Vec3& normal, double theta, double scale)
{
    const ShFrame lobe = reference_lobe();
    const ShFrame local = lobe + scale * (twist_z(theta) - lobe);
    return exp_rotation(align_axis_angle(normal)) * local;
}

ExtractedCross extract_cross(const ShFrame& f, const Vec3& normal)
{
    const Vec3 v = align_axis_angle(normal);
    const ShFrame local = exp_rotation(v).transpose() * f;
    const double scale = std::hypot(local[0], local[8]) / tangential_weight();
    if (scale < kMinTangentialScale) {
        throw DegenerateFrameError("frame has no tangential component (scale " + std::to_string(scale) + ")");
    }
    ExtractedCross c;
    c.normal = normal;
    c.scale = scale;
    c.theta = reduce_quarter_turn(0.25 * std::atan2(local[0], local[8]));
    const Mat3 r = rotation_matrix(v);
    c.dirs[0] = r * Vec3(std::cos(c.theta), std::sin(c.theta), 0.0);
    c.dirs[1] = r * Vec3(-std::sin(c.theta), std::cos(c.theta), 0.0);
    return c;
}

} // namespace octaframe
