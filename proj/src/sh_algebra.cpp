#include <octaframe/sh_algebra.hpp>

#include <cmath>
#include <numbers>

namespace octaframe {

namespace {

// Sets M(i, j) = value and M(j, i) = -value, 1-based as in the published tables.
void set_antisymmetric(Mat9& m, int i, int j, double value)
{
    m(i - 1, j - 1) = value;
    m(j - 1, i - 1) = -value;
}

AngularMomentum make_angular_momentum()
{
    const double r2 = std::sqrt(2.0);
    const double r7_2 = std::sqrt(7.0 / 2.0);
    const double three_r2 = 3.0 / std::sqrt(2.0);
    const double r10 = std::sqrt(10.0);

    AngularMomentum l;
    l.x.setZero();
    l.y.setZero();
    l.z.setZero();

    set_antisymmetric(l.x, 1, 8, -r2);
    set_antisymmetric(l.x, 2, 7, -r7_2);
    set_antisymmetric(l.x, 2, 9, -r2);
    set_antisymmetric(l.x, 3, 6, -three_r2);
    set_antisymmetric(l.x, 3, 8, -r7_2);
    set_antisymmetric(l.x, 4, 5, -r10);
    set_antisymmetric(l.x, 4, 7, -three_r2);

    set_antisymmetric(l.y, 1, 2, r2);
    set_antisymmetric(l.y, 2, 3, r7_2);
    set_antisymmetric(l.y, 3, 4, three_r2);
    set_antisymmetric(l.y, 5, 6, -r10);
    set_antisymmetric(l.y, 6, 7, -three_r2);
    set_antisymmetric(l.y, 7, 8, -r7_2);
    set_antisymmetric(l.y, 8, 9, -r2);

    set_antisymmetric(l.z, 1, 9, 4.0);
    set_antisymmetric(l.z, 2, 8, 3.0);
    set_antisymmetric(l.z, 3, 7, 2.0);
    set_antisymmetric(l.z, 4, 6, 1.0);
    return l;
}

} // namespace

const AngularMomentum& angular_momentum()
{
    static const AngularMomentum table = make_angular_momentum();
    return table;
}

double normal_weight()
{
    return std::sqrt(7.0 / 12.0);
}

double tangential_weight()
{
    return std::sqrt(5.0 / 12.0);
}

ShFrame canonical_frame()
{
    ShFrame f = ShFrame::Zero();
    f[4] = normal_weight();
    f[8] = tangential_weight();
    return f;
}

ShFrame reference_lobe()
{
    ShFrame l = ShFrame::Zero();
    l[4] = normal_weight();
    return l;
}

Vec7 alignment_target()
{
    Vec7 u = Vec7::Zero();
    u[3] = normal_weight();
    return u;
}

Mat9 exp_twist_matrix(double theta)
{
    // Pairs (Y_{4,-m}, Y_{4,m}) rotate with frequency m.
    Mat9 r = Mat9::Identity();
    for (int m = 1; m <= 4; ++m) {
        const int s = 4 - m;
        const int c = 4 + m;
        const double cm = std::cos(m * theta);
        const double sm = std::sin(m * theta);
        r(s, s) = cm;
        r(s, c) = sm;
        r(c, s) = -sm;
        r(c, c) = cm;
    }
    return r;
}

Mat3 rotation_matrix(const Vec3& v)
{
    const double angle = v.norm();
    if (angle == 0.0) return Mat3::Identity();
    return Eigen::AngleAxisd(angle, v / angle).toRotationMatrix();
}

std::array<double, 3> zyz_angles(const Mat3& r)
{
    const double sb = std::hypot(r(0, 2), r(1, 2));
    const double beta = std::atan2(sb, r(2, 2));
    if (sb > 1e-12) {
        return {std::atan2(r(1, 2), r(0, 2)), beta, std::atan2(r(2, 1), -r(2, 0))};
    }
    if (r(2, 2) > 0.0) {
        return {std::atan2(r(1, 0), r(0, 0)), 0.0, 0.0};
    }
    return {std::atan2(-r(1, 0), -r(0, 0)), std::numbers::pi, 0.0};
}

Mat9 sh_rotation(const Mat3& rotation)
{
    const auto [alpha, beta, gamma] = zyz_angles(rotation);
    return exp_twist_matrix(alpha) * exp_y_matrix(beta) * exp_twist_matrix(gamma);
}

Mat9 exp_rotation(const Vec3& v)
{
    if (v.squaredNorm() == 0.0) return Mat9::Identity();
    return sh_rotation(rotation_matrix(v));
}

ShFrame twist_z(double theta)
{
    ShFrame f = canonical_frame();
    f[0] = tangential_weight() * std::sin(4.0 * theta);
    f[8] = tangential_weight() * std::cos(4.0 * theta);
    return f;
}

Vec3 align_axis_angle(const Vec3& n)
{
    const Vec3 z = Vec3::UnitZ();
    const Vec3 axis = z.cross(n);
    const double s = axis.norm();
    if (s < 1e-14) {
        if (n.z() >= 0.0) return Vec3::Zero();
        return Vec3(std::numbers::pi, 0.0, 0.0);
    }
    return axis / s * std::atan2(s, z.dot(n));
}

AlignmentOperator alignment_operator(const Vec3& n)
{
    AlignmentOperator op;
    op.normal = n;
    op.axis_angle = align_axis_angle(n);
    op.to_world = exp_rotation(op.axis_angle);
    op.to_local = op.to_world.transpose();
    op.W = op.to_local.middleRows<7>(1);
    op.u0 = alignment_target();
    return op;
}

double lobe_dot(double theta)
{
    return (9.0 + 20.0 * std::cos(2.0 * theta) + 35.0 * std::cos(4.0 * theta)) / 336.0;
}

double lobe_dist_sq(double theta)
{
    const double s = std::sin(theta);
    return 5.0 / 42.0 * (9.0 + 7.0 * std::cos(2.0 * theta)) * s * s;
}

double lobe_dot_scaled(double theta)
{
    return kLobeRescale * lobe_dot(theta);
}

double lobe_dist_sq_scaled(double theta)
{
    return kLobeRescale * lobe_dist_sq(theta);
}

double crease_energy(double a, double b, double t)
{
    const ShFrame f0 = canonical_frame();
    const Vec3 bend = b * Vec3(std::cos(a), std::sin(a), 0.0);
    const ShFrame f1 = exp_rotation(bend) * twist_z(t);
    return (f0 - f1).squaredNorm();
}

} // namespace octaframe
