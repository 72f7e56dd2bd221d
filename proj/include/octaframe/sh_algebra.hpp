#pragma once

// Band-4 spherical-harmonic algebra for octahedral frames.
//
// Coefficients are stored in the order Y_{4,-4}, ..., Y_{4,4} (real SH with the
// Condon-Shortley phase). e^{v.L} acts on a coefficient vector as the rotation
// e^{[v]} of the encoded spherical function, i.e. frame axes x, y, z are mapped
// to the columns of e^{[v]}.

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>

namespace octaframe {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec7 = Eigen::Matrix<double, 7, 1>;
using Vec9 = Eigen::Matrix<double, 9, 1>;
using Mat9 = Eigen::Matrix<double, 9, 9>;
using Mat79 = Eigen::Matrix<double, 7, 9>;

/// Nine band-4 SH coefficients. Frames on the octahedral variety have unit norm;
/// relaxed solver output generally does not.
using ShFrame = Vec9;

/// The so(3) generators in the band-4 real SH basis.
struct AngularMomentum
{
    Mat9 x;
    Mat9 y;
    Mat9 z;

    const Mat9& operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
    Mat9 dot(const Vec3& v) const { return v.x() * x + v.y() * y + v.z() * z; }
};

/// The tabulated generators. Entries are exact radicals.
const AngularMomentum& angular_momentum();

/// [L_x, L_y] = kCommutatorSign * L_z (and cyclic). Checked against the table by the identity suite.
inline constexpr int kCommutatorSign = 1;

/// Squared norm of L_i g for any g on the variety: g^T L_i^T L_j g = (20/3) delta_ij.
inline constexpr double kGeneratorGram = 20.0 / 3.0;

/// Ratio between the lobe identities stored for the sqrt(7/12) lobe and the raw
/// closed forms kt/d2t, which describe a lobe of squared norm 4/21.
inline constexpr double kLobeRescale = 49.0 / 16.0;

/// sqrt(7/12): weight of Y_40 in the canonical frame, and the norm of the alignment target.
double normal_weight();
/// sqrt(5/12): weight of Y_44 in the canonical frame (the tangential part).
double tangential_weight();

/// f0 = (0,0,0,0,sqrt(7/12),0,0,0,sqrt(5/12)).
ShFrame canonical_frame();

/// The z-aligned lobe (0,0,0,0,sqrt(7/12),0,0,0,0).
ShFrame reference_lobe();

/// Alignment target u0 = (0,0,0,sqrt(7/12),0,0,0).
Vec7 alignment_target();

/// Closed form of e^{theta L_z}.
Mat9 exp_twist_matrix(double theta);

/// Real band-4 rotation about y, e^{beta L_y}, from the Wigner small-d matrix.
Mat9 exp_y_matrix(double beta);

/// Wigner small-d element d^l_{m'm}(beta) (complex SH convention), any band l <= 8.
double wigner_small_d(int l, int mp, int m, double beta);

/// Band-4 image of a rotation matrix, via ZYZ Euler angles.
Mat9 sh_rotation(const Mat3& rotation);

/// e^{v.L} for an axis-angle vector v (radians).
Mat9 exp_rotation(const Vec3& v);

/// Rotation matrix e^{[v]}.
Mat3 rotation_matrix(const Vec3& v);

/// ZYZ Euler angles (alpha, beta, gamma) with R = Rz(alpha) Ry(beta) Rz(gamma), beta in [0, pi].
std::array<double, 3> zyz_angles(const Mat3& rotation);

/// e^{theta L_z} f0.
ShFrame twist_z(double theta);

/// Axis-angle rotation taking z to n: axis parallel to z x n, angle acos(z.n).
/// n = -z maps to (pi, 0, 0).
Vec3 align_axis_angle(const Vec3& n);

/// Normal-alignment constraint for unit normal n: W f = u0.
struct AlignmentOperator
{
    Vec3 normal;
    Vec3 axis_angle;  ///< v_n
    Mat9 to_world;    ///< e^{v_n.L}
    Mat9 to_local;    ///< e^{-v_n.L}
    Mat79 W;          ///< rows 2..8 of e^{-v_n.L}
    Vec7 u0;
};

AlignmentOperator alignment_operator(const Vec3& n);

/// Lobe inner product for lobes at angle theta, raw closed form (9+20cos2t+35cos4t)/336.
double lobe_dot(double theta);
/// Squared lobe distance, raw closed form (5/42)(9+7cos2t)sin^2 t.
double lobe_dist_sq(double theta);
/// Same identities for the sqrt(7/12) lobe stored by this library.
double lobe_dot_scaled(double theta);
double lobe_dist_sq_scaled(double theta);

/// |f0 - e^{b (cos a, sin a, 0).L} e^{t L_z} f0|^2: cost of a crease of bend b and
/// direction a against a frame twisted by t.
double crease_energy(double a, double b, double t);

} // namespace octaframe
