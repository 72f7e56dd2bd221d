#include <octaframe/identities.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace octaframe {

namespace {

using std::numbers::pi;

Vec3 random_axis_angle(std::mt19937_64& rng, double max_angle)
{
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform;
    Vec3 axis(normal(rng), normal(rng), normal(rng));
    axis.normalize();
    return axis * max_angle * std::cbrt(uniform(rng));
}

Mat9 expm9(const Mat9& a)
{
    return expm_taylor(a);
}

IdentityCheck check(std::string name, double residual, double tolerance)
{
    return {std::move(name), residual, tolerance, residual < tolerance};
}

} // namespace

Eigen::MatrixXd expm_taylor(const Eigen::MatrixXd& a)
{
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    const Eigen::MatrixXd scaled = a / std::ldexp(1.0, squarings);
    Eigen::MatrixXd result = Eigen::MatrixXd::Identity(a.rows(), a.cols());
    Eigen::MatrixXd term = result;
    for (int k = 1; k <= 24; ++k) {
        term = term * scaled / static_cast<double>(k);
        result += term;
    }
    for (int i = 0; i < squarings; ++i) result = result * result;
    return result;
}

std::vector<IdentityCheck> run_identity_suite(const AngularMomentum& l, const IdentityOptions& options)
{
    std::vector<IdentityCheck> out;
    std::mt19937_64 rng(options.seed);
    const ShFrame f0 = canonical_frame();
    const ShFrame lobe = reference_lobe();

    {
        double r = 0;
        for (int i = 0; i < 3; ++i) r = std::max(r, (l[i] + l[i].transpose()).cwiseAbs().maxCoeff());
        out.push_back(check("antisymmetry", r, 1e-15));
    }
    {
        double r = 0;
        for (int i = 0; i < 3; ++i) {
            const Mat9& a = l[i];
            const Mat9& b = l[(i + 1) % 3];
            const Mat9& c = l[(i + 2) % 3];
            r = std::max(r, (a * b - b * a - kCommutatorSign * c).cwiseAbs().maxCoeff());
        }
        out.push_back(check("commutators", r, 1e-12));
    }
    {
        double r = 0;
        for (int n = 0; n < options.rotations; ++n) {
            const ShFrame g = exp_rotation(random_axis_angle(rng, pi)) * f0;
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    const double gram = (l[i] * g).dot(l[j] * g);
                    r = std::max(r, std::abs(gram - (i == j ? kGeneratorGram : 0.0)));
                }
            }
        }
        out.push_back(check("generator_gram_20_3", r, 1e-9));
    }
    {
        double r = 0;
        double orth = 0;
        for (int n = 0; n < options.exp_samples; ++n) {
            const Vec3 v = random_axis_angle(rng, pi);
            const Mat9 fast = exp_rotation(v);
            r = std::max(r, (fast - expm9(l.dot(v))).cwiseAbs().maxCoeff());
            orth = std::max(orth, (fast.transpose() * fast - Mat9::Identity()).cwiseAbs().maxCoeff());
        }
        out.push_back(check("exp_zyz_vs_taylor", r, 1e-9));
        out.push_back(check("exp_orthogonal", orth, 1e-12));
    }
    {
        double r = 0;
        for (int n = 0; n < 100; ++n) {
            const Vec3 v = random_axis_angle(rng, pi);
            const Vec3 w = random_axis_angle(rng, pi);
            const Mat9 composed = exp_rotation(v) * exp_rotation(w);
            r = std::max(r, (composed - sh_rotation(rotation_matrix(v) * rotation_matrix(w))).cwiseAbs().maxCoeff());
        }
        out.push_back(check("exp_homomorphism", r, 1e-9));
    }
    {
        double r = 0;
        for (int n = 0; n <= options.grid; ++n) {
            const double theta = 2 * pi * n / std::max(options.grid, 1);
            r = std::max(r, (exp_twist_matrix(theta) - expm9(theta * l.z)).cwiseAbs().maxCoeff());
        }
        out.push_back(check("twist_closed_form", r, 1e-9));
    }
    {
        const double r = std::max((expm9(pi / 2 * l.z) * f0 - f0).cwiseAbs().maxCoeff(),
                                  (exp_rotation(Vec3(0, 0, pi / 2)) * f0 - f0).cwiseAbs().maxCoeff());
        out.push_back(check("twist_period_pi_2", r, 1e-12));
    }
    {
        // d/dtheta of the closed form at 0 is 4 sqrt(5/12) in the first component.
        ShFrame derivative = ShFrame::Zero();
        derivative[0] = 4 * tangential_weight();
        const double r = std::max(std::abs((l.z * f0).squaredNorm() - kGeneratorGram),
                                  (derivative - l.z * f0).cwiseAbs().maxCoeff());
        out.push_back(check("twist_derivative", r, 1e-9));
    }
    {
        // Holds for the lobe of squared norm 4/21, i.e. 4/7 of the stored one.
        const ShFrame raw = 4.0 / 7.0 * lobe;
        const ShFrame sum = raw + expm9(pi / 2 * l.x) * raw + expm9(pi / 2 * l.y) * raw;
        out.push_back(check("canonical_from_lobes", (sum - f0).cwiseAbs().maxCoeff(), 1e-12));
    }
    {
        const int n = std::max(options.grid, 2);
        double r = 0;
        for (int i = 0; i < n; ++i) {
            const double b = pi * i / n;
            const double base = crease_energy(0, b, 0);
            for (int j = 0; j < n; ++j) {
                const double t = pi * j / n;
                const double s = std::sin(2 * t);
                const double closed = 5.0 / 24.0 * (7 + std::cos(4 * b)) * s * s;
                r = std::max(r, std::abs(crease_energy(0, b, t) - base - closed));
            }
        }
        out.push_back(check("crease_closed_form", r, 1e-9));
    }
    {
        const int n = std::max(2 * options.grid / 5, 4);
        double lowest = 0;
        for (int ib = 0; ib < n; ++ib) {
            const double b = pi * ib / n;
            const double base = crease_energy(0, b, 0);
            for (int ia = 0; ia < n; ++ia) {
                for (int it = 0; it < n; ++it) {
                    lowest = std::min(lowest, crease_energy(pi * ia / n, b, pi * it / n) - base);
                }
            }
        }
        // Residual is how far the grid dips below the crease-aligned baseline.
        out.push_back(check("crease_aligned_minimum", std::max(0.0, -lowest), 1e-9));
    }
    {
        double r = 0;
        double r_exp = 0;
        const double w = normal_weight() * normal_weight();
        for (int n = 0; n < options.lobe_samples; ++n) {
            const double theta = pi * n / std::max(options.lobe_samples - 1, 1);
            const double d00 = wigner_small_d(4, 0, 0, theta);
            const double dot = w * d00;
            const double dist = 2 * w * (1 - d00);
            r = std::max({r, std::abs(dot - kLobeRescale * lobe_dot(theta)),
                          std::abs(dist - kLobeRescale * lobe_dist_sq(theta)),
                          std::abs(dot - lobe_dot_scaled(theta)), std::abs(dist - lobe_dist_sq_scaled(theta))});
            const ShFrame rotated = expm9(theta * l.x) * lobe;
            r_exp = std::max({r_exp, std::abs(lobe.dot(rotated) - dot), std::abs((lobe - rotated).squaredNorm() - dist)});
        }
        out.push_back(check("lobe_formulas", r, 1e-9));
        out.push_back(check("lobe_vs_exponential", r_exp, 1e-9));
    }
    return out;
}

} // namespace octaframe
