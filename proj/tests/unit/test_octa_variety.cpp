#include "support.hpp"

#include <octaframe/error.hpp>
#include <octaframe/octa_variety.hpp>

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace octaframe;
using std::numbers::pi;

namespace {

// Best q . g over a fixed cloud of variety points: a lower bound for the projection.
struct SampledVariety
{
    std::vector<ShFrame> points;

    explicit SampledVariety(int count)
    {
        std::mt19937_64 rng(99);
        points.reserve(count);
        for (int k = 0; k < count; ++k) points.push_back(testing::random_variety_point(rng));
    }

    double best_dot(const ShFrame& q) const
    {
        double best = -1e300;
        for (const auto& g : points) best = std::max(best, q.dot(g));
        return best;
    }
};

const SampledVariety& sampled()
{
    static const SampledVariety s(60000);
    return s;
}

} // namespace

TEST_CASE("projection examples")
{
    ShFrame f0 = canonical_frame();
    Projection p = project_to_variety(f0);
    CHECK((p.frame - f0).norm() < 1e-9);
    CHECK(p.distance < 1e-9);
    CHECK_FALSE(p.low_confidence);

    std::mt19937_64 rng(1);
    for (int k = 0; k < 10; ++k) {
        ShFrame g = testing::random_variety_point(rng);
        Projection pg = project_to_variety(2.5 * g);
        CHECK((pg.frame - g).norm() < 1e-6);
        CHECK((exp_rotation(pg.axis_angle) * f0 - pg.frame).norm() < 1e-9);
        CHECK((rotation_matrix(pg.axis_angle) - pg.rotation).norm() < 1e-9);
    }

    CHECK(degeneracy_distance(ShFrame::Zero()) == doctest::Approx(1.0));
    CHECK(project_to_variety(ShFrame::Zero()).low_confidence);
    CHECK(degeneracy_distance(0.5 * f0) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("pure normal part sits at the tangential weight")
{
    // u0 embedded in rows 2..8: only the Y40 coefficient survives.
    ShFrame q = ShFrame::Zero();
    q.segment<7>(1) = alignment_target();
    double d = degeneracy_distance(q);
    CHECK(d == doctest::Approx(std::sqrt(5.0 / 12.0)).epsilon(1e-9));
    CHECK(d < kDegeneracyThreshold);

    // Sampled oracle: nothing on the variety is closer.
    double best = sampled().best_dot(q);
    double d_sampled = std::sqrt(1 + q.squaredNorm() - 2 * best);
    CHECK(d <= d_sampled + 1e-12);
    CHECK(d_sampled - d < 1e-2);
}

TEST_CASE("projection is globally optimal against a sampled oracle")
{
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    for (int k = 0; k < 25; ++k) {
        ShFrame q;
        for (int i = 0; i < 9; ++i) q(i) = g(rng);
        Projection p = project_to_variety(q);
        double value = q.dot(p.frame);
        CHECK(value >= sampled().best_dot(q) - 1e-12);
        CHECK(p.frame.norm() == doctest::Approx(1.0));
        CHECK(p.distance == doctest::Approx((p.frame - q).norm()));
    }
}

TEST_CASE("projection properties")
{
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g;
    for (int k = 0; k < 20; ++k) {
        ShFrame q;
        for (int i = 0; i < 9; ++i) q(i) = g(rng);
        Projection p = project_to_variety(q);
        Projection again = project_to_variety(p.frame);
        CHECK((again.frame - p.frame).norm() < 1e-9);

        Mat9 r = exp_rotation(testing::random_axis_angle(rng));
        CHECK(degeneracy_distance(r * q) == doctest::Approx(p.distance).epsilon(1e-9));
    }
    ShFrame q = ShFrame::Constant(0.3);
    CHECK((project_to_variety(q).frame - project_to_variety(q).frame).norm() == 0.0);
}

TEST_CASE("extract_cross")
{
    ExtractedCross c = extract_cross(canonical_frame(), Vec3::UnitZ());
    CHECK(c.theta == doctest::Approx(0.0));
    CHECK(c.scale == doctest::Approx(1.0));
    CHECK((c.dirs[0] - Vec3::UnitX()).norm() < 1e-12);
    CHECK((c.dirs[1] - Vec3::UnitY()).norm() < 1e-12);

    std::mt19937_64 rng(21);
    for (int k = 0; k < 10; ++k) {
        Vec3 n = testing::random_unit(rng);
        ShFrame f = exp_rotation(align_axis_angle(n)) * twist_z(0.2);
        ExtractedCross e = extract_cross(f, n);
        CHECK(e.theta == doctest::Approx(0.2).epsilon(1e-9));
        CHECK(e.scale == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::abs(e.dirs[0].dot(n)) < 1e-12);
        CHECK(std::abs(e.dirs[1].dot(n)) < 1e-12);
        CHECK(std::abs(e.dirs[0].dot(e.dirs[1])) < 1e-12);

        // Halving the tangential components halves the scale only.
        ShFrame local = twist_z(0.2);
        local(0) *= 0.5;
        local(8) *= 0.5;
        ExtractedCross half = extract_cross(exp_rotation(align_axis_angle(n)) * local, n);
        CHECK(half.theta == doctest::Approx(0.2).epsilon(1e-9));
        CHECK(half.scale == doctest::Approx(0.5).epsilon(1e-9));
    }

    SUBCASE("round trip")
    {
        std::uniform_real_distribution<double> angle(-4 * pi, 4 * pi);
        std::uniform_real_distribution<double> scale(0.2, 1.0);
        for (int k = 0; k < 200; ++k) {
            Vec3 n = testing::random_unit(rng);
            double theta = angle(rng);
            double s = scale(rng);
            ExtractedCross e = extract_cross(aligned_frame(n, theta, s), n);
            double expected = reduce_quarter_turn(theta);
            double diff = std::remainder(e.theta - expected, pi / 2);
            CHECK(std::abs(diff) < 1e-8);
            CHECK(e.scale == doctest::Approx(s).epsilon(1e-8));
            CHECK(e.theta >= 0.0);
            CHECK(e.theta < pi / 2);
        }
    }

    SUBCASE("no tangential part")
    {
        ShFrame f = reference_lobe();
        CHECK_THROWS_AS(extract_cross(f, Vec3::UnitZ()), DegenerateFrameError);
    }
}

TEST_CASE("reduce_quarter_turn")
{
    CHECK(reduce_quarter_turn(0.0) == 0.0);
    CHECK(reduce_quarter_turn(pi / 2) == doctest::Approx(0.0));
    CHECK(reduce_quarter_turn(-0.1) == doctest::Approx(pi / 2 - 0.1));
    CHECK(reduce_quarter_turn(7 * pi / 4) == doctest::Approx(pi / 4));
    CHECK(reduce_quarter_turn(std::nextafter(pi / 2, 0.0)) < pi / 2);
}
