#include "support.hpp"

#include <octaframe/energy.hpp>
#include <octaframe/error.hpp>

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace octaframe;
using std::numbers::pi;

namespace {

// Two triangles sharing a unit edge with barycenters 1/2 apart: w = 2.
SurfaceMesh two_faces()
{
    Vertices v(4, 3);
    v << 0, 0, 0, 1, 0, 0, 0.5, 0.75, 0, 0.5, -0.75, 0;
    Faces f(2, 3);
    f << 0, 1, 2, 1, 0, 3;
    return SurfaceMesh::build(v, f);
}

SolveConfig with_p(double p)
{
    SolveConfig c;
    c.p = p;
    return c;
}

FieldVector random_field(int faces, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    FieldVector f(9 * faces);
    for (int i = 0; i < f.size(); ++i) f(i) = g(rng);
    return f;
}

FieldVector constant_field(int faces, const ShFrame& frame)
{
    FieldVector f(9 * faces);
    for (int t = 0; t < faces; ++t) f.segment<9>(9 * t) = frame;
    return f;
}

} // namespace

TEST_CASE("assembly counts")
{
    Problem cube = assemble(make_cube(1), with_p(2));
    CHECK(cube.edges().size() == 18);
    CHECK(cube.alignments().size() == 12);
    CHECK(cube.equality_row_count() == 84);
    CHECK(cube.num_variables() == 108);

    auto w = cube.alignment_matrix();
    CHECK(w.rows() == 84);
    CHECK(w.cols() == 108);
    // block diagonal: row block t only touches columns of face t
    for (int k = 0; k < w.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(w, k); it; ++it) CHECK(it.row() / 7 == it.col() / 9);
    CHECK(cube.alignment_rhs().size() == 84);

    SolveConfig soft = with_p(2);
    soft.epsilon = 0.3;
    CHECK(assemble(make_cube(1), soft).equality_row_count() == 0);
}

TEST_CASE("two-face arithmetic")
{
    SurfaceMesh m = two_faces();
    REQUIRE(m.interior_edges().size() == 1);
    CHECK(m.interior_edges()[0].weight == doctest::Approx(2.0));

    FieldVector f = FieldVector::Zero(18);
    f.segment<9>(0) = canonical_frame();
    f.segment<9>(9) = canonical_frame();
    f(9 + 3) += 1.0;

    CHECK(evaluate_energy(assemble(m, with_p(1)), f) == doctest::Approx(2.0));
    CHECK(evaluate_energy(assemble(m, with_p(2)), f) == doctest::Approx(std::sqrt(2.0)));
    // weights fold to w^(1/p) and vanish as p grows
    CHECK(evaluate_energy(assemble(m, with_p(kInfinity)), f) == doctest::Approx(1.0));
    CHECK(evaluate_energy(assemble(m, with_p(4)), f) == doctest::Approx(std::pow(2.0, 0.25)));
}

TEST_CASE("constant and facet-aligned fields have zero energy")
{
    SurfaceMesh flat = make_flat_grid(4);
    std::mt19937_64 rng(2);
    FieldVector f = constant_field(flat.num_faces(), testing::random_variety_point(rng));
    for (double p : {1.0, 1.5, 2.0, 3.0, kInfinity}) CHECK(evaluate_energy(assemble(flat, with_p(p)), f) == 0.0);

    SurfaceMesh cube = make_cube(2);
    FieldVector g = constant_field(cube.num_faces(), canonical_frame());
    for (double p : {1.0, 2.0, kInfinity}) {
        Problem prob = assemble(cube, with_p(p));
        CHECK(evaluate_energy(prob, g) == 0.0);
        CHECK(max_alignment_violation(prob, g) < 1e-12);
    }
}

TEST_CASE("energy is a norm of the edge differences")
{
    SurfaceMesh m = make_noisy_cube(0.1, 4, 2);
    std::mt19937_64 rng(9);
    for (double p : {1.0, 1.7, 2.0, 3.0, kInfinity}) {
        Problem prob = assemble(m, with_p(p));
        for (int k = 0; k < 5; ++k) {
            FieldVector f = random_field(m.num_faces(), rng);
            FieldVector g = random_field(m.num_faces(), rng);
            double ef = evaluate_energy(prob, f);
            CHECK(evaluate_energy(prob, -2.5 * f) == doctest::Approx(2.5 * ef).epsilon(1e-12));
            CHECK(evaluate_energy(prob, f + g) <= ef + evaluate_energy(prob, g) + 1e-12);
        }
    }
}

TEST_CASE("l_p aggregation is nonincreasing in p")
{
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0, 3);
    for (int k = 0; k < 20; ++k) {
        std::vector<double> values(15);
        for (auto& v : values) v = u(rng);
        double previous = aggregate_lp(values, 1.0);
        for (double p : {1.2, 1.5, 2.0, 3.0, 5.0, 10.0, kInfinity}) {
            double current = aggregate_lp(values, p);
            CHECK(current <= previous + 1e-12);
            previous = current;
        }
        CHECK(aggregate_lp(values, kInfinity) == *std::max_element(values.begin(), values.end()));
    }
    CHECK(aggregate_lp(std::vector<double>{3, 4}, 2) == doctest::Approx(5.0));
}

TEST_CASE("gradient of the powered energy matches finite differences")
{
    SurfaceMesh m = make_noisy_cube(0.1, 5, 1);
    std::mt19937_64 rng(12);
    for (double p : {2.0, 3.0, 4.5}) {
        Problem prob = assemble(m, with_p(p));
        FieldVector f = random_field(m.num_faces(), rng);
        FieldVector grad = energy_power_gradient(prob, f);
        auto powered = [&](const FieldVector& x) { return std::pow(evaluate_energy(prob, x), p); };
        const double h = 1e-6;
        for (int i = 0; i < f.size(); i += 5) {
            FieldVector a = f, b = f;
            a(i) += h;
            b(i) -= h;
            double fd = (powered(a) - powered(b)) / (2 * h);
            CHECK(grad(i) == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
        }
    }
    CHECK_THROWS_AS(energy_power_gradient(assemble(m, with_p(kInfinity)), FieldVector::Zero(9 * m.num_faces())),
                    ConfigError);
}

TEST_CASE("prescriptions")
{
    SurfaceMesh cube = make_cube(1);
    const Vec3 n0 = cube.face_normals()[0];
    ShFrame good = aligned_frame(n0, 0.3);

    Problem ok = assemble(cube, with_p(2), std::vector<Prescription>{{0, good}, {0, good}});
    CHECK(ok.num_fixed() == 1);
    CHECK(ok.is_user_prescribed(0));
    CHECK(ok.equality_row_count() == 84 + 9);

    CHECK_THROWS_AS(assemble(cube, with_p(2), std::vector<Prescription>{{0, 1.1 * good}}), ConfigError);
    const Vec3 other = Eigen::AngleAxisd(0.3, n0.unitOrthogonal()) * n0;
    CHECK_THROWS_AS(assemble(cube, with_p(2), std::vector<Prescription>{{0, aligned_frame(other, 0.0)}}), ConfigError);
    CHECK_THROWS_AS(assemble(cube, with_p(2), std::vector<Prescription>{{0, good}, {0, aligned_frame(n0, 0.5)}}),
                    ConfigError);
    CHECK_THROWS_AS(assemble(cube, with_p(2), std::vector<Prescription>{{12, good}}), ConfigError);

    SolveConfig vacuous = with_p(2);
    vacuous.epsilon = std::sqrt(7.0 / 12.0);
    CHECK_THROWS_AS(assemble(cube, vacuous), ConfigError);
    SolveConfig bad_p = with_p(0.5);
    CHECK_THROWS_AS(assemble(cube, bad_p), ConfigError);

    SUBCASE("all faces prescribed")
    {
        std::vector<Prescription> all;
        FieldVector f(9 * cube.num_faces());
        for (int t = 0; t < cube.num_faces(); ++t) {
            ShFrame frame = aligned_frame(cube.face_normals()[t], 0.1 * t);
            all.push_back({t, frame});
            f.segment<9>(9 * t) = frame;
        }
        Problem prob = assemble(cube, with_p(2), all);
        CHECK(prob.num_fixed() == cube.num_faces());
        double expected = 0;
        for (const auto& e : prob.edges())
            expected += e.weight * (frame_of(f, e.face0) - frame_of(f, e.face1)).squaredNorm();
        CHECK(evaluate_energy(prob, f) == doctest::Approx(std::sqrt(expected)));
    }
}
