#include <octaframe/error.hpp>
#include <octaframe/mesh.hpp>

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <numeric>
#include <string>

using namespace octaframe;
using std::numbers::pi;

namespace {

const char* kCubeObj = R"(# unit cube
v 0 0 0
v 1 0 0
v 1 1 0
v 0 1 0
v 0 0 1
v 1 0 1
v 1 1 1
v 0 1 1
f 1 3 2
f 1 4 3
f 5 6 7
f 5 7 8
f 1 2 6
f 1 6 5
f 2 3 7
f 2 7 6
f 3 4 8
f 3 8 7
f 4 1 5
f 4 5 8
)";

MeshError::Kind error_kind(const std::string& obj)
{
    try {
        parse_obj(obj);
    } catch (const MeshError& e) {
        return e.kind();
    }
    FAIL("no MeshError");
    return MeshError::Kind::Parse;
}

double total_defect(const SurfaceMesh& mesh)
{
    auto d = vertex_angle_defects(mesh);
    return std::accumulate(d.begin(), d.end(), 0.0);
}

} // namespace

TEST_CASE("cube OBJ")
{
    SurfaceMesh m = parse_obj(kCubeObj);
    CHECK(m.num_vertices() == 8);
    CHECK(m.num_faces() == 12);
    CHECK(m.interior_edges().size() == 18);
    CHECK(m.boundary_edges().empty());
    CHECK(m.euler_characteristic() == 2);
    CHECK(m.is_closed());
    for (int f = 0; f < m.num_faces(); ++f) {
        CHECK(m.face_normals()[f].norm() == doctest::Approx(1.0));
        // outward: normal points away from the centre
        CHECK(m.face_normals()[f].dot(m.barycenter(f) - Vec3(0.5, 0.5, 0.5)) > 0);
    }
    for (const auto& e : m.interior_edges()) CHECK(e.weight > 0);
    CHECK(total_defect(m) == doctest::Approx(4 * pi).epsilon(1e-12));
}

TEST_CASE("single triangle")
{
    SurfaceMesh m = parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n");
    CHECK(m.interior_edges().empty());
    CHECK(m.boundary_edges().size() == 3);
    CHECK(m.euler_characteristic() == 1);
    CHECK(boundary_vertices(m) == std::vector<bool>{true, true, true});
}

TEST_CASE("dual edge weights")
{
    SUBCASE("unit square split on its diagonal")
    {
        SurfaceMesh m = parse_obj("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3\nf 1 3 4\n");
        REQUIRE(m.interior_edges().size() == 1);
        // |e| = sqrt 2, barycenters (2/3,1/3) and (1/3,2/3) are sqrt(2)/3 apart.
        CHECK(m.interior_edges()[0].weight == doctest::Approx(3.0).epsilon(1e-14));
        CHECK(edge_weights(m)[0] == doctest::Approx(3.0));
    }
    SUBCASE("equilateral pair")
    {
        const double h = std::sqrt(3.0) / 2;
        SurfaceMesh m = parse_obj("v 0 0 0\nv 1 0 0\nv 0.5 " + std::to_string(h) + " 0\nv 0.5 -" + std::to_string(h) +
                                  " 0\nf 1 2 3\nf 2 1 4\n");
        REQUIRE(m.interior_edges().size() == 1);
        CHECK(m.interior_edges()[0].weight == doctest::Approx(std::sqrt(3.0)).epsilon(1e-6));
    }
    SUBCASE("scale invariance")
    {
        SurfaceMesh a = make_noisy_cube(0.1, 3, 3);
        Vertices scaled = a.vertices() * 7.5;
        SurfaceMesh b = SurfaceMesh::build(scaled, a.faces());
        auto wa = edge_weights(a);
        auto wb = edge_weights(b);
        REQUIRE(wa.size() == wb.size());
        for (std::size_t i = 0; i < wa.size(); ++i) CHECK(wa[i] == doctest::Approx(wb[i]).epsilon(1e-12));
    }
}

TEST_CASE("validation errors")
{
    CHECK(error_kind("v 0 0 0\nv 1 0 0\nv 2 0 0\nf 1 2 3\n") == MeshError::Kind::DegenerateFace);
    CHECK(error_kind("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 4\n") == MeshError::Kind::Parse);
    CHECK(error_kind("v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\nv 1 1 1\n"
                     "f 1 2 3\nf 2 1 4\nf 1 2 5\n") == MeshError::Kind::NonManifoldEdge);
    CHECK(error_kind("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3\nf 3 1 4\n") == MeshError::Kind::Orientation);

    SUBCASE("line numbers")
    {
        try {
            parse_obj("v 0 0 0\n# comment\nv 1 zero 0\n");
            FAIL("expected a parse error");
        } catch (const MeshError& e) {
            CHECK(e.kind() == MeshError::Kind::Parse);
            REQUIRE(e.items().size() == 1);
            CHECK(e.items()[0] == "3");
            CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        }
    }
    SUBCASE("offending face index")
    {
        try {
            parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nv 5 5 0\nf 1 2 3\nf 2 4 4\n");
            FAIL("expected a degenerate face");
        } catch (const MeshError& e) {
            CHECK(e.kind() == MeshError::Kind::DegenerateFace);
            CHECK(e.items() == std::vector<std::string>{"1"});
        }
    }
    CHECK_THROWS_AS(load_obj("/nonexistent/mesh.obj"), IoError);
}

TEST_CASE("polygons and extra records")
{
    std::vector<std::string> warnings;
    SurfaceMesh m = parse_obj("o quad\nv 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nvn 0 0 1\nf 1//1 2//1 3//1 4//1\n", &warnings);
    CHECK(m.num_faces() == 2);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("line 7") != std::string::npos);

    SurfaceMesh neg = parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf -3 -2 -1\n");
    CHECK(neg.faces()(0, 0) == 0);
    CHECK(neg.faces()(0, 2) == 2);
}

TEST_CASE("writer round trip")
{
    SurfaceMesh m = make_noisy_cube(0.2, 11, 2);
    std::string once = format_obj(m);
    SurfaceMesh reloaded = parse_obj(once);
    CHECK(format_obj(reloaded) == once);
    CHECK((reloaded.vertices() - m.vertices()).cwiseAbs().maxCoeff() == 0.0);

    auto path = std::filesystem::temp_directory_path() / "octaframe_roundtrip.obj";
    save_obj(m, path);
    CHECK(format_obj(load_obj(path)) == once);
    std::filesystem::remove(path);
}

TEST_CASE("canonical meshes")
{
    for (const char* spec : {"cube", "cube:3", "noisy_cube:0.05:7", "cylinder3:4", "icosphere:2"}) {
        INFO(spec);
        SurfaceMesh m = make_canonical_mesh(spec);
        CHECK(m.is_closed());
        CHECK(m.euler_characteristic() == 2);
        CHECK(total_defect(m) == doctest::Approx(4 * pi).epsilon(1e-9));
    }
    CHECK(make_cube(1).num_faces() == 12);
    CHECK(make_cube(4).num_faces() == 192);

    SurfaceMesh wedge = make_canonical_mesh("wedge:1.5707963267948966");
    CHECK_FALSE(wedge.is_closed());
    int creases = 0;
    for (const auto& e : wedge.interior_edges()) {
        double dev = wedge.dihedral_deviation(e);
        if (dev > 1e-9) {
            ++creases;
            CHECK(dev == doctest::Approx(pi / 2));
            // the crease runs along x
            Vec3 dir = wedge.vertex(e.v1) - wedge.vertex(e.v0);
            CHECK(std::abs(dir.normalized().x()) == doctest::Approx(1.0));
        }
    }
    CHECK(creases == 10);

    SurfaceMesh flat = make_flat_grid(4);
    CHECK(flat.num_faces() == 32);
    CHECK(flat.euler_characteristic() == 1);

    SurfaceMesh a = make_canonical_mesh("noisy_cube:0.05:7");
    SurfaceMesh b = make_canonical_mesh("noisy_cube:0.05:7");
    SurfaceMesh c = make_canonical_mesh("noisy_cube:0.05:8");
    CHECK(format_obj(a) == format_obj(b));
    CHECK(format_obj(a) != format_obj(c));

    CHECK_THROWS_AS(make_canonical_mesh("torus"), ConfigError);
    CHECK_THROWS_AS(make_canonical_mesh("cube:x"), ConfigError);
}

TEST_CASE("Gauss-Bonnet on open meshes sums defects consistently")
{
    // A flat grid has zero interior defect.
    SurfaceMesh flat = make_flat_grid(5);
    auto defects = vertex_angle_defects(flat);
    auto boundary = boundary_vertices(flat);
    for (int v = 0; v < flat.num_vertices(); ++v)
        if (!boundary[v]) CHECK(std::abs(defects[v]) < 1e-12);
}
