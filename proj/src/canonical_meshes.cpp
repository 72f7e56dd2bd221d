#include <octaframe/error.hpp>
#include <octaframe/mesh.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace octaframe {

namespace {

struct Builder
{
    std::vector<Vec3> points;
    std::vector<Eigen::Vector3i> triangles;

    int add(const Vec3& p)
    {
        points.push_back(p);
        return static_cast<int>(points.size()) - 1;
    }

    // Quad a-b-c-d in counter-clockwise order, split along a-c.
    void quad(int a, int b, int c, int d)
    {
        triangles.emplace_back(a, b, c);
        triangles.emplace_back(a, c, d);
    }

    SurfaceMesh finish() const
    {
        Vertices v(points.size(), 3);
        for (std::size_t i = 0; i < points.size(); ++i) v.row(i) = points[i].transpose();
        Faces f(triangles.size(), 3);
        for (std::size_t i = 0; i < triangles.size(); ++i) f.row(i) = triangles[i].transpose();
        return SurfaceMesh::build(std::move(v), std::move(f));
    }
};

// Surface lattice of the cube [-1/2, 1/2]^3 with n cells per side, welded at edges.
Builder cube_lattice(int n)
{
    if (n < 1) throw ConfigError("cube subdivisions must be >= 1");
    Builder b;
    std::map<std::array<int, 3>, int> index;
    auto vertex = [&](std::array<int, 3> ijk) {
        auto [it, inserted] = index.try_emplace(ijk, 0);
        if (inserted) {
            it->second = b.add(Vec3(ijk[0], ijk[1], ijk[2]) / n - Vec3::Constant(0.5));
        }
        return it->second;
    };
    for (int axis = 0; axis < 3; ++axis) {
        const int ub = (axis + 1) % 3;
        const int vb = (axis + 2) % 3;
        for (int side : {0, n}) {
            for (int u = 0; u < n; ++u) {
                for (int v = 0; v < n; ++v) {
                    auto at = [&](int du, int dv) {
                        std::array<int, 3> ijk{};
                        ijk[axis] = side;
                        ijk[ub] = u + du;
                        ijk[vb] = v + dv;
                        return vertex(ijk);
                    };
                    if (side == n) {
                        b.quad(at(0, 0), at(1, 0), at(1, 1), at(0, 1));
                    } else {
                        b.quad(at(0, 0), at(0, 1), at(1, 1), at(1, 0));
                    }
                }
            }
        }
    }
    return b;
}

template <class T>
T parse_number(const std::string& tok, const std::string& spec)
{
    T value{};
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        throw ConfigError("bad parameter '" + tok + "' in canonical mesh '" + spec + "'");
    }
    return value;
}

} // namespace

SurfaceMesh make_cube(int subdivisions)
{
    return cube_lattice(subdivisions).finish();
}

SurfaceMesh make_noisy_cube(double sigma, std::uint64_t seed, int subdivisions)
{
    if (!(sigma >= 0.0)) throw ConfigError("noisy_cube sigma must be >= 0");
    Builder b = cube_lattice(subdivisions);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, sigma / subdivisions);
    for (Vec3& p : b.points) {
        for (int k = 0; k < 3; ++k) p[k] += normal(rng);
    }
    return b.finish();
}

SurfaceMesh make_wedge(double dihedral, int nx, int nu)
{
    if (!(dihedral > 0.0 && dihedral <= std::numbers::pi)) throw ConfigError("wedge dihedral must be in (0, pi]");
    if (nx < 1 || nu < 1) throw ConfigError("wedge resolution must be >= 1");
    Builder b;
    const Vec3 fold(0.0, -std::cos(dihedral), std::sin(dihedral));
    std::vector<int> id((nx + 1) * (2 * nu + 1));
    for (int i = 0; i <= nx; ++i) {
        const double x = static_cast<double>(i) / nx - 0.5;
        for (int j = 0; j <= 2 * nu; ++j) {
            const double u = static_cast<double>(j - nu) / nu;
            const Vec3 p = u <= 0 ? Vec3(x, u, 0.0) : Vec3(x, 0.0, 0.0) + u * fold;
            id[i * (2 * nu + 1) + j] = b.add(p);
        }
    }
    auto at = [&](int i, int j) { return id[i * (2 * nu + 1) + j]; };
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < 2 * nu; ++j) b.quad(at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1));
    }
    return b.finish();
}

SurfaceMesh make_flat_grid(int n)
{
    if (n < 1) throw ConfigError("flat_grid size must be >= 1");
    Builder b;
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) b.add(Vec3(static_cast<double>(i) / n, static_cast<double>(j) / n, 0.0));
    }
    auto at = [&](int i, int j) { return i * (n + 1) + j; };
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) b.quad(at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1));
    }
    return b.finish();
}

SurfaceMesh make_three_cylinders(int subdivisions)
{
    Builder b = cube_lattice(subdivisions);
    for (Vec3& p : b.points) {
        const double r = std::max({std::hypot(p.x(), p.y()), std::hypot(p.y(), p.z()), std::hypot(p.x(), p.z())});
        p /= r;
    }
    return b.finish();
}

SurfaceMesh make_icosphere(int levels)
{
    if (levels < 0) throw ConfigError("icosphere levels must be >= 0");
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    Builder b;
    for (const Vec3& p : {Vec3(-1, t, 0), Vec3(1, t, 0), Vec3(-1, -t, 0), Vec3(1, -t, 0), Vec3(0, -1, t),
                          Vec3(0, 1, t), Vec3(0, -1, -t), Vec3(0, 1, -t), Vec3(t, 0, -1), Vec3(t, 0, 1),
                          Vec3(-t, 0, -1), Vec3(-t, 0, 1)}) {
        b.add(p.normalized());
    }
    b.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                   {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                   {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
    for (int level = 0; level < levels; ++level) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int c) {
            const auto key = std::minmax(a, c);
            auto [it, inserted] = midpoint.try_emplace(key, 0);
            if (inserted) it->second = b.add((b.points[a] + b.points[c]).normalized());
            return it->second;
        };
        std::vector<Eigen::Vector3i> next;
        for (const auto& tri : b.triangles) {
            const int ab = mid(tri[0], tri[1]);
            const int bc = mid(tri[1], tri[2]);
            const int ca = mid(tri[2], tri[0]);
            next.emplace_back(tri[0], ab, ca);
            next.emplace_back(tri[1], bc, ab);
            next.emplace_back(tri[2], ca, bc);
            next.emplace_back(ab, bc, ca);
        }
        b.triangles = std::move(next);
    }
    return b.finish();
}

SurfaceMesh make_canonical_mesh(const std::string& spec)
{
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string tok; std::getline(ss, tok, ':');) parts.push_back(tok);
    if (parts.empty()) throw ConfigError("empty canonical mesh name");
    const std::string& name = parts[0];
    auto arg = [&](std::size_t i) -> const std::string& { return parts.at(i); };
    auto has = [&](std::size_t i) { return parts.size() > i; };
    auto check_arity = [&](std::size_t lo, std::size_t hi) {
        if (parts.size() - 1 < lo || parts.size() - 1 > hi) {
            throw ConfigError("wrong number of parameters for canonical mesh '" + spec + "'");
        }
    };

    if (name == "cube") {
        check_arity(0, 1);
        return make_cube(has(1) ? parse_number<int>(arg(1), spec) : 1);
    }
    if (name == "wedge") {
        check_arity(1, 3);
        return make_wedge(parse_number<double>(arg(1), spec), has(2) ? parse_number<int>(arg(2), spec) : 10,
                          has(3) ? parse_number<int>(arg(3), spec) : 10);
    }
    if (name == "noisy_cube") {
        check_arity(2, 3);
        return make_noisy_cube(parse_number<double>(arg(1), spec), parse_number<std::uint64_t>(arg(2), spec),
                               has(3) ? parse_number<int>(arg(3), spec) : 6);
    }
    if (name == "flat_grid") {
        check_arity(1, 1);
        return make_flat_grid(parse_number<int>(arg(1), spec));
    }
    if (name == "cylinder3") {
        check_arity(0, 1);
        return make_three_cylinders(has(1) ? parse_number<int>(arg(1), spec) : 8);
    }
    if (name == "icosphere") {
        check_arity(0, 1);
        return make_icosphere(has(1) ? parse_number<int>(arg(1), spec) : 2);
    }
    throw ConfigError("unknown canonical mesh '" + name + "'");
}

} // namespace octaframe
