#include <octaframe/error.hpp>
#include <octaframe/mesh.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

namespace octaframe {

namespace {

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        const std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

[[noreturn]] void parse_error(int line, const std::string& what)
{
    throw MeshError(MeshError::Kind::Parse, "OBJ line " + std::to_string(line) + ": " + what,
                    {std::to_string(line)});
}

double parse_double(std::string_view tok, int line)
{
    double value = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
        parse_error(line, "bad coordinate '" + std::string(tok) + "'");
    }
    return value;
}

// Vertex reference of a face token "i", "i/t", "i//n" or "i/t/n"; returns a 0-based index.
int parse_vertex_ref(std::string_view tok, int line, int vertex_count)
{
    const std::string_view head = tok.substr(0, tok.find('/'));
    int value = 0;
    const auto [ptr, ec] = std::from_chars(head.data(), head.data() + head.size(), value);
    if (ec != std::errc() || ptr != head.data() + head.size() || value == 0) {
        parse_error(line, "bad face index '" + std::string(tok) + "'");
    }
    const int idx = value > 0 ? value - 1 : vertex_count + value;
    if (idx < 0 || idx >= vertex_count) {
        parse_error(line, "face index " + std::to_string(value) + " out of range");
    }
    return idx;
}

} // namespace

SurfaceMesh parse_obj(const std::string& text, std::vector<std::string>* warnings)
{
    std::vector<Vec3> positions;
    std::vector<Eigen::Vector3i> triangles;

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view s = trim(raw);
        if (const auto hash = s.find('#'); hash != std::string_view::npos) s = trim(s.substr(0, hash));
        if (s.empty()) continue;
        const auto tokens = split(s);
        const std::string_view key = tokens[0];
        if (key == "v") {
            if (tokens.size() < 4) parse_error(line, "vertex needs three coordinates");
            positions.emplace_back(parse_double(tokens[1], line), parse_double(tokens[2], line),
                                   parse_double(tokens[3], line));
        } else if (key == "f") {
            if (tokens.size() < 4) parse_error(line, "face needs at least three vertices");
            const int count = static_cast<int>(positions.size());
            std::vector<int> poly;
            for (std::size_t i = 1; i < tokens.size(); ++i) poly.push_back(parse_vertex_ref(tokens[i], line, count));
            if (poly.size() > 3 && warnings) {
                warnings->push_back("line " + std::to_string(line) + ": " + std::to_string(poly.size()) +
                                    "-gon fan-triangulated");
            }
            for (std::size_t i = 1; i + 1 < poly.size(); ++i) triangles.emplace_back(poly[0], poly[i], poly[i + 1]);
        }
        // Other records (vn, vt, o, g, s, usemtl, ...) carry nothing the solver uses.
    }

    Vertices v(positions.size(), 3);
    for (std::size_t i = 0; i < positions.size(); ++i) v.row(i) = positions[i].transpose();
    Faces f(triangles.size(), 3);
    for (std::size_t i = 0; i < triangles.size(); ++i) f.row(i) = triangles[i].transpose();
    return SurfaceMesh::build(std::move(v), std::move(f));
}

SurfaceMesh load_obj(const std::filesystem::path& path, std::vector<std::string>* warnings)
{
    std::ifstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open mesh file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << file.rdbuf();
    if (file.bad()) throw IoError("failed reading '" + path.string() + "'");
    return parse_obj(buffer.str(), warnings);
}

std::string format_obj(const SurfaceMesh& mesh)
{
    std::string out;
    char buf[128];
    for (int i = 0; i < mesh.num_vertices(); ++i) {
        const Vec3 p = mesh.vertex(i);
        std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", p.x(), p.y(), p.z());
        out += buf;
    }
    for (int i = 0; i < mesh.num_faces(); ++i) {
        std::snprintf(buf, sizeof buf, "f %d %d %d\n", mesh.faces()(i, 0) + 1, mesh.faces()(i, 1) + 1,
                      mesh.faces()(i, 2) + 1);
        out += buf;
    }
    return out;
}

void save_obj(const SurfaceMesh& mesh, const std::filesystem::path& path)
{
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot write '" + path.string() + "'");
    file << format_obj(mesh);
    if (!file) throw IoError("failed writing '" + path.string() + "'");
}

} // namespace octaframe
