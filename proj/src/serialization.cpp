#include <octaframe/error.hpp>
#include <octaframe/serialization.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace octaframe {

using nlohmann::json;

namespace {

template <class Vec>
json to_array(const Vec& v)
{
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

template <int N>
Eigen::Matrix<double, N, 1> vector_from(const json& j, const std::string& what)
{
    if (!j.is_array() || j.size() != N) {
        throw ConfigError(what + ": expected an array of " + std::to_string(N) + " numbers");
    }
    Eigen::Matrix<double, N, 1> v;
    for (int i = 0; i < N; ++i) {
        if (!j[i].is_number()) throw ConfigError(what + ": entry " + std::to_string(i) + " is not a number");
        v[i] = j[i].get<double>();
    }
    return v;
}

json exponent_to_json(double p)
{
    if (std::isinf(p)) return "inf";
    return p;
}

double exponent_from_json(const json& j)
{
    if (j.is_string()) return parse_exponent(j.get<std::string>());
    if (j.is_number()) return j.get<double>();
    throw ConfigError("p must be a number or \"inf\"");
}

template <class T>
void read_field(const json& j, const char* key, T& out)
{
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
}

} // namespace

std::string format_double(double value)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

json config_to_json(const SolveConfig& c)
{
    return {{"p", exponent_to_json(c.p)},
            {"epsilon", c.epsilon},
            {"tol_primal", c.tol_primal},
            {"tol_dual", c.tol_dual},
            {"tol_direct", c.tol_direct},
            {"max_iter", c.max_iter},
            {"degeneracy_threshold", c.degeneracy_threshold},
            {"resolve_rounds", c.resolve_rounds},
            {"seed", c.seed},
            {"record_trace", c.record_trace},
            {"trace_stride", c.trace_stride}};
}

SolveConfig config_from_json(const json& j)
{
    if (!j.is_object()) throw ConfigError("solve config must be a JSON object");
    SolveConfig c;
    if (j.contains("p")) c.p = exponent_from_json(j.at("p"));
    read_field(j, "epsilon", c.epsilon);
    read_field(j, "tol_primal", c.tol_primal);
    read_field(j, "tol_dual", c.tol_dual);
    read_field(j, "tol_direct", c.tol_direct);
    read_field(j, "max_iter", c.max_iter);
    read_field(j, "degeneracy_threshold", c.degeneracy_threshold);
    read_field(j, "resolve_rounds", c.resolve_rounds);
    read_field(j, "seed", c.seed);
    read_field(j, "record_trace", c.record_trace);
    read_field(j, "trace_stride", c.trace_stride);
    validate(c);
    return c;
}

json problem_to_json(const Problem& problem)
{
    json edges = json::array();
    for (const EdgeTerm& e : problem.edges()) edges.push_back({{"faces", {e.face0, e.face1}}, {"weight", e.weight}});
    json faces = json::array();
    for (int t = 0; t < problem.num_faces(); ++t) {
        const AlignmentOperator& a = problem.alignment(t);
        json w = json::array();
        for (int r = 0; r < 7; ++r) w.push_back(to_array(Vec9(a.W.row(r).transpose())));
        json face = {{"normal", to_array(a.normal)}, {"axis_angle", to_array(a.axis_angle)}, {"W", w}, {"u0", to_array(a.u0)}};
        if (const auto& fixed = problem.fixed(t)) {
            face["fixed"] = to_array(*fixed);
            face["user_prescribed"] = problem.is_user_prescribed(t);
        }
        faces.push_back(std::move(face));
    }
    return {{"p", exponent_to_json(problem.p())},
            {"epsilon", problem.epsilon()},
            {"num_faces", problem.num_faces()},
            {"num_fixed", problem.num_fixed()},
            {"equality_rows", problem.equality_row_count()},
            {"edges", std::move(edges)},
            {"faces", std::move(faces)}};
}

json report_to_json(const SolveReport& r)
{
    return {{"backend", r.backend},
            {"converged", r.converged},
            {"iterations", r.iterations},
            {"primal_residual", r.primal_residual},
            {"dual_residual", r.dual_residual},
            {"objective", r.objective},
            {"projected_objective", r.projected_objective},
            {"rho", r.rho},
            {"wall_seconds", r.wall_seconds},
            {"resolve_rounds_run", r.resolve_rounds_run},
            {"resolved_faces", r.resolved_faces},
            {"non_degenerate_fraction", r.non_degenerate_fraction},
            {"degenerate_faces", r.degenerate_faces},
            {"degeneracy_distance", r.degeneracy}};
}

json field_to_json(const SolveResult& result, std::span<const FaceCross> crosses)
{
    const int nf = static_cast<int>(crosses.size());
    json faces = json::array();
    for (int t = 0; t < nf; ++t) {
        const FaceCross& c = crosses[t];
        json face = {{"frame", to_array(frame_of(result.projected, t))},
                     {"raw", to_array(frame_of(result.raw, t))},
                     {"theta", c.cross.theta},
                     {"scale", c.cross.scale},
                     {"dirs", {to_array(c.cross.dirs[0]), to_array(c.cross.dirs[1])}},
                     {"degenerate", c.degenerate}};
        if (t < static_cast<int>(result.report.degeneracy.size())) face["degeneracy_distance"] = result.report.degeneracy[t];
        faces.push_back(std::move(face));
    }
    return {{"format", "octaframe-field"},
            {"version", std::to_string(kFieldFormatMajor) + "." + std::to_string(kFieldFormatMinor)},
            {"num_faces", nf},
            {"faces", std::move(faces)}};
}

LoadedField field_from_json(const json& j)
{
    if (!j.is_object() || j.value("format", "") != "octaframe-field") throw ConfigError("not a field document");
    const std::string version = j.value("version", "");
    LoadedField out;
    if (std::sscanf(version.c_str(), "%d.%d", &out.major, &out.minor) != 2) {
        throw ConfigError("field document has no valid version");
    }
    if (out.major != kFieldFormatMajor) {
        throw ConfigError("unsupported field format major version " + std::to_string(out.major));
    }
    const json& faces = j.at("faces");
    if (!faces.is_array()) throw ConfigError("field document: 'faces' must be an array");
    out.frames.resize(9 * faces.size());
    out.raw.resize(9 * faces.size());
    for (std::size_t t = 0; t < faces.size(); ++t) {
        const std::string where = "face " + std::to_string(t);
        out.frames.segment<9>(9 * t) = vector_from<9>(faces[t].at("frame"), where + " frame");
        out.raw.segment<9>(9 * t) = vector_from<9>(faces[t].at("raw"), where + " raw");
    }
    return out;
}

json singularities_to_json(std::span<const SingularityRecord> records, int euler_characteristic)
{
    json list = json::array();
    int unknown = 0;
    for (const SingularityRecord& r : records) {
        if (r.unknown) {
            ++unknown;
            list.push_back({{"vertex", r.vertex}, {"unknown", true}});
        } else {
            list.push_back({{"vertex", r.vertex}, {"index", r.index()}, {"quarters", r.quarters}});
        }
    }
    const int total = total_quarters(records);
    return {{"singularities", std::move(list)},
            {"index_sum", total / 4.0},
            {"index_sum_quarters", total},
            {"unknown_vertices", unknown},
            {"euler_characteristic", euler_characteristic}};
}

json crease_alignment_to_json(const CreaseAlignment& a)
{
    constexpr double deg = 180.0 / std::numbers::pi;
    json edges = json::array();
    for (const CreaseEdgeScore& e : a.edges) {
        edges.push_back({{"edge", e.edge},
                         {"vertices", {e.v0, e.v1}},
                         {"dihedral_deviation_deg", e.dihedral * deg},
                         {"misalignment_deg", e.angle * deg}});
    }
    return {{"crease_edges", a.edges.size()},
            {"skipped_degenerate", a.skipped},
            {"max_misalignment_deg", a.max_angle * deg},
            {"mean_misalignment_deg", a.mean_angle * deg},
            {"edges", std::move(edges)}};
}

json deviation_to_json(std::span<const DeviationPoint> curve)
{
    json list = json::array();
    for (const DeviationPoint& p : curve) {
        list.push_back({{"epsilon", p.epsilon}, {"max_deviation_deg", p.max_degrees}, {"sample_max_deg", p.sample_max_degrees}});
    }
    return list;
}

std::string format_crosses_ply(const SurfaceMesh& mesh, std::span<const FaceCross> crosses)
{
    std::vector<Vec3> points;
    for (int t = 0; t < mesh.num_faces(); ++t) {
        const FaceCross& c = crosses[t];
        if (c.degenerate) continue;
        const Vec3 center = mesh.barycenter(t);
        const double half = 0.5 * 0.4 * mesh.mean_edge_length(t) * c.cross.scale;
        for (const Vec3& d : c.cross.dirs) {
            points.push_back(center - half * d);
            points.push_back(center + half * d);
        }
    }
    std::ostringstream out;
    out << "ply\nformat ascii 1.0\n";
    out << "element vertex " << points.size() << "\nproperty double x\nproperty double y\nproperty double z\n";
    out << "element edge " << points.size() / 2 << "\nproperty int vertex1\nproperty int vertex2\nend_header\n";
    for (const Vec3& p : points) {
        out << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.z()) << '\n';
    }
    for (std::size_t i = 0; i < points.size(); i += 2) out << i << ' ' << i + 1 << '\n';
    return out.str();
}

std::string format_trace_csv(std::span<const TraceRow> trace)
{
    std::string out = "iteration,primal,dual,objective\n";
    for (const TraceRow& r : trace) {
        out += std::to_string(r.iteration) + "," + format_double(r.primal) + "," + format_double(r.dual) + "," +
               format_double(r.objective) + "\n";
    }
    return out;
}

std::vector<Prescription> parse_constraints(const json& j, const SurfaceMesh& mesh)
{
    if (!j.is_array()) throw ConfigError("constraint file must hold a JSON array");
    std::vector<Prescription> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const json& item = j[i];
        const std::string where = "constraint " + std::to_string(i);
        if (!item.is_object() || !item.contains("face") || !item.at("face").is_number_integer()) {
            throw ConfigError(where + ": needs an integer 'face'");
        }
        const int face = item.at("face").get<int>();
        if (face < 0 || face >= mesh.num_faces()) throw ConfigError(where + ": face " + std::to_string(face) + " out of range");
        const bool has_frame = item.contains("frame");
        const bool has_dir = item.contains("direction");
        if (has_frame == has_dir) throw ConfigError(where + ": give exactly one of 'frame' or 'direction'");
        if (has_frame) {
            out.push_back({face, vector_from<9>(item.at("frame"), where + " frame")});
            continue;
        }
        const Vec3 n = mesh.face_normals()[face];
        Vec3 d = vector_from<3>(item.at("direction"), where + " direction");
        d -= d.dot(n) * n;
        if (d.norm() < 1e-12) throw ConfigError(where + ": direction is parallel to the face normal");
        const Vec3 local = rotation_matrix(align_axis_angle(n)).transpose() * d;
        out.push_back({face, aligned_frame(n, std::atan2(local.y(), local.x()))});
    }
    return out;
}

json read_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void write_json_file(const std::filesystem::path& path, const json& j, int indent)
{
    write_text_file(path, j.dump(indent) + "\n");
}

} // namespace octaframe
