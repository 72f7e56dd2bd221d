#pragma once

#include <octaframe/config.hpp>
#include <octaframe/energy.hpp>
#include <octaframe/field_analysis.hpp>
#include <octaframe/solver.hpp>

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace octaframe {

/// field.json schema version. Loaders accept any minor revision of this major.
inline constexpr int kFieldFormatMajor = 1;
inline constexpr int kFieldFormatMinor = 0;

nlohmann::json config_to_json(const SolveConfig& config);
/// Missing keys keep their defaults; throws ConfigError on wrong types.
SolveConfig config_from_json(const nlohmann::json& j);

nlohmann::json problem_to_json(const Problem& problem);
nlohmann::json report_to_json(const SolveReport& report);

nlohmann::json field_to_json(const SolveResult& result, std::span<const FaceCross> crosses);

struct LoadedField
{
    int major = 0;
    int minor = 0;
    FieldVector frames;  ///< projected frames
    FieldVector raw;
};

/// Throws ConfigError on an unknown major version or a malformed document.
LoadedField field_from_json(const nlohmann::json& j);

nlohmann::json singularities_to_json(std::span<const SingularityRecord> records, int euler_characteristic);
nlohmann::json crease_alignment_to_json(const CreaseAlignment& alignment);
nlohmann::json deviation_to_json(std::span<const DeviationPoint> curve);

/// Two segments per face through the barycenter along the cross directions, each of
/// length 0.4 * mean edge length * s. Degenerate faces get no segments.
std::string format_crosses_ply(const SurfaceMesh& mesh, std::span<const FaceCross> crosses);

/// iteration,primal,dual,objective
std::string format_trace_csv(std::span<const TraceRow> trace);

/// JSON array of {"face": i, "frame": [9]} or {"face": i, "direction": [3]}.
std::vector<Prescription> parse_constraints(const nlohmann::json& j, const SurfaceMesh& mesh);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
/// indent < 0 writes compact JSON.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j, int indent = 2);

/// %.17g
std::string format_double(double value);

} // namespace octaframe
