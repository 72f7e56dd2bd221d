#include "cli.hpp"

#include <octaframe/error.hpp>
#include <octaframe/serialization.hpp>

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace octaframe;

namespace {

struct Run
{
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "octaframe");
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name)
{
    fs::path dir = fs::path(OCTAFRAME_TEST_TMP) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

json load(const fs::path& p)
{
    return json::parse(slurp(p));
}

} // namespace

TEST_CASE("solve writes the artifacts")
{
    fs::path dir = scratch("cube");
    save_obj(make_cube(2), dir / "cube.obj");
    Run r = run({"solve", "--mesh", (dir / "cube.obj").string(), "--p", "2", "--eps", "0", "--out", (dir / "out").string()});
    INFO(r.err);
    REQUIRE(r.code == 0);
    for (const char* name : {"manifest.json", "field.json", "report.json", "singularities.json", "analysis.json", "crosses.ply"})
        CHECK(fs::exists(dir / "out" / name));
    CHECK_FALSE(fs::exists(dir / "out" / "trace.csv"));

    json report = load(dir / "out" / "report.json");
    CHECK(report["objective"].get<double>() <= 1e-8);
    CHECK(report["backend"] == "direct");

    json sing = load(dir / "out" / "singularities.json");
    CHECK(sing["index_sum"].get<double>() == 2.0);
    CHECK(sing["singularities"].size() == 8);

    json field = load(dir / "out" / "field.json");
    CHECK(field["format"] == "octaframe-field");
    CHECK(field["faces"].size() == 48);
    LoadedField loaded = field_from_json(field);
    CHECK(loaded.major == kFieldFormatMajor);
    CHECK(loaded.frames.size() == 9 * 48);

    std::string ply = slurp(dir / "out" / "crosses.ply");
    CHECK(ply.rfind("ply\n", 0) == 0);
    CHECK(ply.find("element edge 96") != std::string::npos);

    json manifest = load(dir / "out" / "manifest.json");
    CHECK(manifest["config"]["p"] == 2.0);
}

TEST_CASE("wedge at p = inf is crease aligned")
{
    fs::path dir = scratch("wedge");
    Run r = run({"solve", "--canonical", "wedge:2.356", "--p", "inf", "--out", dir.string(), "--trace"});
    INFO(r.err);
    REQUIRE(r.code == 0);
    json analysis = load(dir / "analysis.json");
    CHECK(analysis["crease_alignment"]["crease_edges"] == 10);
    CHECK(analysis["crease_alignment"]["max_misalignment_deg"].get<double>() <= 2.0);
    CHECK(load(dir / "manifest.json")["config"]["p"] == "inf");
    std::string trace = slurp(dir / "trace.csv");
    CHECK(trace.rfind("iteration,primal,dual,objective\n", 0) == 0);
}

TEST_CASE("exit codes")
{
    fs::path dir = scratch("codes");
    CHECK(run({}).code == cli::kUsage);
    CHECK(run({"solve", "--canonical", "cube", "--eps", "0.9", "--out", dir.string()}).code == cli::kUsage);
    CHECK(run({"solve", "--canonical", "cube", "--p", "0.5", "--out", dir.string()}).code == cli::kUsage);
    CHECK(run({"solve", "--out", dir.string()}).code == cli::kUsage);
    CHECK(run({"solve", "--canonical", "klein", "--out", dir.string()}).code == cli::kUsage);
    CHECK(run({"solve", "--mesh", (dir / "missing.obj").string(), "--out", dir.string()}).code == cli::kIo);

    {
        std::ofstream bad(dir / "bad.obj");
        bad << "v 0 0 0\nv 1 0 0\nv 2 0 0\nf 1 2 3\n";
    }
    Run mesh = run({"solve", "--mesh", (dir / "bad.obj").string(), "--out", dir.string()});
    CHECK(mesh.code == cli::kMesh);
    CHECK(mesh.err.find("degenerate") != std::string::npos);

    Run capped = run({"solve", "--canonical", "noisy_cube:0.1:2:2", "--p", "1", "--max-iter", "2", "--out", (dir / "capped").string()});
    CHECK(capped.code == cli::kNotConverged);
    CHECK(fs::exists(dir / "capped" / "field.json"));

    Run singular = run({"solve", "--canonical", "flat_grid:3", "--out", (dir / "flat").string()});
    CHECK(singular.code == cli::kSolver);

    {
        std::ofstream c(dir / "broken.json");
        c << "[{\"face\": 0, ";
    }
    CHECK(run({"solve", "--canonical", "cube", "--constraints", (dir / "broken.json").string(), "--out", dir.string()}).code ==
          cli::kUsage);
}

TEST_CASE("constraints and manifests")
{
    fs::path dir = scratch("constraints");
    {
        std::ofstream c(dir / "c.json");
        c << R"([{"face": 4, "direction": [1, 1, 0]}])";
    }
    Run r = run({"solve", "--canonical", "flat_grid:4", "--constraints", (dir / "c.json").string(), "--out",
                 (dir / "out").string()});
    INFO(r.err);
    REQUIRE(r.code == 0);
    json field = load(dir / "out" / "field.json");
    for (const auto& face : field["faces"]) CHECK(face["theta"].get<double>() == doctest::Approx(std::numbers::pi / 4));

    // A manifest replays the run; flags still override it.
    Run replay = run({"solve", "--manifest", (dir / "out" / "manifest.json").string(), "--out", (dir / "again").string()});
    REQUIRE(replay.code == 0);
    CHECK(slurp(dir / "out" / "field.json") == slurp(dir / "again" / "field.json"));
}

TEST_CASE("runs are reproducible")
{
    fs::path dir = scratch("repro");
    for (const char* sub : {"a", "b"}) {
        REQUIRE(run({"solve", "--canonical", "noisy_cube:0.08:3:3", "--out", (dir / sub).string()}).code == 0);
        REQUIRE(run({"solve", "--canonical", "cube:2", "--preset", "tv", "--eps", "0.1", "--out",
                     (dir / (std::string(sub) + "_tv")).string()})
                    .code == 0);
    }
    CHECK(slurp(dir / "a" / "field.json") == slurp(dir / "b" / "field.json"));
    CHECK(slurp(dir / "a_tv" / "field.json") == slurp(dir / "b_tv" / "field.json"));
    CHECK(load(dir / "a_tv" / "report.json")["iterations"] == load(dir / "b_tv" / "report.json")["iterations"]);
}

TEST_CASE("field loader versions")
{
    json doc = {{"format", "octaframe-field"}, {"version", "1.3"}, {"num_faces", 1},
                {"faces", {{{"frame", std::vector<double>(9, 0.0)}, {"raw", std::vector<double>(9, 0.0)}}}}};
    CHECK(field_from_json(doc).minor == 3);
    doc["version"] = "2.0";
    CHECK_THROWS_AS(field_from_json(doc), ConfigError);
    doc["version"] = "1.0";
    doc["format"] = "something-else";
    CHECK_THROWS_AS(field_from_json(doc), ConfigError);
}

TEST_CASE("verify")
{
    Run ok = run({"verify", "--samples", "200", "--grid", "20"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("FAIL") == std::string::npos);
    CHECK(ok.out.find("PASS commutators") != std::string::npos);

    Run bad = run({"verify", "--samples", "200", "--grid", "20", "--perturb-lz", "1e-3"});
    CHECK(bad.code != 0);
    CHECK(bad.out.find("FAIL commutators") != std::string::npos);

    Run dense = run({"verify", "--grid", "100", "--samples", "100"});
    CHECK(dense.code == 0);
}

TEST_CASE("bench and deviation")
{
    Run empty = run({"bench"});
    CHECK(empty.code == 0);
    CHECK(empty.out == "mesh,n_faces,assemble_s,solve_s,p,eps,iterations\n");

    Run a = run({"bench", "cube:2", "--p", "1"});
    Run b = run({"bench", "cube:2", "--p", "1"});
    REQUIRE(a.code == 0);
    auto iterations = [](const std::string& csv) { return csv.substr(csv.rfind(',') + 1); };
    CHECK(iterations(a.out) == iterations(b.out));

    fs::path dir = scratch("deviation");
    Run d = run({"deviation", "--samples", "200", "--out", (dir / "dev.json").string()});
    REQUIRE(d.code == 0);
    json curve = load(dir / "dev.json")["curve"];
    CHECK(curve.size() == 15);
    for (std::size_t i = 1; i < curve.size(); ++i)
        CHECK(curve[i]["max_deviation_deg"].get<double>() >= curve[i - 1]["max_deviation_deg"].get<double>());
}
