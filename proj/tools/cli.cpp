#include "cli.hpp"

#include <octaframe/error.hpp>
#include <octaframe/field_analysis.hpp>
#include <octaframe/identities.hpp>
#include <octaframe/serialization.hpp>
#include <octaframe/solver.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <ostream>

namespace octaframe::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kManifestVersion = 1;

struct SolveArgs
{
    std::string mesh;
    std::string canonical;
    std::string p = "2";
    std::string preset;
    double eps = 0.0;
    double tol = 1e-6;
    int max_iter = 20000;
    std::uint64_t seed = 0;
    std::string constraints;
    std::string out = "out";
    int resolve_rounds = 1;
    double degeneracy_threshold = kDegeneracyThreshold;
    double time_budget = 0;
    bool trace = false;
    std::string manifest;
};

struct VerifyArgs
{
    int grid = 50;
    int samples = 1000;
    double perturb_lz = 0;
};

struct BenchArgs
{
    std::vector<std::string> meshes;
    std::string p = "2";
    double eps = 0.0;
    std::string out;
};

struct DeviationArgs
{
    int samples = 10000;
    std::uint64_t seed = 1;
    std::vector<double> grid;
    std::string out;
};

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

SurfaceMesh load_input(const std::string& mesh, const std::string& canonical, std::vector<std::string>* warnings)
{
    if (!canonical.empty()) return make_canonical_mesh(canonical);
    return load_obj(mesh, warnings);
}

double preset_exponent(const std::string& preset)
{
    if (preset == "tv") return 1.0;
    if (preset == "dirichlet") return 2.0;
    if (preset == "max") return kInfinity;
    throw ConfigError("unknown preset '" + preset + "' (tv, dirichlet, max)");
}

// Flags given on the command line override the manifest file.
json build_manifest(const SolveArgs& a, const CLI::App& cmd)
{
    json m = json::object();
    if (!a.manifest.empty()) m = read_json_file(a.manifest);
    if (!m.is_object()) throw ConfigError("manifest must be a JSON object");
    json config = m.value("config", json::object());
    auto given = [&](const char* flag) { return cmd.count(flag) > 0; };

    if (given("--mesh")) {
        m["mesh"] = fs::absolute(a.mesh).string();
        m.erase("canonical");
    }
    if (given("--canonical")) {
        m["canonical"] = a.canonical;
        m.erase("mesh");
    }
    if (given("--preset")) config["p"] = format_exponent(preset_exponent(a.preset));
    if (given("--p")) config["p"] = format_exponent(parse_exponent(a.p));
    if (given("--eps")) config["epsilon"] = a.eps;
    if (given("--tol")) {
        config["tol_primal"] = a.tol;
        config["tol_dual"] = a.tol;
    }
    if (given("--max-iter")) config["max_iter"] = a.max_iter;
    if (given("--seed")) config["seed"] = a.seed;
    if (given("--resolve-rounds")) config["resolve_rounds"] = a.resolve_rounds;
    if (given("--degeneracy-threshold")) config["degeneracy_threshold"] = a.degeneracy_threshold;
    if (given("--trace")) config["record_trace"] = a.trace;
    if (given("--constraints")) m["constraints"] = fs::absolute(a.constraints).string();
    if (given("--out") || !m.contains("out")) m["out"] = fs::absolute(a.out).string();
    if (given("--time-budget")) m["time_budget_s"] = a.time_budget;

    m["config"] = config_to_json(config_from_json(config));
    m["manifest_version"] = kManifestVersion;
    m["formats"] = {{"field", std::to_string(kFieldFormatMajor) + "." + std::to_string(kFieldFormatMinor)},
                    {"report", "1.0"},
                    {"singularities", "1.0"}};
    if (m.contains("mesh") == m.contains("canonical")) throw ConfigError("give exactly one of --mesh or --canonical");
    return m;
}

int cmd_solve(const SolveArgs& a, const CLI::App& cmd, std::ostream& out, std::ostream& err)
{
    const auto start = std::chrono::steady_clock::now();
    const json manifest = build_manifest(a, cmd);
    const SolveConfig config = config_from_json(manifest.at("config"));
    const fs::path out_dir = manifest.at("out").get<std::string>();

    std::vector<std::string> warnings;
    const SurfaceMesh mesh = load_input(manifest.value("mesh", ""), manifest.value("canonical", ""), &warnings);
    for (const std::string& w : warnings) err << "warning: " << w << "\n";

    std::vector<Prescription> prescribed;
    if (manifest.contains("constraints")) {
        prescribed = parse_constraints(read_json_file(manifest.at("constraints").get<std::string>()), mesh);
    }

    const auto t_assemble = std::chrono::steady_clock::now();
    const Problem problem = assemble(mesh, config, prescribed);
    const double assemble_s = seconds_since(t_assemble);
    const SolveResult result = solve(problem, config);
    const std::vector<FaceCross> crosses = extract_field(mesh, result.projected, result.report.degenerate_faces);
    const std::vector<SingularityRecord> singular = singularity_indices(mesh, crosses);
    const CreaseAlignment creases = crease_alignment_score(mesh, crosses);

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir.string() + "': " + ec.message());

    json report = report_to_json(result.report);
    report["config"] = config_to_json(config);
    report["assemble_seconds"] = assemble_s;
    report["mesh"] = {{"vertices", mesh.num_vertices()},
                      {"faces", mesh.num_faces()},
                      {"interior_edges", mesh.interior_edges().size()},
                      {"boundary_edges", mesh.boundary_edges().size()},
                      {"euler_characteristic", mesh.euler_characteristic()}};
    report["energy"] = result.report.objective;
    report["max_alignment_violation"] = max_alignment_violation(problem, result.raw);
    report["warnings"] = warnings;

    json analysis = {{"crease_alignment", crease_alignment_to_json(creases)}};

    write_json_file(out_dir / "manifest.json", manifest);
    write_json_file(out_dir / "field.json", field_to_json(result, crosses), -1);
    write_json_file(out_dir / "report.json", report);
    write_json_file(out_dir / "singularities.json", singularities_to_json(singular, mesh.euler_characteristic()));
    write_json_file(out_dir / "analysis.json", analysis);
    write_text_file(out_dir / "crosses.ply", format_crosses_ply(mesh, crosses));
    if (config.record_trace) write_text_file(out_dir / "trace.csv", format_trace_csv(result.report.trace));

    const double total = seconds_since(start);
    out << "faces " << mesh.num_faces() << "  backend " << result.report.backend << "  iterations "
        << result.report.iterations << "  energy " << format_double(result.report.objective) << "\n";
    out << "non-degenerate " << format_double(result.report.non_degenerate_fraction) << "  singularity sum "
        << total_quarters(singular) / 4.0 << "  crease max " << format_double(creases.max_angle * 180 / std::numbers::pi)
        << " deg\n";
    out << "wrote " << out_dir.string() << "\n";
    if (const double budget = manifest.value("time_budget_s", 0.0); budget > 0 && total > budget) {
        err << "warning: run took " << total << " s, over the " << budget << " s budget\n";
    }
    if (!result.report.converged) {
        err << "solver did not converge (primal " << result.report.primal_residual << ", dual "
            << result.report.dual_residual << "); best iterate written\n";
        return kNotConverged;
    }
    return kOk;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out)
{
    AngularMomentum l = angular_momentum();
    if (a.perturb_lz != 0) {
        l.z(0, 8) += a.perturb_lz;
        l.z(8, 0) -= a.perturb_lz;
    }
    IdentityOptions options;
    options.grid = a.grid;
    options.rotations = a.samples;
    const auto checks = run_identity_suite(l, options);
    bool all = true;
    for (const IdentityCheck& c : checks) {
        char line[160];
        std::snprintf(line, sizeof line, "%s %-24s residual %.3e  tol %.0e\n", c.passed ? "PASS" : "FAIL",
                      c.name.c_str(), c.residual, c.tolerance);
        out << line;
        all = all && c.passed;
    }
    out << (all ? "all identities pass\n" : "identity suite FAILED\n");
    return all ? kOk : kNotConverged;
}

int cmd_bench(const BenchArgs& a, std::ostream& out)
{
    SolveConfig config;
    config.p = parse_exponent(a.p);
    config.epsilon = a.eps;
    validate(config);
    std::string csv = "mesh,n_faces,assemble_s,solve_s,p,eps,iterations\n";
    for (const std::string& spec : a.meshes) {
        const bool is_file = spec.size() > 4 && spec.substr(spec.size() - 4) == ".obj";
        const SurfaceMesh mesh = is_file ? load_obj(spec) : make_canonical_mesh(spec);
        const auto t0 = std::chrono::steady_clock::now();
        const Problem problem = assemble(mesh, config);
        const double assemble_s = seconds_since(t0);
        const auto t1 = std::chrono::steady_clock::now();
        const RawSolution sol = solve_relaxed(problem, config);
        const double solve_s = seconds_since(t1);
        csv += spec + "," + std::to_string(mesh.num_faces()) + "," + format_double(assemble_s) + "," +
               format_double(solve_s) + "," + format_exponent(config.p) + "," + format_double(config.epsilon) + "," +
               std::to_string(sol.report.iterations) + "\n";
    }
    if (a.out.empty()) {
        out << csv;
    } else {
        write_text_file(a.out, csv);
    }
    return kOk;
}

int cmd_deviation(const DeviationArgs& a, std::ostream& out)
{
    std::vector<double> grid = a.grid;
    if (grid.empty()) {
        for (int i = 0; i <= 14; ++i) grid.push_back(i / 20.0);
    }
    const auto curve = normal_deviation_experiment(grid, a.samples, a.seed);
    const json j = {{"samples", a.samples}, {"seed", a.seed}, {"curve", deviation_to_json(curve)}};
    if (a.out.empty()) {
        out << j.dump(2) << "\n";
    } else {
        write_json_file(a.out, j);
    }
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Feature-aligned cross fields from normal-aligned octahedral frames"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    CLI::App* solve_cmd = app.add_subcommand("solve", "solve for a cross field and write the artifacts");
    auto* mesh_opt = solve_cmd->add_option("--mesh", solve_args.mesh, "input OBJ file");
    auto* canon_opt = solve_cmd->add_option("--canonical", solve_args.canonical,
                                            "procedural mesh NAME[:params] (cube, wedge, noisy_cube, flat_grid, cylinder3, icosphere)");
    mesh_opt->excludes(canon_opt);
    auto* p_opt = solve_cmd->add_option("--p", solve_args.p, "energy exponent, >= 1 or inf");
    solve_cmd->add_option("--preset", solve_args.preset, "tv (p=1), dirichlet (p=2) or max (p=inf)")->excludes(p_opt);
    solve_cmd->add_option("--eps", solve_args.eps, "soft alignment radius in [0, sqrt(7/12))");
    solve_cmd->add_option("--tol", solve_args.tol, "primal and dual tolerance of the conic solver");
    solve_cmd->add_option("--max-iter", solve_args.max_iter, "iteration cap of the conic solver");
    solve_cmd->add_option("--seed", solve_args.seed, "seed for randomized projection starts");
    solve_cmd->add_option("--constraints", solve_args.constraints, "JSON file of prescribed frames or directions");
    solve_cmd->add_option("--out", solve_args.out, "output directory");
    solve_cmd->add_option("--resolve-rounds", solve_args.resolve_rounds, "degeneracy re-solve rounds");
    solve_cmd->add_option("--degeneracy-threshold", solve_args.degeneracy_threshold, "distance to the variety marking a degenerate frame");
    solve_cmd->add_option("--time-budget", solve_args.time_budget, "warn when the run takes longer (seconds)");
    solve_cmd->add_flag("--trace", solve_args.trace, "write trace.csv of the conic iterations");
    solve_cmd->add_option("--manifest", solve_args.manifest, "run manifest JSON; flags override its entries");

    VerifyArgs verify_args;
    CLI::App* verify_cmd = app.add_subcommand("verify", "run the closed-form identity suite");
    verify_cmd->add_option("--grid", verify_args.grid, "crease grid resolution")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--samples", verify_args.samples, "random rotations for the Gram identity")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--perturb-lz", verify_args.perturb_lz, "add this to Lz(1,9) (fault injection)");

    BenchArgs bench_args;
    CLI::App* bench_cmd = app.add_subcommand("bench", "time assembly and the relaxed solve on a list of meshes");
    bench_cmd->add_option("meshes", bench_args.meshes, "OBJ files or canonical specs");
    bench_cmd->add_option("--p", bench_args.p, "energy exponent");
    bench_cmd->add_option("--eps", bench_args.eps, "soft alignment radius");
    bench_cmd->add_option("--out", bench_args.out, "CSV output file (default stdout)");

    DeviationArgs dev_args;
    CLI::App* dev_cmd = app.add_subcommand("deviation", "normal deviation of projected epsilon-perturbed frames");
    dev_cmd->add_option("--samples", dev_args.samples, "samples per epsilon")->check(CLI::NonNegativeNumber);
    dev_cmd->add_option("--seed", dev_args.seed, "sampling seed");
    dev_cmd->add_option("--eps", dev_args.grid, "epsilon values (default 0, 0.05, ..., 0.7)");
    dev_cmd->add_option("--out", dev_args.out, "JSON output file (default stdout)");

    std::vector<const char*> argv;
    for (const std::string& s : args) argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*solve_cmd) return cmd_solve(solve_args, *solve_cmd, out, err);
        if (*verify_cmd) return cmd_verify(verify_args, out);
        if (*bench_cmd) return cmd_bench(bench_args, out);
        if (*dev_cmd) return cmd_deviation(dev_args, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
        return kIo;
    } catch (const MeshError& e) {
        err << "mesh error: " << e.what() << "\n";
        return kMesh;
    } catch (const DegenerateFrameError& e) {
        err << "solver error: " << e.what() << "\n";
        return kSolver;
    } catch (const SolverError& e) {
        err << "solver error: " << e.what() << "\n";
        return kSolver;
    }
    return kUsage;
}

} // namespace octaframe::cli
