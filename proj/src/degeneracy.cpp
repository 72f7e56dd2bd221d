#include <octaframe/octa_variety.hpp>
#include <octaframe/solver.hpp>

#include <chrono>

namespace octaframe {

namespace {

struct Projected
{
    FieldVector frames;
    std::vector<double> distance;
};

// Prescribed faces keep their frames bit-for-bit.
Projected project_all(const Problem& problem, const FieldVector& raw, std::uint64_t seed)
{
    ProjectionOptions options;
    options.seed = seed;
    const int nf = problem.num_faces();
    Projected out{FieldVector(raw.size()), std::vector<double>(nf)};
    for (int t = 0; t < nf; ++t) {
        const ShFrame q = frame_of(raw, t);
        if (const auto& fixed = problem.fixed(t); fixed && problem.is_user_prescribed(t)) {
            out.frames.segment<9>(9 * t) = *fixed;
            out.distance[t] = (*fixed - q).norm();
            continue;
        }
        const Projection pr = project_to_variety(q, options);
        out.frames.segment<9>(9 * t) = pr.frame;
        out.distance[t] = pr.distance;
    }
    return out;
}

} // namespace

SolveResult solve(const Problem& problem, const SolveConfig& config)
{
    validate(config);
    const auto start = std::chrono::steady_clock::now();
    const int nf = problem.num_faces();
    const std::uint64_t seed = config.seed ^ 0x5eedULL;

    RawSolution first = solve_relaxed(problem, config);
    SolveResult result{first.f, {}, first.report};
    Projected proj = project_all(problem, result.raw, seed);

    for (int round = 0; round < config.resolve_rounds; ++round) {
        std::vector<Prescription> pins;
        int free_faces = 0;
        for (int t = 0; t < nf; ++t) {
            if (problem.fixed(t)) continue;
            if (proj.distance[t] > config.degeneracy_threshold) {
                ++free_faces;
            } else {
                pins.push_back({t, frame_of(proj.frames, t)});
            }
        }
        if (free_faces == 0) break;

        const Problem pinned = problem.with_pinned(pins);
        RawSolution again = solve_relaxed(pinned, config);
        SolveReport merged = again.report;
        merged.iterations += result.report.iterations;
        merged.converged = merged.converged && result.report.converged;
        merged.trace.insert(merged.trace.begin(), result.report.trace.begin(), result.report.trace.end());
        merged.resolve_rounds_run = round + 1;
        merged.resolved_faces = free_faces;
        result.raw = std::move(again.f);
        result.report = std::move(merged);
        proj = project_all(problem, result.raw, seed);
    }

    SolveReport& rep = result.report;
    result.projected = std::move(proj.frames);
    rep.degeneracy = std::move(proj.distance);
    rep.degenerate_faces.clear();
    for (int t = 0; t < nf; ++t) {
        if (rep.degeneracy[t] > config.degeneracy_threshold) rep.degenerate_faces.push_back(t);
    }
    rep.non_degenerate_fraction =
        nf == 0 ? 1.0 : 1.0 - static_cast<double>(rep.degenerate_faces.size()) / static_cast<double>(nf);
    // The raw objective is that of the original problem, also after pinning.
    rep.objective = evaluate_energy(problem, result.raw);
    rep.projected_objective = evaluate_energy(problem, result.projected);
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

} // namespace octaframe
