#pragma once

#include <octaframe/config.hpp>
#include <octaframe/energy.hpp>

#include <string>
#include <vector>

namespace octaframe {

struct TraceRow
{
    int iteration;
    double primal;
    double dual;
    double objective;
};

struct SolveReport
{
    std::string backend;  ///< "direct" or "conic"
    bool converged = false;
    int iterations = 0;
    double primal_residual = 0;
    double dual_residual = 0;
    double objective = 0;  ///< E_p of the raw (relaxed) solution
    double rho = 0;        ///< final ADMM penalty; 0 for the direct path
    double wall_seconds = 0;

    // Filled by the degeneracy loop.
    std::vector<double> degeneracy;  ///< d(f_t) of the final raw solution, per face
    int resolve_rounds_run = 0;
    int resolved_faces = 0;          ///< faces left free in the last re-solve
    std::vector<int> degenerate_faces;
    double non_degenerate_fraction = 1.0;
    double projected_objective = 0;  ///< E_p after projecting every face onto the variety

    std::vector<TraceRow> trace;
};

struct RawSolution
{
    FieldVector f;
    SolveReport report;
};

/// p = 2, epsilon = 0: exact minimizer by eliminating the alignment and prescribed
/// equalities and factoring the reduced (SPD) system. Throws SolverError when the
/// reduced system is singular.
RawSolution solve_direct_p2(const Problem& problem, const SolveConfig& config);

/// Any p and epsilon: ADMM on the folded l_p edge norm with per-face alignment balls.
/// A non-converged solve still returns its last feasible iterate.
RawSolution solve_conic(const Problem& problem, const SolveConfig& config);

/// solve_direct_p2 when p = 2 and epsilon = 0, solve_conic otherwise.
RawSolution solve_relaxed(const Problem& problem, const SolveConfig& config);

struct SolveResult
{
    FieldVector raw;        ///< relaxed solution after the last re-solve
    FieldVector projected;  ///< per-face projection onto the variety
    SolveReport report;
};

/// Solve, project, pin non-degenerate faces and re-solve the rest.
SolveResult solve(const Problem& problem, const SolveConfig& config);

} // namespace octaframe
