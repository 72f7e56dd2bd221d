#include <octaframe/error.hpp>
#include <octaframe/solver.hpp>

#include <Eigen/SparseCholesky>

#include <chrono>
#include <cmath>

namespace octaframe {

namespace {

// Free face t is parameterized as f_t = c_t + B_t a_t with B_t the two twist columns
// of e^{v_n.L}; fixed faces have c_t = F_t and no unknowns.
struct Reduction
{
    std::vector<int> slot;  // -1 for fixed faces
    std::vector<Vec9> offset;
    std::vector<Eigen::Matrix<double, 9, 2>> basis;
    int unknowns = 0;
};

Reduction reduce(const Problem& problem)
{
    Reduction r;
    const int nf = problem.num_faces();
    r.slot.assign(nf, -1);
    r.offset.resize(nf);
    r.basis.resize(nf);
    const ShFrame lobe = reference_lobe();
    for (int t = 0; t < nf; ++t) {
        if (const auto& fixed = problem.fixed(t)) {
            r.offset[t] = *fixed;
            continue;
        }
        const Mat9& q = problem.alignment(t).to_world;
        r.offset[t] = q * lobe;
        r.basis[t].col(0) = q.col(0);
        r.basis[t].col(1) = q.col(8);
        r.slot[t] = r.unknowns;
        r.unknowns += 2;
    }
    return r;
}

} // namespace

RawSolution solve_direct_p2(const Problem& problem, const SolveConfig& config)
{
    if (problem.p() != 2.0 || problem.epsilon() != 0.0) {
        throw ConfigError("the direct path needs p = 2 and epsilon = 0");
    }
    const auto start = std::chrono::steady_clock::now();
    const int nf = problem.num_faces();
    if (nf == 0) throw SolverError("cannot solve on a mesh with no faces");

    const Reduction r = reduce(problem);
    FieldVector f(9 * nf);
    for (int t = 0; t < nf; ++t) f.segment<9>(9 * t) = r.offset[t];

    if (r.unknowns > 0) {
        std::vector<Eigen::Triplet<double>> entries;
        entries.reserve(12 * problem.edges().size());
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(r.unknowns);
        for (const EdgeTerm& e : problem.edges()) {
            const int s0 = r.slot[e.face0];
            const int s1 = r.slot[e.face1];
            const Vec9 d = r.offset[e.face0] - r.offset[e.face1];
            // Objective term w |d + B0 a0 - B1 a1|^2.
            if (s0 >= 0) {
                for (int k = 0; k < 2; ++k) entries.emplace_back(s0 + k, s0 + k, e.weight);
                rhs.segment<2>(s0) -= e.weight * r.basis[e.face0].transpose() * d;
            }
            if (s1 >= 0) {
                for (int k = 0; k < 2; ++k) entries.emplace_back(s1 + k, s1 + k, e.weight);
                rhs.segment<2>(s1) += e.weight * r.basis[e.face1].transpose() * d;
            }
            if (s0 >= 0 && s1 >= 0) {
                const Eigen::Matrix2d c = -e.weight * r.basis[e.face0].transpose() * r.basis[e.face1];
                for (int i = 0; i < 2; ++i) {
                    for (int j = 0; j < 2; ++j) {
                        entries.emplace_back(s0 + i, s1 + j, c(i, j));
                        entries.emplace_back(s1 + j, s0 + i, c(i, j));
                    }
                }
            }
        }
        Eigen::SparseMatrix<double> h(r.unknowns, r.unknowns);
        h.setFromTriplets(entries.begin(), entries.end());

        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(h);
        if (ldlt.info() != Eigen::Success) {
            throw SolverError("factorization of the reduced system failed; retry with epsilon > 0");
        }
        const Eigen::VectorXd pivots = ldlt.vectorD();
        const double top = pivots.cwiseAbs().maxCoeff();
        if (!(pivots.minCoeff() > 1e-12 * top)) {
            throw SolverError(
                "reduced system is singular: the twist is undetermined on some component (e.g. a flat or "
                "isolated region with no prescribed face); prescribe a frame or use epsilon > 0");
        }
        const Eigen::VectorXd a = ldlt.solve(rhs);
        for (int t = 0; t < nf; ++t) {
            if (r.slot[t] >= 0) f.segment<9>(9 * t) += r.basis[t] * a.segment<2>(r.slot[t]);
        }
    }

    RawSolution out;
    out.f = std::move(f);
    SolveReport& rep = out.report;
    rep.backend = "direct";
    rep.iterations = 1;
    rep.objective = evaluate_energy(problem, out.f);

    // Residual of the full system [2L W^T; W 0]: multipliers absorb the constrained
    // components, so stationarity reduces to the twist components of the gradient.
    const FieldVector g = energy_power_gradient(problem, out.f);
    double stationarity = 0;
    double primal = 0;
    double scale = 1.0;
    for (int t = 0; t < nf; ++t) {
        if (problem.fixed(t)) {
            primal = std::max(primal, (frame_of(out.f, t) - *problem.fixed(t)).cwiseAbs().maxCoeff());
            scale = std::max(scale, 1.0 + problem.fixed(t)->norm());
            continue;
        }
        if (r.slot[t] >= 0) {
            stationarity = std::max(stationarity, (r.basis[t].transpose() * g.segment<9>(9 * t)).cwiseAbs().maxCoeff());
        }
        const AlignmentOperator& al = problem.alignment(t);
        primal = std::max(primal, (al.W * frame_of(out.f, t) - al.u0).cwiseAbs().maxCoeff());
    }
    scale = std::max(scale, 1.0 + problem.alignment_rhs().norm());
    rep.primal_residual = primal;
    rep.dual_residual = stationarity;
    rep.converged = std::max(primal, stationarity) <= config.tol_direct * scale;
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

} // namespace octaframe
