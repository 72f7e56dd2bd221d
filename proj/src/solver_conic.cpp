#include <octaframe/error.hpp>
#include <octaframe/lp_prox.hpp>
#include <octaframe/solver.hpp>

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <chrono>
#include <cmath>

namespace octaframe {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

constexpr double kOverRelaxation = 1.6;
constexpr int kRhoUpdateInterval = 25;
constexpr double kRhoMin = 1e-4;
constexpr double kRhoMax = 1e4;

// Rows s_e (x_t0 - x_t1), repeated for each of the nine channels.
SpMat difference_operator(const Problem& problem)
{
    std::vector<Eigen::Triplet<double>> entries;
    const auto& edges = problem.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const double s = problem.folded_weight(edges[i]);
        for (int k = 0; k < 9; ++k) {
            entries.emplace_back(9 * static_cast<int>(i) + k, 9 * edges[i].face0 + k, s);
            entries.emplace_back(9 * static_cast<int>(i) + k, 9 * edges[i].face1 + k, -s);
        }
    }
    SpMat d(9 * static_cast<int>(edges.size()), problem.num_variables());
    d.setFromTriplets(entries.begin(), entries.end());
    return d;
}

// Constrained coordinates: the seven aligned components W_t f_t of a free face, all
// nine of a fixed one. The remaining two twist components are never copied.
struct ConstraintCopy
{
    SpMat p;
    std::vector<int> offset;
};

ConstraintCopy constraint_operator(const Problem& problem)
{
    ConstraintCopy out;
    std::vector<Eigen::Triplet<double>> entries;
    int row = 0;
    for (int t = 0; t < problem.num_faces(); ++t) {
        out.offset.push_back(row);
        if (problem.fixed(t)) {
            for (int k = 0; k < 9; ++k) entries.emplace_back(row + k, 9 * t + k, 1.0);
            row += 9;
            continue;
        }
        const Mat79& w = problem.alignment(t).W;
        for (int r = 0; r < 7; ++r) {
            for (int c = 0; c < 9; ++c) {
                if (w(r, c) != 0.0) entries.emplace_back(row + r, 9 * t + c, w(r, c));
            }
        }
        row += 7;
    }
    out.offset.push_back(row);
    out.p.resize(row, problem.num_variables());
    out.p.setFromTriplets(entries.begin(), entries.end());
    return out;
}

void project_copies(const Problem& problem, const ConstraintCopy& copy, Eigen::VectorXd& y)
{
    const double eps = problem.epsilon();
    for (int t = 0; t < problem.num_faces(); ++t) {
        const int o = copy.offset[t];
        if (const auto& fixed = problem.fixed(t)) {
            y.segment<9>(o) = *fixed;
            continue;
        }
        const Vec7& u0 = problem.alignment(t).u0;
        Vec7 d = y.segment<7>(o) - u0;
        const double n = d.norm();
        if (n > eps) d *= eps / n;
        y.segment<7>(o) = u0 + d;
    }
}

// Feasible point nearest to x in the constrained components.
FieldVector feasible_frames(const Problem& problem, const FieldVector& x)
{
    FieldVector f = x;
    const double eps = problem.epsilon();
    for (int t = 0; t < problem.num_faces(); ++t) {
        if (const auto& fixed = problem.fixed(t)) {
            f.segment<9>(9 * t) = *fixed;
            continue;
        }
        const AlignmentOperator& a = problem.alignment(t);
        Vec9 local = a.to_local * x.segment<9>(9 * t);
        Vec7 d = local.segment<7>(1) - a.u0;
        const double n = d.norm();
        if (n > eps) d *= eps / n;
        local.segment<7>(1) = a.u0 + d;
        f.segment<9>(9 * t) = a.to_world * local;
    }
    return f;
}

void prox_edge_norms(Eigen::VectorXd& z, double p, double sigma)
{
    Eigen::Map<Eigen::Matrix<double, 9, Eigen::Dynamic>> blocks(z.data(), 9, z.size() / 9);
    const Eigen::VectorXd norms = blocks.colwise().norm().transpose();
    const Eigen::VectorXd shrunk = prox_lp_norm(norms, p, sigma);
    for (Eigen::Index e = 0; e < blocks.cols(); ++e) {
        if (norms[e] > 0) blocks.col(e) *= shrunk[e] / norms[e];
    }
}

double inf_norm(const Eigen::VectorXd& v)
{
    return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

} // namespace

RawSolution solve_conic(const Problem& problem, const SolveConfig& config)
{
    validate(config);
    const auto start = std::chrono::steady_clock::now();
    const int nf = problem.num_faces();
    if (nf == 0) throw SolverError("cannot solve on a mesh with no faces");

    const SpMat d = difference_operator(problem);
    const SpMat dt = d.transpose();
    const ConstraintCopy copy = constraint_operator(problem);
    const SpMat pt = copy.p.transpose();
    SpMat k = dt * d + pt * copy.p;
    // A small proximal term keeps the system definite where the twist is undetermined.
    const double delta = 1e-8 * std::max(1.0, k.diagonal().maxCoeff());
    {
        SpMat id(k.rows(), k.cols());
        id.setIdentity();
        k += delta * id;
    }
    Eigen::SimplicialLLT<SpMat> llt(k);
    if (llt.info() != Eigen::Success) throw SolverError("factorization of the splitting system failed");

    FieldVector x(problem.num_variables());
    const ShFrame f0 = canonical_frame();
    for (int t = 0; t < nf; ++t) x.segment<9>(9 * t) = problem.alignment(t).to_world * f0;
    x = feasible_frames(problem, x);
    Eigen::VectorXd z = d * x;
    Eigen::VectorXd y = copy.p * x;
    Eigen::VectorXd uz = Eigen::VectorXd::Zero(z.size());
    Eigen::VectorXd uy = Eigen::VectorXd::Zero(y.size());

    RawSolution out;
    SolveReport& rep = out.report;
    rep.backend = "conic";
    double rho = 1.0;
    const double p = problem.p();

    for (int iter = 1; iter <= config.max_iter; ++iter) {
        x = llt.solve(dt * (z - uz) + pt * (y - uy) + delta * x);
        const Eigen::VectorXd dx = d * x;
        const Eigen::VectorXd px = copy.p * x;

        const Eigen::VectorXd z_hat = kOverRelaxation * dx + (1.0 - kOverRelaxation) * z;
        const Eigen::VectorXd y_hat = kOverRelaxation * px + (1.0 - kOverRelaxation) * y;
        const Eigen::VectorXd z_old = z;
        const Eigen::VectorXd y_old = y;

        z = z_hat + uz;
        prox_edge_norms(z, p, 1.0 / rho);
        y = y_hat + uy;
        project_copies(problem, copy, y);

        uz += z_hat - z;
        uy += y_hat - y;

        const double r_primal = std::max(inf_norm(dx - z), inf_norm(px - y));
        const double r_dual = rho * inf_norm(dt * (z - z_old) + pt * (y - y_old));
        const double scale_primal = std::max({inf_norm(dx), inf_norm(px), inf_norm(z), inf_norm(y)});
        // The two dual blocks cancel at the optimum, so their sum is no scale.
        const double scale_dual = rho * std::max(inf_norm(dt * uz), inf_norm(pt * uy));
        const bool done = r_primal <= config.tol_primal * (1.0 + scale_primal) &&
                          r_dual <= config.tol_dual * (1.0 + scale_dual);

        rep.iterations = iter;
        rep.primal_residual = r_primal;
        rep.dual_residual = r_dual;
        if (config.record_trace && (iter % config.trace_stride == 0 || iter == 1 || done)) {
            rep.trace.push_back({iter, r_primal, r_dual, evaluate_energy(problem, feasible_frames(problem, x))});
        }
        if (done) {
            rep.converged = true;
            break;
        }

        if (iter % kRhoUpdateInterval == 0) {
            const double num = r_primal / std::max(scale_primal, 1e-30);
            const double den = r_dual / std::max(scale_dual, 1e-30);
            if (num > 0 && den > 0) {
                const double ratio = std::clamp(std::sqrt(num / den), kRhoMin / rho, kRhoMax / rho);
                if (ratio > 5.0 || ratio < 0.2) {
                    rho *= ratio;
                    uz /= ratio;
                    uy /= ratio;
                }
            }
        }
    }

    out.f = feasible_frames(problem, x);
    rep.rho = rho;
    rep.objective = evaluate_energy(problem, out.f);
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

RawSolution solve_relaxed(const Problem& problem, const SolveConfig& config)
{
    if (problem.p() == 2.0 && problem.epsilon() == 0.0) return solve_direct_p2(problem, config);
    return solve_conic(problem, config);
}

} // namespace octaframe
