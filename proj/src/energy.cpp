#include <octaframe/energy.hpp>
#include <octaframe/error.hpp>
#include <octaframe/octa_variety.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace octaframe {

int Problem::num_fixed() const
{
    return static_cast<int>(std::count_if(fixed_.begin(), fixed_.end(), [](const auto& f) { return f.has_value(); }));
}

int Problem::equality_row_count() const
{
    return (epsilon_ == 0.0 ? 7 * num_faces() : 0) + 9 * num_fixed();
}

double Problem::folded_weight(const EdgeTerm& e) const
{
    if (std::isinf(p_)) return 1.0;
    if (p_ == 1.0) return e.weight;
    if (p_ == 2.0) return std::sqrt(e.weight);
    return std::pow(e.weight, 1.0 / p_);
}

Problem Problem::with_pinned(std::span<const Prescription> pins) const
{
    Problem out = *this;
    for (const Prescription& pin : pins) {
        if (pin.face < 0 || pin.face >= num_faces()) throw ConfigError("pinned face out of range");
        out.fixed_[pin.face] = pin.frame;
    }
    return out;
}

Eigen::SparseMatrix<double> Problem::alignment_matrix() const
{
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(63 * num_faces());
    for (int t = 0; t < num_faces(); ++t) {
        const Mat79& w = alignment_[t].W;
        for (int r = 0; r < 7; ++r) {
            for (int c = 0; c < 9; ++c) {
                if (w(r, c) != 0.0) entries.emplace_back(7 * t + r, 9 * t + c, w(r, c));
            }
        }
    }
    Eigen::SparseMatrix<double> m(7 * num_faces(), 9 * num_faces());
    m.setFromTriplets(entries.begin(), entries.end());
    return m;
}

Eigen::VectorXd Problem::alignment_rhs() const
{
    Eigen::VectorXd u(7 * num_faces());
    for (int t = 0; t < num_faces(); ++t) u.segment<7>(7 * t) = alignment_[t].u0;
    return u;
}

Problem assemble(const SurfaceMesh& mesh, const SolveConfig& config, std::span<const Prescription> prescribed)
{
    SolveConfig checked = config;
    validate(checked);

    Problem problem;
    problem.p_ = config.p;
    problem.epsilon_ = config.epsilon;
    const int nf = mesh.num_faces();
    problem.alignment_.reserve(nf);
    for (int t = 0; t < nf; ++t) problem.alignment_.push_back(alignment_operator(mesh.face_normals()[t]));
    for (const InteriorEdge& e : mesh.interior_edges()) problem.edges_.push_back({e.face0, e.face1, e.weight});
    problem.fixed_.assign(nf, std::nullopt);
    problem.user_prescribed_.assign(nf, false);

    for (const Prescription& pr : prescribed) {
        const std::string where = "prescribed face " + std::to_string(pr.face);
        if (pr.face < 0 || pr.face >= nf) throw ConfigError(where + " is out of range");
        if (!pr.frame.allFinite()) throw ConfigError(where + " has a non-finite frame");
        const double off = degeneracy_distance(pr.frame);
        if (off > 1e-6) throw ConfigError(where + " is not an octahedral frame (distance " + std::to_string(off) + ")");
        const AlignmentOperator& a = problem.alignment_[pr.face];
        const double misalignment = (a.W * pr.frame - a.u0).norm();
        if (misalignment > config.epsilon + 1e-8) {
            throw ConfigError(where + " is not aligned to its face normal (residual " + std::to_string(misalignment) +
                              ")");
        }
        auto& slot = problem.fixed_[pr.face];
        if (slot && (*slot - pr.frame).norm() > 1e-12) throw ConfigError(where + " is prescribed twice with different frames");
        slot = pr.frame;
        problem.user_prescribed_[pr.face] = true;
    }
    return problem;
}

double aggregate_lp(std::span<const double> values, double p)
{
    if (values.empty()) return 0.0;
    const double top = *std::max_element(values.begin(), values.end());
    if (std::isinf(p) || top == 0.0) return top;
    // Scale by the largest entry so large p does not overflow.
    double sum = 0;
    for (double v : values) sum += std::pow(v / top, p);
    return top * std::pow(sum, 1.0 / p);
}

double evaluate_energy(const Problem& problem, const FieldVector& f)
{
    std::vector<double> folded;
    folded.reserve(problem.edges().size());
    for (const EdgeTerm& e : problem.edges()) {
        const double diff = (frame_of(f, e.face0) - frame_of(f, e.face1)).norm();
        folded.push_back(problem.folded_weight(e) * diff);
    }
    return aggregate_lp(folded, problem.p());
}

FieldVector energy_power_gradient(const Problem& problem, const FieldVector& f)
{
    const double p = problem.p();
    if (std::isinf(p)) throw ConfigError("energy_power_gradient needs a finite p");
    FieldVector g = FieldVector::Zero(f.size());
    for (const EdgeTerm& e : problem.edges()) {
        const Vec9 d = frame_of(f, e.face0) - frame_of(f, e.face1);
        const double n = d.norm();
        if (n == 0.0) continue;
        const Vec9 term = p * e.weight * std::pow(n, p - 2.0) * d;
        g.segment<9>(9 * e.face0) += term;
        g.segment<9>(9 * e.face1) -= term;
    }
    return g;
}

double max_alignment_violation(const Problem& problem, const FieldVector& f)
{
    double worst = 0;
    for (int t = 0; t < problem.num_faces(); ++t) {
        if (problem.fixed(t)) continue;
        const AlignmentOperator& a = problem.alignment(t);
        worst = std::max(worst, (a.W * frame_of(f, t) - a.u0).norm());
    }
    return worst;
}

} // namespace octaframe
