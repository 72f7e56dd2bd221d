#pragma once

#include <octaframe/config.hpp>
#include <octaframe/mesh.hpp>
#include <octaframe/sh_algebra.hpp>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <optional>
#include <span>
#include <vector>

namespace octaframe {

/// Stacked per-face frames: rows 9t..9t+8 hold f_t.
using FieldVector = Eigen::VectorXd;

/// A face whose frame is fixed to `frame`.
struct Prescription
{
    int face = -1;
    ShFrame frame;
};

struct EdgeTerm
{
    int face0;
    int face1;
    double weight;  ///< w_e
};

/// Discrete E_p objective plus constraint blocks for one mesh.
class Problem
{
public:
    int num_faces() const { return static_cast<int>(alignment_.size()); }
    int num_variables() const { return 9 * num_faces(); }
    double p() const { return p_; }
    double epsilon() const { return epsilon_; }

    const std::vector<EdgeTerm>& edges() const { return edges_; }
    const AlignmentOperator& alignment(int face) const { return alignment_[face]; }
    const std::vector<AlignmentOperator>& alignments() const { return alignment_; }

    /// Fixed frame of a face, if any.
    const std::optional<ShFrame>& fixed(int face) const { return fixed_[face]; }
    int num_fixed() const;
    bool is_user_prescribed(int face) const { return user_prescribed_[face]; }

    /// 7 rows per face for hard alignment (epsilon = 0) plus 9 per fixed face.
    int equality_row_count() const;

    /// Edge factor folded into the l_p aggregation: w_e^{1/p} (1 for p = inf).
    double folded_weight(const EdgeTerm& e) const;

    /// Copy with additional faces held fixed. Used by the degeneracy re-solve; the pinned
    /// frames are taken as given (no variety or alignment check).
    Problem with_pinned(std::span<const Prescription> pins) const;

    /// Sparse 7F x 9F block-diagonal alignment matrix W.
    Eigen::SparseMatrix<double> alignment_matrix() const;
    /// u repeated per face.
    Eigen::VectorXd alignment_rhs() const;

private:
    friend Problem assemble(const SurfaceMesh&, const SolveConfig&, std::span<const Prescription>);

    double p_ = 2.0;
    double epsilon_ = 0.0;
    std::vector<EdgeTerm> edges_;
    std::vector<AlignmentOperator> alignment_;
    std::vector<std::optional<ShFrame>> fixed_;
    std::vector<bool> user_prescribed_;
};

/// Builds the objective and constraints. Throws ConfigError on bad p/epsilon or on
/// prescriptions that are off the variety, misaligned, out of range or conflicting.
Problem assemble(const SurfaceMesh& mesh, const SolveConfig& config, std::span<const Prescription> prescribed = {});

/// l_p aggregation of non-negative per-edge values (max for p = inf).
double aggregate_lp(std::span<const double> values, double p);

/// (sum_e w_e |f_t1 - f_t2|^p)^(1/p); max_e |f_t1 - f_t2| for p = inf.
double evaluate_energy(const Problem& problem, const FieldVector& f);

/// Gradient of sum_e w_e |f_t1 - f_t2|^p (finite p).
FieldVector energy_power_gradient(const Problem& problem, const FieldVector& f);

/// max_t |W_t f_t - u0| over faces that are not fixed.
double max_alignment_violation(const Problem& problem, const FieldVector& f);

inline ShFrame frame_of(const FieldVector& f, int face)
{
    return f.segment<9>(9 * face);
}

} // namespace octaframe
