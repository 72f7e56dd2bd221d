#pragma once

#include <Eigen/Core>

namespace octaframe {

/// Hoelder conjugate: 1/p + 1/q = 1 (1 <-> inf).
double dual_exponent(double p);

/// Euclidean projection of a non-negative vector onto {x : |x|_q <= radius}.
/// q in [1, inf]; non-dyadic q is solved by safeguarded Newton on the multiplier.
Eigen::VectorXd project_lq_ball(const Eigen::VectorXd& w, double q, double radius = 1.0);

/// argmin_y 0.5 |y - n|^2 + sigma |y|_p for a non-negative vector n.
Eigen::VectorXd prox_lp_norm(const Eigen::VectorXd& n, double p, double sigma);

} // namespace octaframe
