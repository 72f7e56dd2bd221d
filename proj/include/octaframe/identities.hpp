#pragma once

#include <octaframe/sh_algebra.hpp>

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace octaframe {

/// Generic dense exponential by scaling and squaring of a truncated Taylor series.
/// Slow; used only to cross-check the closed forms.
Eigen::MatrixXd expm_taylor(const Eigen::MatrixXd& a);

struct IdentityCheck
{
    std::string name;
    double residual = 0;  ///< max absolute deviation observed
    double tolerance = 0;
    bool passed = false;
};

struct IdentityOptions
{
    int grid = 50;        ///< (b, t) grid for the crease closed form; the 3-D grid uses 2/5 of it
    int rotations = 1000;  ///< random rotations for the Gram identity
    int exp_samples = 500;
    int lobe_samples = 100;
    std::uint64_t seed = 20;
};

/// Closed-form identities of the band-4 algebra, evaluated against the supplied
/// generators (pass a perturbed copy to check that failures are detected).
std::vector<IdentityCheck> run_identity_suite(const AngularMomentum& l, const IdentityOptions& options = {});

} // namespace octaframe
