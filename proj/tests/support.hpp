#pragma once

#include <octaframe/sh_algebra.hpp>

#include <cmath>
#include <numbers>
#include <random>

namespace testing {

inline octaframe::Vec3 random_axis_angle(std::mt19937_64& rng, double max_angle = std::numbers::pi)
{
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    octaframe::Vec3 axis(g(rng), g(rng), g(rng));
    return axis.normalized() * max_angle * std::cbrt(u(rng));
}

inline octaframe::Vec3 random_unit(std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    octaframe::Vec3 n(g(rng), g(rng), g(rng));
    return n.normalized();
}

inline octaframe::ShFrame random_variety_point(std::mt19937_64& rng)
{
    return octaframe::exp_rotation(random_axis_angle(rng)) * octaframe::canonical_frame();
}

} // namespace testing
