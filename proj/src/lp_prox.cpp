#include <octaframe/lp_prox.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace octaframe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double lq_norm(const Eigen::VectorXd& x, double q)
{
    const double top = x.maxCoeff();
    if (top == 0.0) return 0.0;
    double sum = 0;
    for (double v : x) sum += std::pow(v / top, q);
    return top * std::pow(sum, 1.0 / q);
}

Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& w, double radius)
{
    if (w.sum() <= radius) return w;
    std::vector<double> sorted(w.begin(), w.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0;
    double tau = 0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        cumulative += sorted[k];
        const double candidate = (cumulative - radius) / static_cast<double>(k + 1);
        if (k + 1 == sorted.size() || sorted[k + 1] <= candidate) {
            tau = candidate;
            break;
        }
    }
    return (w.array() - tau).max(0.0).matrix();
}

// Root of x + mu x^(q-1) = w on [0, w].
double shrink(double w, double mu, double q)
{
    if (w <= 0.0) return 0.0;
    double lo = 0.0;
    double hi = w;
    double x = w / (1.0 + mu * std::pow(w, q - 2.0));
    x = std::clamp(x, lo, hi);
    for (int iter = 0; iter < 100; ++iter) {
        const double px = std::pow(x, q - 2.0);
        const double h = x + mu * px * x - w;
        if (h > 0) hi = x; else lo = x;
        if (std::abs(h) <= 1e-15 * w) break;
        const double dh = 1.0 + mu * (q - 1.0) * px;
        double next = x - h / dh;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (hi - lo <= 1e-16 * w) break;
        x = next;
    }
    return x;
}

Eigen::VectorXd project_general(const Eigen::VectorXd& w, double q, double radius)
{
    const double target = std::pow(radius, q);
    auto evaluate = [&](double mu, Eigen::VectorXd& x) {
        double sum = 0;
        for (Eigen::Index i = 0; i < w.size(); ++i) {
            x[i] = shrink(w[i], mu, q);
            sum += std::pow(x[i], q);
        }
        return sum - target;
    };
    Eigen::VectorXd x(w.size());
    double lo = 0.0;
    double hi = 1.0;
    while (evaluate(hi, x) > 0) hi *= 4.0;
    double mu = 0.5 * hi;
    for (int iter = 0; iter < 200; ++iter) {
        const double phi = evaluate(mu, x);
        if (phi > 0) lo = mu; else hi = mu;
        if (std::abs(phi) <= 1e-12 * target || hi - lo <= 1e-15 * hi) break;
        // dphi/dmu = sum q x^(q-1) dx/dmu with dx/dmu = -x^(q-1) / (1 + mu (q-1) x^(q-2)).
        double dphi = 0;
        for (Eigen::Index i = 0; i < w.size(); ++i) {
            if (x[i] <= 0) continue;
            const double xq1 = std::pow(x[i], q - 1.0);
            dphi -= q * xq1 * xq1 / (1.0 + mu * (q - 1.0) * xq1 / x[i]);
        }
        double next = dphi < 0 ? mu - phi / dphi : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        mu = next;
    }
    return x;
}

} // namespace

double dual_exponent(double p)
{
    if (std::isinf(p)) return 1.0;
    if (p == 1.0) return kInf;
    return p / (p - 1.0);
}

Eigen::VectorXd project_lq_ball(const Eigen::VectorXd& w, double q, double radius)
{
    if (w.size() == 0) return w;
    if (std::isinf(q)) return w.cwiseMin(radius);
    if (q == 1.0) return project_l1_ball(w, radius);
    const double norm = lq_norm(w, q);
    if (norm <= radius) return w;
    if (q == 2.0) return w * (radius / norm);
    return project_general(w, q, radius);
}

Eigen::VectorXd prox_lp_norm(const Eigen::VectorXd& n, double p, double sigma)
{
    if (sigma <= 0.0 || n.size() == 0) return n;
    // Moreau: prox of sigma |.|_p is the identity minus projection onto the sigma-scaled dual ball.
    return (n - project_lq_ball(n, dual_exponent(p), sigma)).cwiseMax(0.0);
}

} // namespace octaframe
