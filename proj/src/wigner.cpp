#include <octaframe/sh_algebra.hpp>

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace octaframe {

namespace {

double factorial(int n)
{
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// One term coef * cos(b/2)^cpow * sin(b/2)^spow of the d-matrix sum.
struct Term
{
    double coef;
    int cpow;
    int spow;
};

template <class Visit>
void for_each_term(int l, int mp, int m, Visit&& visit)
{
    const double norm =
        std::sqrt(factorial(l + mp) * factorial(l - mp) * factorial(l + m) * factorial(l - m));
    for (int k = 0; k <= 2 * l; ++k) {
        if (l + m - k < 0 || l - k - mp < 0 || k - m + mp < 0) continue;
        const double sign = ((k - m + mp) % 2 == 0) ? 1.0 : -1.0;
        const double den = factorial(l + m - k) * factorial(k) * factorial(l - k - mp) * factorial(k - m + mp);
        visit(Term{sign * norm / den, 2 * l - 2 * k + m - mp, 2 * k - m + mp});
    }
}

// Band-4 d-matrix as polynomial tables in cos(b/2), sin(b/2), built once.
struct Band4Table
{
    std::array<std::array<std::vector<Term>, 9>, 9> terms;

    Band4Table()
    {
        for (int mp = -4; mp <= 4; ++mp) {
            for (int m = -4; m <= 4; ++m) {
                for_each_term(4, mp, m, [&](Term t) { terms[mp + 4][m + 4].push_back(t); });
            }
        }
    }
};

const Band4Table& band4()
{
    static const Band4Table table;
    return table;
}

inline double parity(int k)
{
    return (k % 2 == 0) ? 1.0 : -1.0;
}

} // namespace

double wigner_small_d(int l, int mp, int m, double beta)
{
    if (l < 0 || l > 8 || std::abs(mp) > l || std::abs(m) > l) {
        throw std::invalid_argument("wigner_small_d: index out of range");
    }
    const double c = std::cos(0.5 * beta);
    const double s = std::sin(0.5 * beta);
    double sum = 0.0;
    for_each_term(l, mp, m, [&](Term t) { sum += t.coef * std::pow(c, t.cpow) * std::pow(s, t.spow); });
    return sum;
}

Mat9 exp_y_matrix(double beta)
{
    const double c = std::cos(0.5 * beta);
    const double s = std::sin(0.5 * beta);
    std::array<double, 9> cp{};
    std::array<double, 9> sp{};
    cp[0] = sp[0] = 1.0;
    for (int i = 1; i < 9; ++i) {
        cp[i] = cp[i - 1] * c;
        sp[i] = sp[i - 1] * s;
    }

    const auto& table = band4();
    auto d = [&](int mp, int m) {
        double sum = 0.0;
        for (const Term& t : table.terms[mp + 4][m + 4]) sum += t.coef * cp[t.cpow] * sp[t.spow];
        return sum;
    };

    // Rotation about y keeps the cosine-type (m >= 0) and sine-type (m < 0) blocks apart.
    const double r2 = std::sqrt(2.0);
    Mat9 r = Mat9::Zero();
    r(4, 4) = d(0, 0);
    for (int m = 1; m <= 4; ++m) {
        r(4, 4 + m) = r2 * d(0, -m);
        r(4 + m, 4) = r2 * parity(m) * d(m, 0);
    }
    for (int mp = 1; mp <= 4; ++mp) {
        for (int m = 1; m <= 4; ++m) {
            const double same = parity(mp + m) * d(mp, m);
            const double flip = parity(mp) * d(mp, -m);
            r(4 + mp, 4 + m) = same + flip;
            r(4 - mp, 4 - m) = same - flip;
        }
    }
    return r;
}

} // namespace octaframe
