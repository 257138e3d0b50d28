#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "mfshe/errors.hpp"

namespace mfshe::fractal {

// V_n = [-e^n, e^n)^d; shell S_0 = V_0 and S_{n+1} = V_{n+1} \ V_n.

inline bool in_box_vn(const std::vector<double>& x, int n) {
    const double e_n = std::exp(static_cast<double>(n));
    for (double xi : x)
        if (!(xi >= -e_n && xi < e_n)) return false;
    return true;
}

// Smallest n >= 0 with x in V_n (the shell index of x).
inline int shell_of(const std::vector<double>& x) {
    double m = 0.0;
    for (double xi : x) m = std::max(m, std::fabs(xi));
    int n = m <= 1.0 ? 0 : static_cast<int>(std::ceil(std::log(m)));
    n = std::max(0, n - 1);
    while (!in_box_vn(x, n)) ++n;
    return n;
}

inline bool in_shell(const std::vector<double>& x, int n) {
    return shell_of(x) == n;
}

// Upright cube Q(x, r) = prod [x_i, x_i + r), side r >= 1.
struct Cube {
    std::vector<double> corner;
    double side = 1.0;

    Cube(std::vector<double> c, double r) : corner(std::move(c)), side(r) {
        if (!(r >= 1.0))
            throw std::invalid_argument("Cube: side must be >= 1");
    }

    bool contains(const std::vector<double>& x) const {
        for (std::size_t i = 0; i < corner.size(); ++i)
            if (!(x[i] >= corner[i] && x[i] < corner[i] + side)) return false;
        return true;
    }
};

using IntPoint = std::vector<std::int64_t>;

} // namespace mfshe::fractal
