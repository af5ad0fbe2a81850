#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace suploc {

inline void require_interior(double t, double T) {
    if (!(T > 0.0))
        throw std::invalid_argument("window length must be positive");
    if (!(t > 0.0) || !(t < T))
        throw std::invalid_argument("bound is defined on the open interval (0, T)");
}

// Universal density bound for the argmax location of any stationary process.
inline double general_bound(double t, double T) {
    require_interior(t, T);
    return std::max(1.0 / t, 1.0 / (T - t));
}

// Sharper bound available when the process is also time-reversible.
// Continuous across its four branches.
inline double symmetric_bound(double t, double T) {
    require_interior(t, T);
    if (t <= T / 3.0)
        return 1.0 / (2.0 * t);
    if (t <= T / 2.0)
        return 1.0 / (T - t);
    if (t <= 2.0 * T / 3.0)
        return 1.0 / t;
    return 1.0 / (2.0 * (T - t));
}

// Integral of the pointwise bound over [a, b] subset of (0, T); closed form.
// Used to compare binned mass estimates against the bounds. Edge bins touching
// 0 or T integrate to +infinity, which is reported as such.
inline double integrate_general_bound(double a, double b, double T) {
    if (!(0.0 <= a && a < b && b <= T))
        throw std::invalid_argument("integration range must satisfy 0 <= a < b <= T");
    const double mid = T / 2.0;
    double total = 0.0;
    // 1/t part on [a, min(b, mid)]
    if (a < mid) {
        const double hi = std::min(b, mid);
        if (a == 0.0)
            return INFINITY;
        total += std::log(hi / a);
    }
    // 1/(T-t) part on [max(a, mid), b]
    if (b > mid) {
        const double lo = std::max(a, mid);
        if (b == T)
            return INFINITY;
        total += std::log((T - lo) / (T - b));
    }
    return total;
}

inline double integrate_symmetric_bound(double a, double b, double T) {
    if (!(0.0 <= a && a < b && b <= T))
        throw std::invalid_argument("integration range must satisfy 0 <= a < b <= T");
    struct Branch {
        double lo, hi;
        int kind; // 0: 1/(2t), 1: 1/(T-t), 2: 1/t, 3: 1/(2(T-t))
    };
    const Branch branches[4] = {{0.0, T / 3.0, 0},
                                {T / 3.0, T / 2.0, 1},
                                {T / 2.0, 2.0 * T / 3.0, 2},
                                {2.0 * T / 3.0, T, 3}};
    double total = 0.0;
    for (const Branch& br : branches) {
        const double lo = std::max(a, br.lo);
        const double hi = std::min(b, br.hi);
        if (!(lo < hi))
            continue;
        switch (br.kind) {
        case 0:
            if (lo == 0.0)
                return INFINITY;
            total += 0.5 * std::log(hi / lo);
            break;
        case 1:
            total += std::log((T - lo) / (T - hi));
            break;
        case 2:
            total += std::log(hi / lo);
            break;
        default:
            if (hi == T)
                return INFINITY;
            total += 0.5 * std::log((T - lo) / (T - hi));
            break;
        }
    }
    return total;
}

} // namespace suploc
