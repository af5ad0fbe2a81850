#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "suploc/exact_law.hpp"

namespace suploc {

struct Variation {
    double total = 0.0;
    double positive = 0.0;
    double negative = 0.0;
};

// Variation of the piecewise-constant density over the open interval
// (t1, t2): jumps at piece boundaries strictly inside; boundary jumps at t1 or
// t2 themselves do not count.
inline Variation tv(const ExactLaw& law, double t1, double t2) {
    if (!(0.0 <= t1) || !(t1 < t2) || !(t2 <= law.T()))
        throw std::invalid_argument("tv needs 0 <= t1 < t2 <= T");
    Variation v;
    const auto& pieces = law.pieces();
    for (std::size_t i = 1; i < pieces.size(); ++i) {
        const double b = pieces[i].lo;
        if (!(b > t1 && b < t2))
            continue;
        const double jump = pieces[i].density - pieces[i - 1].density;
        v.total += std::fabs(jump);
        if (jump > 0.0)
            v.positive += jump;
        else
            v.negative += -jump;
    }
    return v;
}

} // namespace suploc
