#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "suploc/argmax.hpp"
#include "suploc/rng.hpp"
#include "suploc/waveform.hpp"

namespace suploc {

// X(s) = A1 cos(2 pi s / period1 + U1) + amp2 * A2 cos(2 pi s / period2 + U2)
// with A1, A2 independent with density x exp(-x^2/2) and U1, U2 uniform on
// [0, 2 pi). Equals G1 cos + G2 sin + amp2 (G3 cos + G4 sin) with standard
// normal G's, hence stationary, Gaussian and time-reversible.
struct TwoWaveModel {
    double period1 = 0.0;
    double period2 = 0.0;
    double amp2 = 1.0;
};

struct TwoWaveCoefficients {
    double a1 = 0.0;
    double u1 = 0.0;
    double a2 = 0.0;
    double u2 = 0.0;
};

// True iff x is within tol of a fraction p/q with q <= max_den (continued
// fraction best approximations).
inline bool near_rational(double x, std::uint64_t max_den = 1000000, double tol = 1e-12) {
    if (!std::isfinite(x))
        return false;
    x = std::fabs(x);
    // Walk the continued fraction of x, tracking convergents p/q.
    double frac = x;
    std::uint64_t p0 = 1, q0 = 0, p1 = 0, q1 = 1; // p0/q0 = 1/0, p1/q1 = 0/1
    for (int it = 0; it < 64; ++it) {
        const double a = std::floor(frac);
        if (a > 4e18)
            break;
        const std::uint64_t ai = std::uint64_t(a);
        // q grows monotonically; stop once the denominator cap is passed.
        if (q0 > 0 && ai != 0 && q1 > (std::uint64_t(1) << 62) / std::max<std::uint64_t>(ai, 1))
            break;
        const std::uint64_t p2 = ai * p0 + p1;
        const std::uint64_t q2 = ai * q0 + q1;
        if (q2 > max_den)
            break;
        if (q2 > 0 && std::fabs(x - double(p2) / double(q2)) <= tol)
            return true;
        p1 = p0;
        q1 = q0;
        p0 = p2;
        q0 = q2;
        const double rem = frac - a;
        if (rem < 1e-18)
            break;
        frac = 1.0 / rem;
    }
    return false;
}

enum class RatioPolicy { reject_rational, allow };

// Builder. With reject_rational (the default) a period ratio within 1e-12 of
// p/q, q <= 1e6, is refused: such models can tie their window maximum on a
// positive-measure event.
inline TwoWaveModel two_wave_model(double period1, double period2, double amp2,
                                   RatioPolicy policy = RatioPolicy::reject_rational) {
    if (!(period1 > 0.0) || !(period2 > 0.0) || !std::isfinite(period1) || !std::isfinite(period2))
        throw std::invalid_argument("two-wave periods must be positive and finite");
    if (!(amp2 >= 0.0) || !std::isfinite(amp2))
        throw std::invalid_argument("two-wave amp2 must be nonnegative and finite");
    if (policy == RatioPolicy::reject_rational && amp2 > 0.0 &&
        near_rational(period1 / period2))
        throw std::invalid_argument(
            "two-wave period ratio " + std::to_string(period1 / period2) +
            " is within 1e-12 of a rational p/q with q <= 1e6; pass a rationally "
            "independent pair (or construct with RatioPolicy::allow)");
    return TwoWaveModel{period1, period2, amp2};
}

// Draw order is pinned: A1, U1, A2, U2. Identical (seed, path_index) gives
// identical coefficients no matter which paths ran before.
inline TwoWaveCoefficients sample_two_wave(const TwoWaveModel&, const RngSpec& rng,
                                           std::uint64_t path_index) {
    RandomStream s(rng.seed, path_index);
    TwoWaveCoefficients c;
    c.a1 = s.rayleigh();
    c.u1 = s.uniform_on(0.0, 2.0 * RandomStream::pi());
    c.a2 = s.rayleigh();
    c.u2 = s.uniform_on(0.0, 2.0 * RandomStream::pi());
    return c;
}

inline double two_wave_value(const TwoWaveModel& m, const TwoWaveCoefficients& c, double s) {
    const double w1 = 2.0 * RandomStream::pi() / m.period1;
    const double w2 = 2.0 * RandomStream::pi() / m.period2;
    return c.a1 * std::cos(w1 * s + c.u1) + m.amp2 * c.a2 * std::cos(w2 * s + c.u2);
}

inline double two_wave_deriv(const TwoWaveModel& m, const TwoWaveCoefficients& c, double s) {
    const double w1 = 2.0 * RandomStream::pi() / m.period1;
    const double w2 = 2.0 * RandomStream::pi() / m.period2;
    return -c.a1 * w1 * std::sin(w1 * s + c.u1) - m.amp2 * c.a2 * w2 * std::sin(w2 * s + c.u2);
}

class TwoWaveRefineError : public std::runtime_error {
  public:
    explicit TwoWaveRefineError(const std::string& what) : std::runtime_error(what) {}
};

// Bisect the derivative inside [lo, hi] down to abs tol 1e-10. The bracket
// must straddle a local maximum: X' >= 0 at lo and <= 0 at hi (not both zero
// free). Degenerate second wave (a2 or amp2 zero) has the closed-form peak of
// the remaining cosine.
inline double refine_two_wave_argmax(const TwoWaveModel& m, const TwoWaveCoefficients& c,
                                     double lo, double hi) {
    constexpr double kTol = 1e-10;
    if (!(lo < hi))
        throw std::invalid_argument("refine bracket needs lo < hi");
    if (m.amp2 * c.a2 == 0.0) {
        const double base = m.period1 * (2.0 * RandomStream::pi() - c.u1) /
                            (2.0 * RandomStream::pi());
        return std::fmod(base, m.period1);
    }
    double dlo = two_wave_deriv(m, c, lo);
    double dhi = two_wave_deriv(m, c, hi);
    if (dlo == 0.0)
        return lo;
    if (dhi == 0.0)
        return hi;
    if (!(dlo > 0.0 && dhi < 0.0))
        throw TwoWaveRefineError("bracket does not straddle a local maximum; widen it");
    while (hi - lo > kTol) {
        const double mid = 0.5 * (lo + hi);
        const double d = two_wave_deriv(m, c, mid);
        if (d >= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Global argmax of one two-wave path over [0, T]: coarse grid fine enough
// that no oscillation fits between points, every competitive grid local
// maximum refined, endpoint values kept as candidates, leftmost on ties.
inline SupLocation two_wave_argmax(const TwoWaveModel& m, const TwoWaveCoefficients& c,
                                   double T, double step_hint = 0.0) {
    if (!(T > 0.0))
        throw std::invalid_argument("window length must be positive");
    const double fast = std::min(m.period1, m.period2);
    double step = step_hint > 0.0 ? step_hint : fast / 40.0;
    const std::size_t max_pts = 4u << 20;
    std::size_t n = std::size_t(std::ceil(T / step)) + 1;
    if (n > max_pts) {
        n = max_pts;
    }
    if (n < 8)
        n = 8;
    const double h = T / double(n - 1);
    std::vector<double> vals(n);
    for (std::size_t i = 0; i < n; ++i)
        vals[i] = two_wave_value(m, c, double(i) * h);

    const double w1 = 2.0 * RandomStream::pi() / m.period1;
    const double w2 = 2.0 * RandomStream::pi() / m.period2;
    const double curv = c.a1 * w1 * w1 + m.amp2 * c.a2 * w2 * w2;
    const double margin = curv * h * h / 8.0; // peak value error of the grid scan

    double best_grid = -INFINITY;
    for (double v : vals)
        best_grid = std::max(best_grid, v);

    struct Cand {
        double tau;
        double val;
    };
    std::vector<Cand> cands;
    cands.push_back({0.0, vals[0]});
    cands.push_back({T, vals[n - 1]});
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1]))
            continue;
        if (vals[i] < best_grid - margin)
            continue;
        const double lo = double(i - 1) * h;
        const double hi = std::min(double(i + 1) * h, T);
        double tau;
        try {
            tau = refine_two_wave_argmax(m, c, lo, hi);
        } catch (const TwoWaveRefineError&) {
            // Derivative sign pattern is irregular at this resolution; fall
            // back to a value-based trisection of the bracket.
            double a = lo, b = hi;
            for (int it = 0; it < 120 && b - a > 1e-10; ++it) {
                const double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
                if (two_wave_value(m, c, m1) < two_wave_value(m, c, m2))
                    a = m1;
                else
                    b = m2;
            }
            tau = 0.5 * (a + b);
        }
        tau = std::clamp(tau, 0.0, T);
        cands.push_back({tau, two_wave_value(m, c, tau)});
    }
    double best = -INFINITY;
    for (const Cand& cd : cands)
        best = std::max(best, cd.val);
    const double vtol = 1e-12 * std::max(1.0, c.a1 + m.amp2 * c.a2);
    SupLocation s;
    s.tau = INFINITY;
    for (const Cand& cd : cands) {
        if (cd.val < best - vtol)
            continue;
        if (cd.tau < s.tau) {
            s.tau = cd.tau;
            s.value = cd.val;
        }
    }
    s.at_left = s.tau <= h;
    s.at_right = T - s.tau <= h;
    s.near_tie = false;
    return s;
}

// Stationary Ornstein-Uhlenbeck path X(t) = exp(-t/2) B(exp(t)) on a uniform
// grid over [0, T] including both endpoints. Increments of B are exact
// Gaussians, drawn in grid order with B(1) first, so X(0) does not depend on
// the grid step.
struct OuGrid {
    double T = 0.0;
    double step = 0.0;
    std::vector<double> decay;     // exp(-t_i/2)
    std::vector<double> inc_sd;    // sqrt(exp(t_{i+1}) - exp(t_i))
    std::size_t size() const { return decay.size(); }
    double time_at(std::size_t i) const { return std::min(double(i) * step, T); }
};

inline OuGrid make_ou_grid(double T, double grid_step) {
    if (!(T > 0.0) || !(grid_step > 0.0))
        throw std::invalid_argument("ou grid needs T > 0 and grid_step > 0");
    const std::size_t n = std::size_t(std::llround(T / grid_step)) + 1;
    if (n < 2)
        throw std::invalid_argument("ou grid_step too coarse for the window");
    OuGrid g;
    g.T = T;
    g.step = T / double(n - 1);
    g.decay.resize(n);
    g.inc_sd.resize(n - 1);
    double prev = 1.0; // exp(t_0) = 1
    for (std::size_t i = 0; i < n; ++i) {
        const double t = (i == n - 1) ? T : double(i) * g.step;
        g.decay[i] = std::exp(-0.5 * t);
        if (i > 0) {
            const double e = std::exp(t);
            g.inc_sd[i - 1] = std::sqrt(e - prev);
            prev = e;
        }
    }
    return g;
}

// Fills out[i] = X(t_i); out must have grid.size() elements.
inline void simulate_ou(const OuGrid& grid, RandomStream& stream, std::vector<double>& out) {
    const std::size_t n = grid.size();
    out.resize(n);
    double b = stream.normal(); // B(1) ~ N(0,1)
    out[0] = b;                 // decay[0] == 1
    for (std::size_t i = 1; i < n; ++i) {
        b += grid.inc_sd[i - 1] * stream.normal();
        out[i] = grid.decay[i] * b;
    }
}

// Streaming leftmost grid argmax of one OU path; no path storage.
inline SupLocation ou_tau(const OuGrid& grid, RandomStream& stream) {
    const std::size_t n = grid.size();
    double b = stream.normal();
    double best = b;
    std::size_t best_i = 0;
    for (std::size_t i = 1; i < n; ++i) {
        b += grid.inc_sd[i - 1] * stream.normal();
        const double x = grid.decay[i] * b;
        if (x > best) {
            best = x;
            best_i = i;
        }
    }
    SupLocation s;
    s.tau = grid.time_at(best_i);
    s.value = best;
    s.at_left = best_i <= 1;
    s.at_right = best_i + 2 >= n;
    s.near_tie = false;
    return s;
}

} // namespace suploc
