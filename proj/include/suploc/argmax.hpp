#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "suploc/waveform.hpp"

namespace suploc {

enum class Side { leftmost, rightmost };

struct Window {
    double a = 0.0;
    double b = 0.0;
    double length() const { return b - a; }
};

inline void require_window(const Window& win) {
    if (!(win.a < win.b) || !std::isfinite(win.a) || !std::isfinite(win.b))
        throw std::invalid_argument("window must satisfy a < b and be finite");
}

struct SupLocation {
    double tau = 0.0;
    double value = 0.0;
    bool at_left = false;
    bool at_right = false;
    bool near_tie = false;
};

// Relative tolerance used when comparing candidate values of a phase path.
inline double phase_value_tol(const Waveform& w) { return 1e-12 * w.value_scale(); }

namespace detail {

struct Candidate {
    double pos;
    double val;
};

// All points of [a, b] that can carry the maximum of t -> x(t + u): every
// occurrence of every knot, plus the window endpoints.
inline std::vector<Candidate> phase_candidates(const Waveform& w, double u, const Window& win) {
    const double p = w.period();
    std::vector<Candidate> out;
    out.reserve(w.knots().size() * std::size_t((win.b - win.a) / p + 2.0) + 2);
    out.push_back({win.a, w.value(win.a + u)});
    out.push_back({win.b, w.value(win.b + u)});
    for (const Knot& k : w.knots()) {
        // First occurrence at or after a: a + ((k.t - (a + u)) mod p).
        double off = std::fmod(k.t - (win.a + u), p);
        if (off < 0.0)
            off += p;
        if (off >= p)
            off = 0.0;
        for (double pos = win.a + off; pos <= win.b; pos += p)
            out.push_back({pos, k.v});
    }
    return out;
}

inline SupLocation select(const std::vector<Candidate>& cands, const Window& win, Side side,
                          double vtol, double pos_tol) {
    double best = -INFINITY;
    for (const Candidate& c : cands)
        best = std::max(best, c.val);
    double tau = 0.0;
    bool first = true;
    double lo_pos = INFINITY, hi_pos = -INFINITY;
    for (const Candidate& c : cands) {
        if (c.val < best - vtol)
            continue;
        lo_pos = std::min(lo_pos, c.pos);
        hi_pos = std::max(hi_pos, c.pos);
        const bool better = first || (side == Side::leftmost ? c.pos < tau : c.pos > tau);
        if (better)
            tau = c.pos;
        first = false;
    }
    SupLocation s;
    s.tau = tau;
    s.value = best;
    s.at_left = tau - win.a <= pos_tol;
    s.at_right = win.b - tau <= pos_tol;
    s.near_tie = hi_pos - lo_pos > std::max(pos_tol, 1e-9 * win.length());
    return s;
}

} // namespace detail

// Exact argmax of t -> x(t + u) over the window; the maximum sits at a knot
// occurrence or a window endpoint, so candidate enumeration is exhaustive.
inline SupLocation exact_phase_argmax(const Waveform& w, double u, const Window& win,
                                      Side side = Side::leftmost) {
    require_window(win);
    const auto cands = detail::phase_candidates(w, u, win);
    return detail::select(cands, win, side, phase_value_tol(w), 0.0);
}

// True iff the path t -> x(t + u) attains its window maximum (within the value
// tolerance) at two locations separated by more than pos_tol.
inline bool detect_multiplicity(const Waveform& w, double u, const Window& win,
                                double pos_tol = 1e-9) {
    require_window(win);
    const auto cands = detail::phase_candidates(w, u, win);
    double best = -INFINITY;
    for (const auto& c : cands)
        best = std::max(best, c.val);
    const double vtol = phase_value_tol(w);
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& c : cands) {
        if (c.val < best - vtol)
            continue;
        lo = std::min(lo, c.pos);
        hi = std::max(hi, c.pos);
    }
    return hi - lo > pos_tol;
}

// Argmax over sampled values on the uniform grid a + i*h, h = (b-a)/(n-1).
// Leftmost index attaining the max within tie_tol. near_tie flags a genuine
// competitor: another index within tie_tol that is either >= 2 grid steps away
// or exactly equal in value.
inline SupLocation grid_argmax(std::span<const double> values, const Window& win,
                               double tie_tol = 0.0, Side side = Side::leftmost) {
    require_window(win);
    if (values.empty())
        throw std::invalid_argument("grid_argmax needs a nonempty grid");
    if (tie_tol < 0.0)
        throw std::invalid_argument("tie_tol must be nonnegative");
    const std::size_t n = values.size();
    const double h = n > 1 ? win.length() / double(n - 1) : 0.0;
    double best = -INFINITY;
    for (double v : values)
        best = std::max(best, v);
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t idx = side == Side::leftmost ? i : n - 1 - i;
        if (values[idx] >= best - tie_tol) {
            pick = idx;
            break;
        }
    }
    bool near_tie = false;
    for (std::size_t i = 0; i < n && !near_tie; ++i) {
        if (i == pick || values[i] < best - tie_tol)
            continue;
        const std::size_t dist = i > pick ? i - pick : pick - i;
        if (dist >= 2 || values[i] == values[pick])
            near_tie = true;
    }
    SupLocation s;
    s.tau = n > 1 ? win.a + double(pick) * h : win.a;
    if (pick == n - 1)
        s.tau = win.b; // avoid i*h rounding past the endpoint
    s.value = values[pick];
    const double step = n > 1 ? h : 0.0;
    s.at_left = s.tau - win.a <= step;
    s.at_right = win.b - s.tau <= step;
    s.near_tie = near_tie;
    return s;
}

// Fraction of phases placing a strict waveform local maximum in (0, eps),
// divided by eps. Exact: the phase set is a union of arcs of length eps, one
// per local-max knot, merged before measuring.
inline double exact_local_max_rate(const Waveform& w, double eps) {
    if (!(eps > 0.0))
        throw std::invalid_argument("eps must be positive");
    const double p = w.period();
    const auto maxima = w.local_max_knots();
    if (maxima.empty())
        return 0.0;
    // Arcs (m - eps, m) mod p on the phase circle.
    std::vector<std::pair<double, double>> arcs;
    for (std::size_t i : maxima) {
        const double m = w.knots()[i].t;
        double lo = m - eps;
        if (eps >= p) {
            arcs.emplace_back(0.0, p);
            break;
        }
        if (lo < 0.0) {
            arcs.emplace_back(lo + p, p);
            arcs.emplace_back(0.0, m);
        } else {
            arcs.emplace_back(lo, m);
        }
    }
    std::sort(arcs.begin(), arcs.end());
    double measure = 0.0;
    double cur_lo = arcs[0].first, cur_hi = arcs[0].second;
    for (std::size_t i = 1; i < arcs.size(); ++i) {
        if (arcs[i].first <= cur_hi) {
            cur_hi = std::max(cur_hi, arcs[i].second);
        } else {
            measure += cur_hi - cur_lo;
            cur_lo = arcs[i].first;
            cur_hi = arcs[i].second;
        }
    }
    measure += cur_hi - cur_lo;
    return measure / (p * eps);
}

} // namespace suploc
