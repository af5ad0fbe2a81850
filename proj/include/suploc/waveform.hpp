#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace suploc {

struct Knot {
    double t;
    double v;
};

// Periodic piecewise-linear function. Knots live in [0, period), strictly
// increasing; the segment from the last knot back to the first (shifted by one
// period) is part of the representation, so x(period) == x(0) by construction.
class Waveform {
  public:
    Waveform(double period, std::vector<Knot> knots)
        : period_(period), knots_(std::move(knots)) {
        if (!(period_ > 0.0) || !std::isfinite(period_))
            throw std::invalid_argument("waveform period must be positive and finite");
        if (knots_.empty())
            throw std::invalid_argument("waveform needs at least one knot");
        for (std::size_t i = 0; i < knots_.size(); ++i) {
            const Knot& k = knots_[i];
            if (!std::isfinite(k.t) || !std::isfinite(k.v))
                throw std::invalid_argument("waveform knot not finite");
            if (k.t < 0.0 || k.t >= period_)
                throw std::invalid_argument("waveform knot time outside [0, period)");
            if (i > 0 && !(knots_[i - 1].t < k.t))
                throw std::invalid_argument("waveform knot times must be strictly increasing");
        }
    }

    double period() const { return period_; }
    const std::vector<Knot>& knots() const { return knots_; }

    // Reduce s to [0, period).
    double wrap(double s) const {
        double r = std::fmod(s, period_);
        if (r < 0.0)
            r += period_;
        if (r >= period_)  // fmod can land exactly on period_ after the += above
            r = 0.0;
        return r;
    }

    double value(double s) const {
        const double r = wrap(s);
        const std::size_t m = knots_.size();
        // Segment endpoints (t0,v0) -> (t1,v1) with t0 <= r < t1.
        double t0, v0, t1, v1;
        auto it = std::upper_bound(knots_.begin(), knots_.end(), r,
                                   [](double x, const Knot& k) { return x < k.t; });
        if (it == knots_.begin()) {
            // Before the first knot: tail of the wrap segment.
            t0 = knots_[m - 1].t - period_;
            v0 = knots_[m - 1].v;
            t1 = knots_[0].t;
            v1 = knots_[0].v;
        } else {
            const std::size_t i = std::size_t(it - knots_.begin()) - 1;
            t0 = knots_[i].t;
            v0 = knots_[i].v;
            if (i + 1 < m) {
                t1 = knots_[i + 1].t;
                v1 = knots_[i + 1].v;
            } else {
                t1 = knots_[0].t + period_;
                v1 = knots_[0].v;
            }
        }
        if (t1 == t0)
            return v0;
        return v0 + (v1 - v0) * ((r - t0) / (t1 - t0));
    }

    double min_value() const {
        double m = knots_[0].v;
        for (const Knot& k : knots_)
            m = std::min(m, k.v);
        return m;
    }

    double max_value() const {
        double m = knots_[0].v;
        for (const Knot& k : knots_)
            m = std::max(m, k.v);
        return m;
    }

    // Scale used for relative value comparisons; never below 1.
    double value_scale() const {
        return std::max({1.0, std::fabs(min_value()), std::fabs(max_value())});
    }

    bool is_constant() const {
        for (const Knot& k : knots_)
            if (k.v != knots_[0].v)
                return false;
        return true;
    }

    // Knot indices that are strict local maxima of the periodic function.
    std::vector<std::size_t> local_max_knots() const {
        std::vector<std::size_t> out;
        const std::size_t m = knots_.size();
        if (m < 2)
            return out;
        for (std::size_t i = 0; i < m; ++i) {
            const double prev = knots_[(i + m - 1) % m].v;
            const double next = knots_[(i + 1) % m].v;
            if (knots_[i].v > prev && knots_[i].v > next)
                out.push_back(i);
        }
        return out;
    }

  private:
    double period_;
    std::vector<Knot> knots_;
};

// x_rev(s) = x(-s); knot set is the reflected knot set.
inline Waveform reverse_waveform(const Waveform& w) {
    const double p = w.period();
    std::vector<Knot> ks;
    ks.reserve(w.knots().size());
    for (const Knot& k : w.knots()) {
        double t = k.t == 0.0 ? 0.0 : p - k.t;
        if (t >= p)
            t -= p;
        ks.push_back({t, k.v});
    }
    std::sort(ks.begin(), ks.end(), [](const Knot& a, const Knot& b) { return a.t < b.t; });
    return Waveform(p, std::move(ks));
}

inline Waveform build_triangle(double period) {
    if (!(period > 0.0) || !std::isfinite(period))
        throw std::invalid_argument("triangle period must be positive and finite");
    return Waveform(period, {{0.0, 1.0}, {period / 2.0, -1.0}});
}

struct SawtoothCombParams {
    double t = 0.0;   // target location; only constrains r
    double T = 0.0;   // window length, also sets the period k*tau + 2T
    double tau = 0.0; // peak spacing
    double r = 0.0;   // validation radius, t < r < tau
    int k = 0;        // number of descending peaks after the tallest one
    double R = 0.0;   // depth of the separating minima; <= 0 means default 100*k
};

class SawtoothConstructionError : public std::runtime_error {
  public:
    explicit SawtoothConstructionError(const std::string& what) : std::runtime_error(what) {}
};

// Peaks (i*tau, k - i) for i = 0..k separated by minima of depth -R, then a
// final minimum at k*tau + T; period k*tau + 2T. Validates x(i*tau) > x(i*tau - r)
// for i = 1..k, which is what makes each peak the window maximum for a phase
// interval of length r.
inline Waveform build_sawtooth_comb(const SawtoothCombParams& p) {
    if (p.k < 1)
        throw std::invalid_argument("sawtooth comb needs k >= 1");
    if (!(p.t >= 0.0))
        throw std::invalid_argument("sawtooth comb needs t >= 0");
    if (!(p.t < p.r))
        throw std::invalid_argument("sawtooth comb needs t < r");
    if (!(p.r < p.tau))
        throw std::invalid_argument("sawtooth comb needs r < tau");
    if (!(p.tau <= p.T))
        throw std::invalid_argument("sawtooth comb needs tau <= T");
    const double R = p.R > 0.0 ? p.R : 100.0 * double(p.k);
    const double period = double(p.k) * p.tau + 2.0 * p.T;
    std::vector<Knot> ks;
    ks.reserve(2 * std::size_t(p.k) + 2);
    for (int i = 0; i <= p.k; ++i) {
        ks.push_back({double(i) * p.tau, double(p.k - i)});
        if (i < p.k)
            ks.push_back({(double(i) + 0.5) * p.tau, -R});
    }
    ks.push_back({double(p.k) * p.tau + p.T, -R});
    Waveform w(period, std::move(ks));
    for (int i = 1; i <= p.k; ++i) {
        const double peak = w.value(double(i) * p.tau);
        const double left = w.value(double(i) * p.tau - p.r);
        if (!(peak > left))
            throw SawtoothConstructionError(
                "sawtooth comb condition x(i*tau) > x(i*tau - r) fails at i = " +
                std::to_string(i) + " (peak " + std::to_string(peak) + " vs " +
                std::to_string(left) + "); increase R or reduce r");
    }
    return w;
}

} // namespace suploc
