#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "suploc/argmax.hpp"
#include "suploc/waveform.hpp"

namespace suploc {

struct LawPiece {
    double lo = 0.0;
    double hi = 0.0;
    double density = 0.0;
};

struct LawAtom {
    double at = 0.0;
    double mass = 0.0;
};

inline constexpr double kLawMassTol = 1e-10;
inline constexpr double kLawCutTol = 1e-12;

// Distribution of the argmax location over [0, T]: endpoint (or interior)
// atoms plus a piecewise-constant density whose pieces tile (0, T) exactly.
// density(t) is the right-continuous version; f(0+) and f(T-) are the first
// and last piece values.
class ExactLaw {
  public:
    ExactLaw(double T, Side side, std::vector<LawAtom> atoms, std::vector<LawPiece> pieces)
        : T_(T), side_(side), atoms_(std::move(atoms)), pieces_(std::move(pieces)) {
        if (!(T_ > 0.0) || !std::isfinite(T_))
            throw std::invalid_argument("law window length must be positive and finite");
        if (pieces_.empty())
            throw std::invalid_argument("law needs at least one density piece");
        if (pieces_.front().lo != 0.0 || pieces_.back().hi != T_)
            throw std::invalid_argument("law pieces must tile (0, T)");
        for (std::size_t i = 0; i < pieces_.size(); ++i) {
            const LawPiece& pc = pieces_[i];
            if (!(pc.lo < pc.hi) || !(pc.density >= 0.0) || !std::isfinite(pc.density))
                throw std::invalid_argument("law piece malformed");
            if (i > 0 && pieces_[i - 1].hi != pc.lo)
                throw std::invalid_argument("law pieces must be contiguous");
        }
        for (const LawAtom& a : atoms_) {
            if (!(a.mass >= 0.0) || a.at < 0.0 || a.at > T_)
                throw std::invalid_argument("law atom malformed");
        }
        if (std::fabs(total_mass() - 1.0) > kLawMassTol)
            throw std::invalid_argument("law mass must sum to 1");
    }

    double T() const { return T_; }
    Side side() const { return side_; }
    const std::vector<LawAtom>& atoms() const { return atoms_; }
    const std::vector<LawPiece>& pieces() const { return pieces_; }

    double total_mass() const {
        double s = 0.0;
        for (const LawAtom& a : atoms_)
            s += a.mass;
        for (const LawPiece& pc : pieces_)
            s += pc.density * (pc.hi - pc.lo);
        return s;
    }

    // Right-continuous density; defined for 0 <= t < T.
    double density(double t) const {
        if (!(t >= 0.0) || !(t < T_))
            throw std::invalid_argument("density(t) needs 0 <= t < T");
        return pieces_[piece_at(t)].density;
    }

    // Left limit; defined for 0 < t <= T.
    double density_left(double t) const {
        if (!(t > 0.0) || !(t <= T_))
            throw std::invalid_argument("density_left(t) needs 0 < t <= T");
        std::size_t i = piece_at(t == T_ ? t : std::nextafter(t, 0.0));
        // t exactly on a boundary belongs to the earlier piece from the left.
        if (pieces_[i].lo == t && i > 0)
            --i;
        return pieces_[i].density;
    }

    double f0() const { return pieces_.front().density; }
    double fT() const { return pieces_.back().density; }

    double atom_mass_at(double at, double tol = 0.0) const {
        double s = 0.0;
        for (const LawAtom& a : atoms_)
            if (std::fabs(a.at - at) <= tol)
                s += a.mass;
        return s;
    }

    // Mass of the closed interval [lo, hi] intersected with [0, T].
    double interval_mass(double lo, double hi, bool include_atoms = true) const {
        if (!(lo <= hi))
            throw std::invalid_argument("interval_mass needs lo <= hi");
        lo = std::max(lo, 0.0);
        hi = std::min(hi, T_);
        if (lo > hi)
            return 0.0;
        double s = 0.0;
        for (const LawPiece& pc : pieces_) {
            const double a = std::max(lo, pc.lo);
            const double b = std::min(hi, pc.hi);
            if (a < b)
                s += pc.density * (b - a);
        }
        if (include_atoms)
            for (const LawAtom& a : atoms_)
                if (a.at >= lo && a.at <= hi)
                    s += a.mass;
        return s;
    }

    // Piece boundaries strictly inside (lo, hi).
    std::vector<double> breakpoints_in(double lo, double hi) const {
        std::vector<double> out;
        for (std::size_t i = 1; i < pieces_.size(); ++i) {
            const double b = pieces_[i].lo;
            if (b > lo && b < hi)
                out.push_back(b);
        }
        return out;
    }

  private:
    std::size_t piece_at(double t) const {
        auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                                   [](double x, const LawPiece& pc) { return x < pc.lo; });
        return it == pieces_.begin() ? 0 : std::size_t(it - pieces_.begin()) - 1;
    }

    double T_;
    Side side_;
    std::vector<LawAtom> atoms_;
    std::vector<LawPiece> pieces_;
};

namespace detail {

// One maximal phase arc on which a single knot occurrence carries the window
// maximum; tau sweeps image_lo..image_hi linearly there.
struct BranchImage {
    double lo = 0.0;
    double hi = 0.0;
};

inline ExactLaw law_from_sweep(double T, Side side, double weight,
                               const std::vector<BranchImage>& images, double atom_left,
                               double atom_right) {
    struct Event {
        double pos;
        int delta;
    };
    std::vector<Event> events;
    events.reserve(images.size() * 2 + 2);
    events.push_back({0.0, 0});
    events.push_back({T, 0});
    for (const BranchImage& im : images) {
        double lo = std::clamp(im.lo, 0.0, T);
        double hi = std::clamp(im.hi, 0.0, T);
        if (!(lo < hi))
            continue;
        events.push_back({lo, +1});
        events.push_back({hi, -1});
    }
    std::sort(events.begin(), events.end(),
              [](const Event& a, const Event& b) { return a.pos < b.pos; });
    std::vector<LawPiece> pieces;
    long count = 0;
    double cursor = 0.0;
    std::size_t i = 0;
    while (i < events.size()) {
        // Cluster events within the cut tolerance into one position.
        const double pos = events[i].pos;
        long delta = 0;
        std::size_t j = i;
        while (j < events.size() && events[j].pos - pos <= kLawCutTol) {
            delta += events[j].delta;
            ++j;
        }
        if (pos > cursor) {
            const double d = double(count) * weight;
            if (!pieces.empty() && pieces.back().density == d)
                pieces.back().hi = pos;
            else
                pieces.push_back({cursor, pos, d});
            cursor = pos;
        }
        count += delta;
        i = j;
    }
    if (cursor < T) {
        const double d = double(count) * weight;
        if (!pieces.empty() && (pieces.back().density == d || T - cursor <= kLawCutTol))
            pieces.back().hi = T;
        else
            pieces.push_back({cursor, T, d});
    }
    std::vector<LawAtom> atoms;
    if (atom_left > 0.0)
        atoms.push_back({0.0, atom_left});
    if (atom_right > 0.0)
        atoms.push_back({T, atom_right});
    return ExactLaw(T, side, std::move(atoms), std::move(pieces));
}

// Occurrence of knot j inside [0, T] relevant for the given side, as a
// function of the phase u: position has slope -1 in u between wraps.
inline double occurrence_pos(double knot_t, double u, double period, double T, Side side) {
    if (side == Side::leftmost) {
        double off = std::fmod(knot_t - u, period);
        if (off < 0.0)
            off += period;
        if (off >= period)
            off = 0.0;
        return off; // present iff <= T
    }
    double off = std::fmod(T + u - knot_t, period);
    if (off < 0.0)
        off += period;
    if (off >= period)
        off = 0.0;
    return T - off; // present iff >= 0
}

// Cut positions on the phase circle [0, period) such that the identity of the
// window argmax (which knot occurrence, or which window endpoint) is constant
// between consecutive cuts. Includes every knot of u -> x(u) and u -> x(T+u)
// (also the wrap/presence boundaries of every occurrence) plus every crossing
// of the endpoint value functions with each other and with each knot value.
inline std::vector<double> phase_partition(const Waveform& w, double T) {
    const double p = w.period();
    std::vector<double> base;
    for (const Knot& k : w.knots()) {
        base.push_back(k.t);
        double s = std::fmod(k.t - T, p);
        if (s < 0.0)
            s += p;
        if (s >= p)
            s = 0.0;
        base.push_back(s);
    }
    base.push_back(0.0);
    std::sort(base.begin(), base.end());
    base.erase(std::unique(base.begin(), base.end(),
                           [](double a, double b) { return b - a <= kLawCutTol; }),
               base.end());
    std::vector<double> values;
    for (const Knot& k : w.knots())
        values.push_back(k.v);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());

    std::vector<double> cuts = base;
    auto add_crossing = [&](double a, double b, double fa, double fb, double target) {
        const double da = fa - target, db = fb - target;
        if (da == 0.0 || db == 0.0)
            return; // endpoint contact, already a cut
        if ((da < 0.0) == (db < 0.0))
            return;
        const double u = a + da * (b - a) / (da - db);
        if (u > a && u < b)
            cuts.push_back(u);
    };
    const std::size_t nb = base.size();
    for (std::size_t i = 0; i < nb; ++i) {
        const double a = base[i];
        const double b = i + 1 < nb ? base[i + 1] : p;
        if (!(b - a > kLawCutTol))
            continue;
        const double e0a = w.value(a), e0b = w.value(b);
        const double eTa = w.value(T + a), eTb = w.value(T + b);
        for (double c : values) {
            add_crossing(a, b, e0a, e0b, c);
            add_crossing(a, b, eTa, eTb, c);
        }
        // e0 = eT crossing
        const double da = e0a - eTa, db = e0b - eTb;
        if (da != 0.0 && db != 0.0 && (da < 0.0) != (db < 0.0)) {
            const double u = a + da * (b - a) / (da - db);
            if (u > a && u < b)
                cuts.push_back(u);
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double a, double b) { return b - a <= kLawCutTol; }),
               cuts.end());
    return cuts;
}

} // namespace detail

// Exact law of the window argmax location for the phase-shift model
// X(t) = x(t + U), U uniform on one period. Pushforward of the uniform phase:
// on each arc where one knot occurrence wins, tau moves with slope -1 and
// contributes density (1/period); arcs where a window endpoint wins become
// endpoint atoms.
inline ExactLaw exact_tau_law_phase(const Waveform& w, double T, Side side = Side::leftmost) {
    if (!(T > 0.0) || !std::isfinite(T))
        throw std::invalid_argument("window length must be positive and finite");
    if (w.is_constant())
        throw std::invalid_argument("constant waveform has no argmax law");
    const double p = w.period();
    const double vtol = phase_value_tol(w);
    const std::vector<double> cuts = detail::phase_partition(w, T);
    std::vector<detail::BranchImage> images;
    images.reserve(cuts.size());
    double atom_left = 0.0, atom_right = 0.0;
    const auto& knots = w.knots();
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        const double u1 = cuts[i];
        const double u2 = i + 1 < cuts.size() ? cuts[i + 1] : p;
        if (!(u2 - u1 > 0.0))
            continue;
        const double um = 0.5 * (u1 + u2);
        const double e0 = w.value(um);
        const double eT = w.value(T + um);
        // Best candidate: max value, side-extreme position on ties.
        double best = std::max(e0, eT);
        for (const Knot& k : knots) {
            const double pos = detail::occurrence_pos(k.t, um, p, T, side);
            if (pos >= 0.0 && pos <= T)
                best = std::max(best, k.v);
        }
        int winner = -1; // -1: left endpoint, -2: right endpoint, else knot index
        double wpos = 0.0;
        bool have = false;
        auto consider = [&](int id, double pos, double val) {
            if (val < best - vtol)
                return;
            if (!have || (side == Side::leftmost ? pos < wpos : pos > wpos)) {
                have = true;
                wpos = pos;
                winner = id;
            }
        };
        consider(-1, 0.0, e0);
        consider(-2, T, eT);
        for (std::size_t j = 0; j < knots.size(); ++j) {
            const double pos = detail::occurrence_pos(knots[j].t, um, p, T, side);
            if (pos >= 0.0 && pos <= T)
                consider(int(j), pos, knots[j].v);
        }
        const double len = u2 - u1;
        if (winner == -1) {
            atom_left += len / p;
        } else if (winner == -2) {
            atom_right += len / p;
        } else {
            // Position slope is -1 in u and continuous inside the arc.
            const double lo = wpos - (u2 - um);
            const double hi = wpos + (um - u1);
            images.push_back({lo, hi});
        }
    }
    return detail::law_from_sweep(T, side, 1.0 / p, images, atom_left, atom_right);
}

// Exact Assumption-U diagnostic for phase models: the argmax-candidate
// structure is constant between partition cuts, so positive-measure
// multiplicity must show at some arc midpoint.
inline bool assumption_u_holds(const Waveform& w, double T, double pos_tol = 1e-9) {
    if (!(T > 0.0))
        throw std::invalid_argument("window length must be positive");
    if (w.is_constant())
        return false;
    const double p = w.period();
    const std::vector<double> cuts = detail::phase_partition(w, T);
    const Window win{0.0, T};
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        const double u1 = cuts[i];
        const double u2 = i + 1 < cuts.size() ? cuts[i + 1] : p;
        if (!(u2 - u1 > 0.0))
            continue;
        if (detect_multiplicity(w, 0.5 * (u1 + u2), win, pos_tol))
            return false;
    }
    return true;
}

} // namespace suploc
