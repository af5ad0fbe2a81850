#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "suploc/bounds.hpp"
#include "suploc/estimate.hpp"
#include "suploc/exact_law.hpp"
#include "suploc/variation.hpp"

namespace suploc {

// One verified inequality lhs <= rhs (slack = rhs - lhs). Exact checks run
// with tolerance 1e-10 against floating-point noise; statistical checks
// compare CI edges and use tolerance 0.
struct CheckReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    bool skipped = false;
    bool statistical = false;
    std::string note;
};

inline constexpr double kExactCheckTol = 1e-10;

namespace detail {

inline CheckReport make_check(std::string name, double lhs, double rhs, double tol,
                              bool statistical = false, std::string note = "") {
    CheckReport r;
    r.name = std::move(name);
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = rhs - lhs;
    r.tolerance = tol;
    r.pass = r.slack >= -tol;
    r.statistical = statistical;
    r.note = std::move(note);
    return r;
}

inline std::string fmt_pt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

} // namespace detail

// min(f(t), f(t-)): the density bound a variation inequality charges at an
// interior endpoint.
inline double min_onesided_density(const ExactLaw& law, double t) {
    return std::min(law.density(t), law.density_left(t));
}

// Density bounds and variation inequalities for an exact law:
//   b: f <= max(1/t, 1/(T-t)) pointwise (checked per piece at the piece's
//      infimum of the bound, which is exact for piecewise-constant f);
//   c: inf f > 0, asserted only when the unique-argmax assumption holds;
//   d: TV over (t1,t2) <= min(f(t1),f(t1-)) + min(f(t2),f(t2-));
//   e: one-sided variations near the endpoints;
//   f: two-sided variation near the endpoints charged against f(0+) / f(T-).
inline std::vector<CheckReport> check_density_bounds(const ExactLaw& law, bool assumption_u,
                                                     const std::vector<std::pair<double, double>>& pairs,
                                                     const std::vector<double>& epsilons) {
    std::vector<CheckReport> out;
    const double T = law.T();

    // (b) worst piece against the pointwise upper bound
    {
        double worst_slack = INFINITY;
        double wl = 0.0, wr = 0.0;
        std::string where;
        for (const LawPiece& pc : law.pieces()) {
            const double tstar = std::clamp(T / 2.0, pc.lo, pc.hi);
            const double lo_bound =
                (tstar > 0.0 && tstar < T) ? general_bound(tstar, T) : INFINITY;
            const double slack = lo_bound - pc.density;
            if (slack < worst_slack) {
                worst_slack = slack;
                wl = pc.density;
                wr = lo_bound;
                where = "piece [" + detail::fmt_pt(pc.lo) + ", " + detail::fmt_pt(pc.hi) + ")";
            }
        }
        out.push_back(detail::make_check("density-upper-bound", wl, wr, kExactCheckTol, false,
                                         "worst " + where));
    }

    // (c) strictly positive infimum, needs unique argmax
    {
        double inf_d = INFINITY;
        for (const LawPiece& pc : law.pieces())
            inf_d = std::min(inf_d, pc.density);
        CheckReport r = detail::make_check("density-positive-infimum", 0.0, inf_d, 0.0);
        r.pass = inf_d > 0.0;
        if (!assumption_u) {
            r.skipped = true;
            r.pass = true;
            r.note = "argmax not a.s. unique; positivity not implied";
        } else {
            r.note = "infimum over (0, T)";
        }
        out.push_back(r);
    }

    for (const auto& [t1, t2] : pairs) {
        const double lhs = tv(law, t1, t2).total;
        const double rhs = min_onesided_density(law, t1) + min_onesided_density(law, t2);
        out.push_back(detail::make_check("variation-pair(" + detail::fmt_pt(t1) + "," +
                                             detail::fmt_pt(t2) + ")",
                                         lhs, rhs, kExactCheckTol));
    }

    for (double eps : epsilons) {
        {
            const double lhs = tv(law, 0.0, eps).positive;
            const double rhs = min_onesided_density(law, eps);
            out.push_back(detail::make_check("variation-up-left(" + detail::fmt_pt(eps) + ")",
                                             lhs, rhs, kExactCheckTol));
        }
        {
            const double lhs = tv(law, T - eps, T).negative;
            const double rhs = min_onesided_density(law, T - eps);
            out.push_back(detail::make_check("variation-down-right(" + detail::fmt_pt(eps) + ")",
                                             lhs, rhs, kExactCheckTol));
        }
        {
            const double lhs = tv(law, 0.0, eps).total;
            const double rhs = law.f0() + min_onesided_density(law, eps);
            out.push_back(detail::make_check("variation-budget-left(" + detail::fmt_pt(eps) + ")",
                                             lhs, rhs, kExactCheckTol));
        }
        {
            const double lhs = tv(law, T - eps, T).total;
            const double rhs = min_onesided_density(law, T - eps) + law.fT();
            out.push_back(detail::make_check("variation-budget-right(" + detail::fmt_pt(eps) + ")",
                                             lhs, rhs, kExactCheckTol));
        }
    }
    return out;
}

// Total variation over all of (0, T) against the endpoint density limits.
inline CheckReport check_total_variation_budget(const ExactLaw& law) {
    const double lhs = tv(law, 0.0, law.T()).total;
    const double rhs = law.f0() + law.fT();
    return detail::make_check("total-variation-budget", lhs, rhs, kExactCheckTol);
}

// Window shrink comparison between the laws on [0, T] and [0, T - delta_cap]:
// pointwise f_small(t) >= f_big(t + delta) a.e., plus the integral form with
// margins eps1, eps2.
struct WindowShrinkParams {
    double delta_cap = 0.0; // Delta: how much shorter the small window is
    double delta = 0.0;     // shift, 0 <= delta <= delta_cap
    double eps1 = 0.0;
    double eps2 = 0.0;
};

inline std::vector<CheckReport> check_window_shrink(const ExactLaw& law_big,
                                                    const ExactLaw& law_small,
                                                    const WindowShrinkParams& prm) {
    const double T = law_big.T();
    const double S = law_small.T();
    if (std::fabs((T - prm.delta_cap) - S) > 1e-9)
        throw std::invalid_argument("window shrink: small law must cover T - delta_cap");
    if (!(prm.delta >= 0.0) || !(prm.delta <= prm.delta_cap))
        throw std::invalid_argument("window shrink needs 0 <= delta <= delta_cap");
    if (!(prm.eps1 >= 0.0) || !(prm.eps2 >= 0.0) || !(prm.eps1 + prm.eps2 < S))
        throw std::invalid_argument("window shrink needs eps1, eps2 >= 0 with eps1 + eps2 < S");
    std::vector<CheckReport> out;

    // Pointwise at midpoints of the common refinement of both break sets.
    {
        std::vector<double> cuts{0.0, S};
        for (double b : law_small.breakpoints_in(0.0, S))
            cuts.push_back(b);
        for (std::size_t i = 1; i < law_big.pieces().size(); ++i) {
            const double b = law_big.pieces()[i].lo - prm.delta;
            if (b > 0.0 && b < S)
                cuts.push_back(b);
        }
        std::sort(cuts.begin(), cuts.end());
        double worst = -INFINITY; // max over t of f_big(t + delta) - f_small(t)
        double at = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            if (!(cuts[i + 1] - cuts[i] > kLawCutTol))
                continue;
            const double t = 0.5 * (cuts[i] + cuts[i + 1]);
            const double gap = law_big.density(t + prm.delta) - law_small.density(t);
            if (gap > worst) {
                worst = gap;
                at = t;
            }
        }
        out.push_back(detail::make_check("shrink-pointwise", worst, 0.0, kExactCheckTol, false,
                                         "worst at t = " + detail::fmt_pt(at)));
    }

    // Integral form: excess mass of the short window over [eps1, S - eps2] is
    // paid for by two delta-wide slices of the long-window density.
    {
        const double a = prm.eps1;
        const double b = S - prm.eps2;
        const double lhs = law_small.interval_mass(a, b, false) -
                           law_big.interval_mass(a + prm.delta, b + prm.delta, false);
        const double rhs = law_big.interval_mass(a, a + prm.delta, false) +
                           law_big.interval_mass(b + prm.delta, b + prm.delta_cap... 0.0, false);
        out.push_back(detail::make_check("shrink-integral", lhs, rhs, kExactCheckTol));
    }
    return out;
}

// F_big([a,b] window)(B) <= F_small([c,d] window)(B) for probe sets B inside
// the smaller window; both laws arrive in window-relative coordinates.
struct WindowPair {
    double big_a = 0.0, big_b = 0.0;
    double small_c = 0.0, small_d = 0.0;
};

inline std::vector<CheckReport> check_window_monotonicity(const ExactLaw& law_big,
                                                          const ExactLaw& law_small,
                                                          const WindowPair& wp,
                                                          const std::vector<std::pair<double, double>>& probes) {
    if (!(wp.big_a <= wp.small_c) || !(wp.small_d <= wp.big_b) || !(wp.small_c < wp.small_d))
        throw std::invalid_argument("window monotonicity needs [c,d] inside [a,b]");
    if (std::fabs(law_big.T() - (wp.big_b - wp.big_a)) > 1e-9 ||
        std::fabs(law_small.T() - (wp.small_d - wp.small_c)) > 1e-9)
        throw std::invalid_argument("law window lengths must match the window pair");
    std::vector<CheckReport> out;
    for (const auto& [blo, bhi] : probes) {
        if (!(wp.small_c <= blo) || !(blo <= bhi) || !(bhi <= wp.small_d))
            throw std::invalid_argument("probe interval must sit inside the small window");
        const double lhs = law_big.interval_mass(blo - wp.big_a, bhi - wp.big_a);
        const double rhs = law_small.interval_mass(blo - wp.small_c, bhi - wp.small_c);
        out.push_back(detail::make_check("window-monotonicity[" + detail::fmt_pt(blo) + "," +
                                             detail::fmt_pt(bhi) + "]",
                                         lhs, rhs, kExactCheckTol));
    }
    return out;
}

enum class BoundKind { general, symmetric };

// Statistical variant: per-bin CI lower mass against the integrated bound.
// Bins touching an endpoint integrate the bound to infinity and pass.
inline std::vector<CheckReport> check_bound_estimate(const DensityEstimate& est, BoundKind kind) {
    std::vector<CheckReport> out;
    out.reserve(est.bins.size());
    for (const DensityBin& b : est.bins) {
        const double bound = kind == BoundKind::general
                                 ? integrate_general_bound(b.lo, b.hi, est.T)
                                 : integrate_symmetric_bound(b.lo, b.hi, est.T);
        out.push_back(detail::make_check((kind == BoundKind::general ? "bin-mass-general["
                                                                     : "bin-mass-symmetric[") +
                                             detail::fmt_pt(b.lo) + "," + detail::fmt_pt(b.hi) +
                                             ")",
                                         b.ci_lo, bound, 0.0, true));
    }
    return out;
}

inline bool all_pass(const std::vector<CheckReport>& reports) {
    for (const CheckReport& r : reports)
        if (!r.pass && !r.skipped)
            return false;
    return true;
}

} // namespace suploc
