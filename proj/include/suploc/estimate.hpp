#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "suploc/argmax.hpp"
#include "suploc/exact_law.hpp"
#include "suploc/models.hpp"
#include "suploc/rng.hpp"
#include "suploc/waveform.hpp"

namespace suploc {

struct BinomialCi {
    double lo = 0.0;
    double hi = 1.0;
};

// Exact (Clopper-Pearson) two-sided binomial confidence interval via Beta
// quantiles. count == 0 pins lo to 0, count == n pins hi to 1.
inline BinomialCi clopper_pearson(std::uint64_t count, std::uint64_t n, double level) {
    if (n == 0)
        throw std::invalid_argument("clopper_pearson needs n >= 1");
    if (count > n)
        throw std::invalid_argument("clopper_pearson needs count <= n");
    if (!(level > 0.0) || !(level < 1.0))
        throw std::invalid_argument("confidence level must be in (0, 1)");
    const double alpha = 1.0 - level;
    BinomialCi ci;
    if (count == 0)
        ci.lo = 0.0;
    else
        ci.lo = boost::math::ibeta_inv(double(count), double(n - count + 1), alpha / 2.0);
    if (count == n)
        ci.hi = 1.0;
    else
        ci.hi = boost::math::ibeta_inv(double(count + 1), double(n - count), 1.0 - alpha / 2.0);
    return ci;
}

struct KsResult {
    std::uint64_t n = 0;
    double statistic = 0.0;
    // Asymptotic critical value c(level)/sqrt(n), c = sqrt(-ln(level/2)/2).
    double critical(double level = 0.01) const {
        return std::sqrt(-0.5 * std::log(level / 2.0)) / std::sqrt(double(n));
    }
    bool pass(double level = 0.01) const { return statistic <= critical(level); }
};

// One-sample Kolmogorov-Smirnov statistic against Uniform(0, T).
inline KsResult ks_uniform(std::vector<double> taus, double T) {
    if (taus.empty())
        throw std::invalid_argument("ks_uniform needs a nonempty sample");
    if (!(T > 0.0))
        throw std::invalid_argument("ks_uniform needs T > 0");
    for (double t : taus)
        if (!(t >= 0.0) || !(t <= T))
            throw std::invalid_argument("ks_uniform sample value outside [0, T]");
    std::sort(taus.begin(), taus.end());
    const std::uint64_t n = taus.size();
    double d = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        const double f = taus[i] / T;
        d = std::max(d, std::max(double(i + 1) / double(n) - f, f - double(i) / double(n)));
    }
    KsResult r;
    r.n = n;
    r.statistic = d;
    return r;
}

struct DensityBin {
    double lo = 0.0;
    double hi = 0.0;
    std::uint64_t count = 0;
    double p_hat = 0.0; // bin mass, not density
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

// Histogram of argmax locations with endpoint atoms split out. Equal-width
// bins tile (0, T); taus within atom_tol of an endpoint count as atoms
// (atom_tol 0 means exact endpoint hits only). Bin counts plus atom counts
// always total n.
struct DensityEstimate {
    double T = 0.0;
    std::uint64_t n = 0;
    double ci_level = 0.99;
    double atom_tol = 0.0;
    std::uint64_t atom_left_count = 0;
    std::uint64_t atom_right_count = 0;
    BinomialCi atom_left_ci;
    BinomialCi atom_right_ci;
    std::vector<DensityBin> bins;

    double bin_width() const { return T / double(bins.size()); }
};

inline DensityEstimate make_histogram(const std::vector<double>& taus, double T,
                                      std::size_t bin_count, double atom_tol = 0.0,
                                      double ci_level = 0.99) {
    if (taus.empty())
        throw std::invalid_argument("histogram needs at least one sample");
    if (!(T > 0.0) || bin_count == 0)
        throw std::invalid_argument("histogram needs T > 0 and bin_count >= 1");
    if (atom_tol < 0.0 || atom_tol >= T / 2.0)
        throw std::invalid_argument("atom_tol must be in [0, T/2)");
    DensityEstimate est;
    est.T = T;
    est.n = taus.size();
    est.ci_level = ci_level;
    est.atom_tol = atom_tol;
    est.bins.resize(bin_count);
    const double w = T / double(bin_count);
    for (std::size_t i = 0; i < bin_count; ++i) {
        est.bins[i].lo = double(i) * w;
        est.bins[i].hi = (i + 1 == bin_count) ? T : double(i + 1) * w;
    }
    for (double t : taus) {
        if (!(t >= 0.0) || !(t <= T))
            throw std::invalid_argument("argmax sample outside [0, T]");
        if (t <= atom_tol) {
            ++est.atom_left_count;
        } else if (T - t <= atom_tol) {
            ++est.atom_right_count;
        } else {
            std::size_t i = std::size_t(t / w);
            if (i >= bin_count)
                i = bin_count - 1;
            ++est.bins[i].count;
        }
    }
    for (DensityBin& b : est.bins) {
        b.p_hat = double(b.count) / double(est.n);
        const BinomialCi ci = clopper_pearson(b.count, est.n, ci_level);
        b.ci_lo = ci.lo;
        b.ci_hi = ci.hi;
    }
    est.atom_left_ci = clopper_pearson(est.atom_left_count, est.n, ci_level);
    est.atom_right_ci = clopper_pearson(est.atom_right_count, est.n, ci_level);
    return est;
}

namespace detail {

// Static index partition; results land by path index, so the outcome does not
// depend on the thread count or schedule.
inline void parallel_paths(std::uint64_t n, int threads,
                           const std::function<void(std::uint64_t, std::uint64_t)>& run_range) {
    int workers = threads;
    if (workers <= 0)
        workers = int(std::thread::hardware_concurrency());
    if (workers < 1)
        workers = 1;
    if (std::uint64_t(workers) > n)
        workers = int(n);
    if (workers == 1) {
        run_range(0, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(workers));
    for (int wkr = 0; wkr < workers; ++wkr) {
        const std::uint64_t lo = n * std::uint64_t(wkr) / std::uint64_t(workers);
        const std::uint64_t hi = n * std::uint64_t(wkr + 1) / std::uint64_t(workers);
        pool.emplace_back([=, &run_range] { run_range(lo, hi); });
    }
    for (std::thread& th : pool)
        th.join();
}

} // namespace detail

// Monte Carlo argmax locations for the phase-shift model; path i draws its
// phase from stream (seed, i) and the argmax is exact.
inline std::vector<double> mc_tau_phase(const Waveform& w, double T, std::uint64_t n,
                                        const RngSpec& rng, Side side = Side::leftmost,
                                        int threads = 1) {
    if (n == 0)
        throw std::invalid_argument("sample size must be >= 1");
    std::vector<double> taus(n);
    const Window win{0.0, T};
    detail::parallel_paths(n, threads, [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t i = lo; i < hi; ++i) {
            RandomStream s(rng.seed, i);
            const double u = s.uniform_on(0.0, w.period());
            taus[i] = exact_phase_argmax(w, u, win, side).tau;
        }
    });
    return taus;
}

inline std::vector<double> mc_tau_two_wave(const TwoWaveModel& m, double T, std::uint64_t n,
                                           const RngSpec& rng, int threads = 1) {
    if (n == 0)
        throw std::invalid_argument("sample size must be >= 1");
    std::vector<double> taus(n);
    detail::parallel_paths(n, threads, [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t i = lo; i < hi; ++i) {
            const TwoWaveCoefficients c = sample_two_wave(m, rng, i);
            taus[i] = two_wave_argmax(m, c, T).tau;
        }
    });
    return taus;
}

inline std::vector<double> mc_tau_ou(const OuGrid& grid, std::uint64_t n, const RngSpec& rng,
                                     int threads = 1) {
    if (n == 0)
        throw std::invalid_argument("sample size must be >= 1");
    std::vector<double> taus(n);
    detail::parallel_paths(n, threads, [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t i = lo; i < hi; ++i) {
            RandomStream s(rng.seed, i);
            taus[i] = ou_tau(grid, s).tau;
        }
    });
    return taus;
}

struct RateEstimate {
    double rate = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

// MC estimate of P(path has a grid local max in (0, eps)) / eps.
inline RateEstimate mc_local_max_rate_ou(double grid_step, double eps, std::uint64_t n,
                                         const RngSpec& rng, double ci_level = 0.99,
                                         int threads = 1) {
    if (!(eps > 2.0 * grid_step))
        throw std::invalid_argument("eps must exceed two grid steps");
    const OuGrid grid = make_ou_grid(eps, grid_step);
    std::vector<std::uint8_t> hit(n, 0);
    detail::parallel_paths(n, threads, [&](std::uint64_t lo, std::uint64_t hi) {
        std::vector<double> path;
        for (std::uint64_t i = lo; i < hi; ++i) {
            RandomStream s(rng.seed, i);
            simulate_ou(grid, s, path);
            for (std::size_t j = 1; j + 1 < path.size(); ++j) {
                if (path[j] > path[j - 1] && path[j] > path[j + 1]) {
                    hit[i] = 1;
                    break;
                }
            }
        }
    });
    std::uint64_t count = 0;
    for (std::uint8_t h : hit)
        count += h;
    const BinomialCi ci = clopper_pearson(count, n, ci_level);
    return {double(count) / double(n) / eps, ci.lo / eps, ci.hi / eps};
}

inline RateEstimate mc_local_max_rate_two_wave(const TwoWaveModel& m, double grid_step,
                                               double eps, std::uint64_t n, const RngSpec& rng,
                                               double ci_level = 0.99, int threads = 1) {
    if (!(eps > 2.0 * grid_step))
        throw std::invalid_argument("eps must exceed two grid steps");
    const std::size_t pts = std::size_t(std::ceil(eps / grid_step)) + 1;
    std::vector<std::uint8_t> hit(n, 0);
    detail::parallel_paths(n, threads, [&](std::uint64_t lo, std::uint64_t hi) {
        std::vector<double> path(pts);
        const double h = eps / double(pts - 1);
        for (std::uint64_t i = lo; i < hi; ++i) {
            const TwoWaveCoefficients c = sample_two_wave(m, rng, i);
            for (std::size_t j = 0; j < pts; ++j)
                path[j] = two_wave_value(m, c, double(j) * h);
            for (std::size_t j = 1; j + 1 < pts; ++j) {
                if (path[j] > path[j - 1] && path[j] > path[j + 1]) {
                    hit[i] = 1;
                    break;
                }
            }
        }
    });
    std::uint64_t count = 0;
    for (std::uint8_t h : hit)
        count += h;
    const BinomialCi ci = clopper_pearson(count, n, ci_level);
    return {double(count) / double(n) / eps, ci.lo / eps, ci.hi / eps};
}

} // namespace suploc
