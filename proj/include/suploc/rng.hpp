#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace suploc {

struct RngSpec {
    std::uint64_t seed = 0;
};

// One stream per (seed, path_index). mt19937_64 seeded through seed_seq is
// fully pinned by the standard, and all variate transforms below are explicit,
// so a path's draws depend on nothing but (seed, path_index) and draw order.
class RandomStream {
  public:
    RandomStream(std::uint64_t seed, std::uint64_t path_index) {
        std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32),
                          std::uint32_t(path_index), std::uint32_t(path_index >> 32)};
        eng_.seed(seq);
    }

    // Uniform on [0, 1), 53 random bits.
    double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1]; safe under log().
    double uniform_pos() { return (double(eng_() >> 11) + 1.0) * 0x1.0p-53; }

    double uniform_on(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller; consumes two uniforms per pair, second value cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
        const double a = 2.0 * pi() * uniform();
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Density x*exp(-x^2/2) on x > 0 (so E X^2 = 2); inverse-CDF transform.
    double rayleigh() { return std::sqrt(-2.0 * std::log(uniform_pos())); }

    static constexpr double pi() { return 3.14159265358979323846; }

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace suploc
