#ifndef GLPP_COMMON_HPP
#define GLPP_COMMON_HPP

#include <cstdint>
#include <cmath>
#include <stdexcept>
#include <string>
#include <random>

namespace glpp {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define GLPP_DEFINE_ERROR(Name)                                        \
    struct Name : Error {                                              \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    }

GLPP_DEFINE_ERROR(ConfigError);
GLPP_DEFINE_ERROR(DivergentSqrtSum);
GLPP_DEFINE_ERROR(TailUnderflow);
GLPP_DEFINE_ERROR(CapExceeded);
GLPP_DEFINE_ERROR(StateSpaceTooLarge);
GLPP_DEFINE_ERROR(NotMaterialized);
GLPP_DEFINE_ERROR(ParityViolation);
GLPP_DEFINE_ERROR(QuadratureFailure);
GLPP_DEFINE_ERROR(TruncationNotConverged);
GLPP_DEFINE_ERROR(EventBudgetExceeded);
GLPP_DEFINE_ERROR(ExcessLeak);
GLPP_DEFINE_ERROR(NoConvergence);
GLPP_DEFINE_ERROR(SupportMismatch);
GLPP_DEFINE_ERROR(EmptyGrid);
GLPP_DEFINE_ERROR(InsufficientSamples);
GLPP_DEFINE_ERROR(BoxExhausted);

#undef GLPP_DEFINE_ERROR

// ---------------------------------------------------------------------------
// A scalar together with a certified (or conservatively estimated) error bound.
// ---------------------------------------------------------------------------

struct Bounded {
    double value = 0.0;
    double bound = 0.0;  // |true - value| <= bound

    double lo() const { return value - bound; }
    double hi() const { return value + bound; }
    bool overlaps(const Bounded& o) const {
        return lo() <= o.hi() && o.lo() <= hi();
    }
};

// ---------------------------------------------------------------------------
// Compensated (Kahan) accumulator
// ---------------------------------------------------------------------------

class KahanSum {
    double sum_ = 0.0, c_ = 0.0;
public:
    void add(double x) {
        double y = x - c_;
        double t = sum_ + y;
        c_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }
    KahanSum& operator+=(double x) { add(x); return *this; }
};

// ---------------------------------------------------------------------------
// Randomness.  Simulations use a seeded mt19937_64; the cross-module coupling
// harness uses counter-based draws keyed by lattice cell so that chain, growth
// and PCA can consume the identical uniform for the identical cell.
// ---------------------------------------------------------------------------

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// uniform in (0,1), never exactly 0 or 1
inline double cell_uniform(std::uint64_t seed, std::int64_t x, std::int64_t y) {
    std::uint64_t h = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(x) + 0x7fffffffULL));
    h = splitmix64(h ^ splitmix64(static_cast<std::uint64_t>(y) + 0x3fffffffULL));
    return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
}

inline double uniform01(Rng& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace glpp

#endif
