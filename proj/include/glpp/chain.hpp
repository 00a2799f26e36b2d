#ifndef GLPP_CHAIN_HPP
#define GLPP_CHAIN_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "glpp/bridges.hpp"
#include "glpp/common.hpp"
#include "glpp/density.hpp"
#include "glpp/measures.hpp"

namespace glpp {

// p_m^delta = mu_delta(1+m) / sum_{s>=1} mu_delta(s+m)
double flip_probability(long long m, long long delta, const MeasureFamily& fam);

// ---------------------------------------------------------------------------
// FrontChainState: the front line with edge ages plus enough geometry to name
// the lattice cell above each local maximum (used by the shared-draw harness
// and by the growth coupling).  heights[] are the boundary corner heights of
// the arrived region; cell (x, y) above max pair (j, j+1) has x = j+1 mod 2L,
// y = heights[j+1] + 1.
// ---------------------------------------------------------------------------

struct FrontChainState {
    TimedBridge timed;
    std::vector<long long> heights;  // corner heights, size 2L
    long long clock = 0;

    static FrontChainState initial(int L);  // alternating bridge, zero ages
    int L() const { return timed.bridge.L(); }
};

// decides whether the cell above a maximum arrives this step; the default
// implementation draws Bernoulli(p_m^delta), the harness implementation
// resolves the cell's one uniform through the inverse cdf
struct FlipDecider {
    virtual ~FlipDecider() = default;
    virtual bool flip(int pair_pos, long long m, long long delta,
                      long long cell_x, long long cell_y) = 0;
};

struct RandomFlipDecider final : FlipDecider {
    const MeasureFamily& fam;
    Rng& rng;
    RandomFlipDecider(const MeasureFamily& f, Rng& r) : fam(f), rng(r) {}
    bool flip(int, long long m, long long delta, long long, long long) override {
        return uniform01(rng) < flip_probability(m, delta, fam);
    }
};

// counter-based: the cell's waiting time is xi = F_delta^{-1}(u(cell)); the
// maximum flips exactly when xi == m+1
struct SharedDrawDecider final : FlipDecider {
    const MeasureFamily& fam;
    std::uint64_t seed;
    SharedDrawDecider(const MeasureFamily& f, std::uint64_t s) : fam(f), seed(s) {}
    bool flip(int, long long m, long long delta, long long cell_x, long long cell_y) override {
        double u = cell_uniform(seed, cell_x, cell_y);
        return fam.at(static_cast<int>(delta)).sample(u) == m + 1;
    }
};

// one synchronous step of the front-line dynamics
void step_discrete(FrontChainState& state, FlipDecider& decider);
// convenience overload drawing from fam with rng
void step_discrete(FrontChainState& state, const MeasureFamily& fam, Rng& rng);

// exact one-step transition probability between two timed bridges
double transition_prob(const TimedBridge& from, const TimedBridge& to,
                       const MeasureFamily& fam);

// ---------------------------------------------------------------------------
// Trajectories and estimators
// ---------------------------------------------------------------------------

struct SpeedEstimate {
    double c_from_ages = 0.0;    // 1 / (2 E[T1] + 1)
    double se_ages = 0.0;
    double c_from_growth = 0.0;  // fraction of steps with t1 == 0 (height rate)
    double se_growth = 0.0;
    bool agree_3sigma = false;
};

struct Trajectory {
    int L = 0;
    std::uint64_t seed = 0;
    long long steps = 0;
    long long burn_in = 0;
    std::map<std::string, long long> bridge_counts;
    double sum_t1 = 0.0, sum_t1_sq = 0.0;
    long long zero_t1 = 0;
    long long samples = 0;
    long long flips = 0;
    std::vector<double> t1_batches_mean;   // batch means of t1
    std::vector<double> zero_batches;      // batch means of 1{t1==0}
    std::vector<std::string> csv_rows;     // optional full log

    double mean_t1() const { return samples ? sum_t1 / samples : 0.0; }
    SpeedEstimate speed() const;
    std::string summary_json(const std::string& family_label) const;
};

struct SimulateOptions {
    bool log_csv = false;
    int batches = 64;
};

Trajectory simulate_discrete(int L, const MeasureFamily& fam, long long steps,
                             long long burn_in, std::uint64_t seed,
                             const SimulateOptions& opts = {});

SpeedEstimate estimate_speed(const Trajectory& traj);

// ---------------------------------------------------------------------------
// Continuous time: event-driven jump process.  When a maximum forms (the
// later of its two faces arrives) the absolute waiting time is drawn once
// from f(delta, .) and the flip is scheduled; between events ages grow
// linearly.  Equivalent in law to the hazard dynamics beta_m^delta.
// ---------------------------------------------------------------------------

struct TrajectoryC {
    int L = 0;
    std::uint64_t seed = 0;
    double horizon = 0.0;
    std::map<std::string, double> occupancy;       // time-weighted bridge visits
    std::vector<double> age_samples;               // t1 sampled on a unit grid
    std::vector<std::string> bridge_samples;       // bridge sampled every 5 units
    long long events = 0;
    double max_events_per_unit = 0.0;

    std::string summary_json(const std::string& family_label) const;
};

struct SimulateContOptions {
    double sample_dt = 1.0;
    double bridge_sample_dt = 5.0;
    long long event_budget = 50'000'000;
    bool require_certificate = true;   // Cond 5 checked unless overridden
};

TrajectoryC simulate_continuous(int L, const DensityFamily& fam, double horizon,
                                std::uint64_t seed, const SimulateContOptions& opts = {});

}  // namespace glpp

#endif
