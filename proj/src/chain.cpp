#include "glpp/chain.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include "glpp/stats.hpp"

namespace glpp {

double flip_probability(long long m, long long delta, const MeasureFamily& fam) {
    const DiscreteMeasure& mu = fam.at(static_cast<int>(delta));
    double t = mu.tail(static_cast<int>(m) + 1);
    if (t < 1e-300)
        throw TailUnderflow("survival mass underflow at m=" + std::to_string(m) +
                            " delta=" + std::to_string(delta));
    return mu(static_cast<int>(m) + 1) / t;
}

FrontChainState FrontChainState::initial(int L) {
    FrontChainState s;
    s.timed.bridge = Bridge::alternating(L);
    s.timed.ages.assign(2 * L, 0);
    s.heights.resize(2 * L);
    for (int x = 0; x < 2 * L; ++x) s.heights[x] = (x % 2 == 0) ? 1 : 0;
    return s;
}

void step_discrete(FrontChainState& state, FlipDecider& decider) {
    Bridge& b = state.timed.bridge;
    std::vector<long long>& t = state.timed.ages;
    const int n = b.size();
    // collect maxima first; flips are resolved against the pre-step state
    std::vector<int> flips;
    for (int j = 0; j < n; ++j) {
        if (b.pair_type(j) != PairType::Max) continue;
        int j1 = b.mod(j + 1);
        long long m = std::min(t[j], t[j1]);
        long long delta = std::llabs(t[j] - t[j1]);
        long long cx = b.mod(j + 1);  // corner between edges j and j+1
        long long cy = state.heights[j1] + 1;
        if (decider.flip(j, m, delta, cx, cy)) flips.push_back(j);
    }
    std::vector<int8_t> steps(b.steps());
    for (int j = 0; j < n; ++j) t[j] += 1;
    for (int j : flips) {
        int j1 = b.mod(j + 1);
        steps[j] = -1;
        steps[j1] = 1;
        t[j] = 0;
        t[j1] = 0;
        state.heights[j1] += 2;
    }
    b = Bridge(std::move(steps));
    state.clock += 1;
}

void step_discrete(FrontChainState& state, const MeasureFamily& fam, Rng& rng) {
    RandomFlipDecider d(fam, rng);
    step_discrete(state, d);
}

double transition_prob(const TimedBridge& from, const TimedBridge& to,
                       const MeasureFamily& fam) {
    if (!validate_timed(from.bridge, from.ages) || !validate_timed(to.bridge, to.ages))
        throw ConfigError("transition_prob needs valid timed bridges");
    const Bridge& b = from.bridge;
    const int n = b.size();
    if (to.bridge.size() != n) throw ConfigError("size mismatch");
    // identify the flipped set from `to`: flipped pairs have ages (0,0) and
    // inverted signs; everything else must have aged by one
    double prob = 1.0;
    std::vector<bool> consumed(n, false);
    for (int j = 0; j < n; ++j) {
        if (b.pair_type(j) != PairType::Max) continue;
        int j1 = b.mod(j + 1);
        long long m = std::min(from.ages[j], from.ages[j1]);
        long long delta = std::llabs(from.ages[j] - from.ages[j1]);
        double p = flip_probability(m, delta, fam);
        bool flipped = to.bridge.step(j) == -1 && to.bridge.step(j1) == 1 &&
                       to.ages[j] == 0 && to.ages[j1] == 0;
        bool unflipped = to.bridge.step(j) == 1 && to.bridge.step(j1) == -1 &&
                         to.ages[j] == from.ages[j] + 1 && to.ages[j1] == from.ages[j1] + 1;
        if (flipped) {
            prob *= p;
            consumed[j] = consumed[j1] = true;
        } else if (unflipped) {
            prob *= 1.0 - p;
            consumed[j] = consumed[j1] = true;
        } else {
            return 0.0;
        }
    }
    for (int j = 0; j < n; ++j) {
        if (consumed[j]) continue;
        if (to.bridge.step(j) != b.step(j) || to.ages[j] != from.ages[j] + 1) return 0.0;
    }
    return prob;
}

// ---------------------------------------------------------------------------
// Discrete simulation
// ---------------------------------------------------------------------------

Trajectory simulate_discrete(int L, const MeasureFamily& fam, long long steps,
                             long long burn_in, std::uint64_t seed,
                             const SimulateOptions& opts) {
    if (steps <= burn_in || burn_in < 0)
        throw ConfigError("need steps > burn_in >= 0");
    Trajectory traj;
    traj.L = L;
    traj.seed = seed;
    traj.steps = steps;
    traj.burn_in = burn_in;
    Rng rng(seed);
    FrontChainState state = FrontChainState::initial(L);
    RandomFlipDecider decider(fam, rng);
    const long long n_meas = steps - burn_in;
    BatchMeans bm_t1(opts.batches), bm_zero(opts.batches);
    for (long long step = 0; step < steps; ++step) {
        step_discrete(state, decider);
        for (int i = 0; i < 2 * L; ++i)
            if (state.timed.ages[i] == 0) traj.flips += 1;  // two zero edges per flip
        if (step < burn_in) continue;
        long long t1 = state.timed.ages[0];
        traj.sum_t1 += static_cast<double>(t1);
        traj.sum_t1_sq += static_cast<double>(t1) * static_cast<double>(t1);
        traj.zero_t1 += (t1 == 0);
        traj.samples += 1;
        bm_t1.add(static_cast<double>(t1), step - burn_in, n_meas);
        bm_zero.add(t1 == 0 ? 1.0 : 0.0, step - burn_in, n_meas);
        traj.bridge_counts[state.timed.bridge.code()] += 1;
        if (opts.log_csv) {
            std::ostringstream os;
            os << state.clock << "," << state.timed.bridge.code();
            for (long long a : state.timed.ages) os << "," << a;
            traj.csv_rows.push_back(os.str());
        }
    }
    traj.flips /= 2;
    for (size_t i = 0; i < bm_t1.batches.size(); ++i) {
        if (bm_t1.counts[i] > 0) {
            traj.t1_batches_mean.push_back(bm_t1.batches[i] / bm_t1.counts[i]);
            traj.zero_batches.push_back(bm_zero.batches[i] / bm_zero.counts[i]);
        }
    }
    return traj;
}

SpeedEstimate Trajectory::speed() const {
    if (samples < 100) throw InsufficientSamples("trajectory too short for speed estimate");
    SpeedEstimate est;
    auto batch_se = [](const std::vector<double>& m) {
        if (m.size() < 2) return 0.0;
        double mu = 0.0;
        for (double v : m) mu += v;
        mu /= m.size();
        double var = 0.0;
        for (double v : m) var += (v - mu) * (v - mu);
        var /= (m.size() - 1);
        return std::sqrt(var / m.size());
    };
    double Et1 = mean_t1();
    double se_t1 = batch_se(t1_batches_mean);
    est.c_from_ages = 1.0 / (2.0 * Et1 + 1.0);
    est.se_ages = 2.0 * se_t1 / ((2.0 * Et1 + 1.0) * (2.0 * Et1 + 1.0));
    est.c_from_growth = static_cast<double>(zero_t1) / samples;
    est.se_growth = batch_se(zero_batches);
    double gap = std::abs(est.c_from_ages - est.c_from_growth);
    est.agree_3sigma = gap <= 3.0 * std::sqrt(est.se_ages * est.se_ages +
                                              est.se_growth * est.se_growth);
    return est;
}

SpeedEstimate estimate_speed(const Trajectory& traj) { return traj.speed(); }

std::string Trajectory::summary_json(const std::string& family_label) const {
    SpeedEstimate est = speed();
    std::ostringstream os;
    os.precision(12);
    os << "{\"L\":" << L << ",\"family\":\"" << family_label << "\",\"steps\":" << steps
       << ",\"burn_in\":" << burn_in << ",\"seed\":" << seed
       << ",\"E_T1\":" << mean_t1()
       << ",\"c_from_ages\":{\"value\":" << est.c_from_ages << ",\"se\":" << est.se_ages << "}"
       << ",\"c_from_growth\":{\"value\":" << est.c_from_growth << ",\"se\":" << est.se_growth << "}"
       << ",\"estimators_agree_3sigma\":" << (est.agree_3sigma ? "true" : "false")
       << ",\"flips\":" << flips << ",\"nu_empirical\":{";
    bool first = true;
    for (auto& [code, cnt] : bridge_counts) {
        os << (first ? "" : ",") << "\"" << code << "\":"
           << static_cast<double>(cnt) / samples;
        first = false;
    }
    os << "}}";
    return os.str();
}

// ---------------------------------------------------------------------------
// Continuous simulation
// ---------------------------------------------------------------------------

namespace {

struct FlipEvent {
    double time;
    int pair_pos;
    long long stamp;  // guards against superseded schedules
    bool operator>(const FlipEvent& o) const { return time > o.time; }
};

}  // namespace

TrajectoryC simulate_continuous(int L, const DensityFamily& fam, double horizon,
                                std::uint64_t seed, const SimulateContOptions& opts) {
    if (horizon <= 0.0) throw ConfigError("horizon must be positive");
    if (opts.require_certificate) {
        CertificateReport rep = check_noexplosion(fam, 0.1, 50.0);
        if (!rep.passed)
            throw EventBudgetExceeded("no-explosion certificate failed; pass override to force");
    }
    TrajectoryC traj;
    traj.L = L;
    traj.seed = seed;
    traj.horizon = horizon;
    Rng rng(seed);
    Bridge b = Bridge::alternating(L);
    const int n = 2 * L;
    std::vector<double> born(n, 0.0);     // age_i(t) = t - born[i]
    std::vector<long long> stamp(n, 0);   // bumped when an edge pair changes
    std::priority_queue<FlipEvent, std::vector<FlipEvent>, std::greater<FlipEvent>> queue;

    auto schedule = [&](int j, double now) {
        // maximum (j, j+1) formed at `now`; gap = |age_j - age_j1|
        int j1 = (j + 1) % n;
        double delta = std::abs((now - born[j]) - (now - born[j1]));
        double m = std::min(now - born[j], now - born[j1]);
        // the later face just arrived: one age is 0, the residual clock of the
        // cell above starts fresh with law f(delta, .)
        double u = uniform01(rng);
        double xi = fam.inv_cdf(delta, u);
        (void)m;
        queue.push({now + xi, j, stamp[j]});
    };
    for (int j = 0; j < n; ++j)
        if (b.pair_type(j) == PairType::Max) schedule(j, 0.0);

    double now = 0.0, last_sample = 0.0, last_bridge_sample = 0.0;
    double window_start = 0.0;
    long long window_events = 0;
    double prev = 0.0;
    while (!queue.empty()) {
        FlipEvent ev = queue.top();
        queue.pop();
        if (ev.stamp != stamp[ev.pair_pos]) continue;  // superseded
        if (ev.time > horizon) break;
        now = ev.time;
        // samples on fixed grids before applying the event
        while (last_sample + opts.sample_dt <= now) {
            last_sample += opts.sample_dt;
            traj.age_samples.push_back(last_sample - born[0]);
        }
        while (last_bridge_sample + opts.bridge_sample_dt <= now) {
            last_bridge_sample += opts.bridge_sample_dt;
            traj.bridge_samples.push_back(b.code());
        }
        traj.occupancy[b.code()] += now - prev;
        prev = now;
        // flip pair (j, j+1)
        int j = ev.pair_pos, j1 = (j + 1) % n;
        std::vector<int8_t> steps(b.steps());
        steps[j] = -1;
        steps[j1] = 1;
        b = Bridge(std::move(steps));
        born[j] = now;
        born[j1] = now;
        stamp[j] += 1;
        stamp[j1] += 1;
        traj.events += 1;
        window_events += 1;
        if (now - window_start >= 1.0) {
            traj.max_events_per_unit =
                std::max(traj.max_events_per_unit,
                         static_cast<double>(window_events) / (now - window_start));
            window_start = now;
            window_events = 0;
        }
        if (traj.events > opts.event_budget)
            throw EventBudgetExceeded("event budget exceeded at t=" + std::to_string(now));
        // new maxima formed by this flip
        int jm = (j - 1 + n) % n;
        if (b.step(jm) == 1 && b.step(j) == -1) schedule(jm, now);
        int jp = (j1 + 1) % n;
        if (b.step(j1) == 1 && b.step(jp) == -1) schedule(j1, now);
    }
    // drain sampling grids to the horizon
    while (last_sample + opts.sample_dt <= horizon) {
        last_sample += opts.sample_dt;
        traj.age_samples.push_back(last_sample - born[0]);
    }
    while (last_bridge_sample + opts.bridge_sample_dt <= horizon) {
        last_bridge_sample += opts.bridge_sample_dt;
        traj.bridge_samples.push_back(b.code());
    }
    traj.occupancy[b.code()] += horizon - prev;
    return traj;
}

std::string TrajectoryC::summary_json(const std::string& family_label) const {
    std::ostringstream os;
    os.precision(12);
    os << "{\"L\":" << L << ",\"family\":\"" << family_label << "\",\"horizon\":" << horizon
       << ",\"seed\":" << seed << ",\"events\":" << events
       << ",\"max_events_per_unit\":" << max_events_per_unit << ",\"occupancy\":{";
    double total = 0.0;
    for (auto& [k, v] : occupancy) total += v;
    bool first = true;
    for (auto& [k, v] : occupancy) {
        os << (first ? "" : ",") << "\"" << k << "\":" << v / total;
        first = false;
    }
    os << "}}";
    return os.str();
}

}  // namespace glpp
