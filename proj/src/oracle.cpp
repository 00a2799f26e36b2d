#include "glpp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace glpp {

TruncatedKernel truncated_transition_matrix(int L, const MeasureFamily& fam, int T_cap,
                                            ClosurePolicy policy) {
    TruncatedKernel k;
    k.L = L;
    k.T_cap = T_cap;
    k.policy = policy;
    k.states = enumerate_timed_truncated(L, T_cap);
    for (size_t i = 0; i < k.states.size(); ++i) k.index[k.states[i]] = static_cast<int>(i);
    k.row_ptr.push_back(0);
    k.row_leak.assign(k.states.size(), 0.0);

    for (size_t i = 0; i < k.states.size(); ++i) {
        const TimedBridge& from = k.states[i];
        const Bridge& b = from.bridge;
        const int n = b.size();
        std::vector<int> maxima;
        for (int j = 0; j < n; ++j)
            if (b.pair_type(j) == PairType::Max) maxima.push_back(j);
        const int nk = static_cast<int>(maxima.size());
        std::map<int, double> row;
        double leak = 0.0;
        for (int mask = 0; mask < (1 << nk); ++mask) {
            // build the successor for this flip subset, then price it through
            // transition_prob (the section-3.1 case analysis, not the exact
            // machinery)
            std::vector<int8_t> steps(b.steps());
            std::vector<long long> ages(from.ages);
            for (long long& a : ages) a += 1;
            for (int q = 0; q < nk; ++q) {
                int j = maxima[q], j1 = b.mod(j + 1);
                if (mask >> q & 1) {
                    steps[j] = -1;
                    steps[j1] = 1;
                    ages[j] = 0;
                    ages[j1] = 0;
                }
            }
            TimedBridge to{Bridge(std::move(steps)), std::move(ages)};
            double pr = transition_prob(from, to, fam);
            bool in_cap = true;
            for (long long a : to.ages)
                if (a > T_cap) in_cap = false;
            if (in_cap) {
                auto it = k.index.find(to);
                if (it == k.index.end())
                    throw StateSpaceTooLarge("successor missing from enumeration");
                row[it->second] += pr;
            } else if (policy == ClosurePolicy::ReflectToCap) {
                for (long long& a : to.ages) a = std::min<long long>(a, T_cap);
                // clamping can break strict ascent constraints; renormalize
                // such mass into the leak bucket instead
                if (validate_timed(to.bridge, to.ages)) {
                    auto it = k.index.find(to);
                    if (it != k.index.end()) {
                        row[it->second] += pr;
                        continue;
                    }
                }
                leak += pr;
            } else {
                leak += pr;
            }
        }
        k.row_leak[i] = leak;
        double kept = 0.0;
        for (auto& [j, p] : row) kept += p;
        if (kept <= 0.0) throw ExcessLeak("row fully out of cap");
        for (auto& [j, p] : row) {
            k.col.push_back(j);
            k.val.push_back(p / kept);
        }
        k.row_ptr.push_back(static_cast<int>(k.col.size()));
    }
    return k;
}

std::vector<double> power_iterate_stationary(const TruncatedKernel& k, double tol,
                                             long long max_iters, long long* iters_out) {
    const size_t n = k.states.size();
    std::vector<double> pi(n, 1.0 / static_cast<double>(n)), next(n, 0.0);
    for (long long it = 0; it < max_iters; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        for (size_t i = 0; i < n; ++i) {
            double p = pi[i];
            if (p == 0.0) continue;
            for (int e = k.row_ptr[i]; e < k.row_ptr[i + 1]; ++e)
                next[static_cast<size_t>(k.col[e])] += p * k.val[static_cast<size_t>(e)];
        }
        double mass = 0.0;
        for (double v : next) mass += v;
        for (double& v : next) v /= mass;
        double diff = 0.0;
        for (size_t i = 0; i < n; ++i) diff += std::abs(next[i] - pi[i]);
        pi.swap(next);
        if (diff <= tol) {
            if (iters_out) *iters_out = it + 1;
            return pi;
        }
    }
    throw NoConvergence("power iteration did not reach tol=" + std::to_string(tol) +
                        " in " + std::to_string(max_iters) + " iterations");
}

double stationary_leak(const TruncatedKernel& k, const std::vector<double>& pi) {
    double s = 0.0;
    for (size_t i = 0; i < pi.size(); ++i) s += pi[i] * k.row_leak[i];
    return s;
}

std::pair<std::vector<double>, std::vector<TimedBridge>> restrict_to_window(
    const std::vector<TimedBridge>& states, const std::vector<double>& p, long long window) {
    if (states.size() != p.size()) throw SupportMismatch("states/probability size mismatch");
    std::vector<double> q;
    std::vector<TimedBridge> kept;
    double mass = 0.0;
    for (size_t i = 0; i < states.size(); ++i) {
        long long mx = 0;
        for (long long a : states[i].ages) mx = std::max(mx, a);
        if (mx <= window) {
            kept.push_back(states[i]);
            q.push_back(p[i]);
            mass += p[i];
        }
    }
    if (mass <= 0.0) throw SupportMismatch("window keeps no mass");
    for (double& v : q) v /= mass;
    return {std::move(q), std::move(kept)};
}

std::string TruncatedKernel::to_coordinate_csv() const {
    std::ostringstream os;
    os << "from,to,prob\n";
    for (size_t i = 0; i < states.size(); ++i)
        for (int e = row_ptr[i]; e < row_ptr[i + 1]; ++e)
            os << i << "," << col[e] << "," << val[static_cast<size_t>(e)] << "\n";
    return os.str();
}

}  // namespace glpp
