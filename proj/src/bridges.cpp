#include "glpp/bridges.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include <json.hpp>

namespace glpp {

Bridge::Bridge(std::vector<int8_t> steps) : steps_(std::move(steps)) {
    if (steps_.empty() || steps_.size() % 2 != 0)
        throw ConfigError("bridge length must be even and positive");
    int sum = 0;
    for (int8_t s : steps_) {
        if (s != 1 && s != -1) throw ConfigError("bridge steps must be +-1");
        sum += s;
    }
    if (sum != 0) throw ConfigError("bridge steps must sum to zero");
}

Bridge Bridge::from_code(const std::string& code) {
    std::vector<int8_t> steps;
    steps.reserve(code.size());
    for (char c : code) {
        if (c == '+') steps.push_back(1);
        else if (c == '-') steps.push_back(-1);
        else throw ConfigError("bridge code must use only '+'/'-'");
    }
    return Bridge(std::move(steps));
}

Bridge Bridge::alternating(int L) {
    std::vector<int8_t> steps(2 * L);
    for (int i = 0; i < 2 * L; ++i) steps[i] = (i % 2 == 0) ? 1 : -1;
    return Bridge(std::move(steps));
}

std::string Bridge::code() const {
    std::string s;
    s.reserve(steps_.size());
    for (int8_t x : steps_) s.push_back(x == 1 ? '+' : '-');
    return s;
}

Bridge Bridge::rotated(int shift) const {
    int n = size();
    std::vector<int8_t> steps(n);
    for (int i = 0; i < n; ++i) steps[i] = steps_[mod(i + shift)];
    return Bridge(std::move(steps));
}

ExtremaIndex local_extrema(const Bridge& b) {
    ExtremaIndex e;
    for (int i = 0; i < b.size(); ++i) {
        PairType t = b.pair_type(i);
        if (t == PairType::Max) e.maxima.push_back(i);
        else if (t == PairType::Min) e.minima.push_back(i);
    }
    return e;
}

template <typename T>
bool validate_timed(const Bridge& b, const std::vector<T>& ages, TimedViolation* witness) {
    if (static_cast<int>(ages.size()) != b.size())
        throw ConfigError("age vector length must match bridge length");
    for (int i = 0; i < b.size(); ++i) {
        T a = ages[i];
        T c = ages[b.mod(i + 1)];
        bool ok = true;
        const char* reason = "";
        switch (b.pair_type(i)) {
            case PairType::SameSign:
                if (b.step(i) == 1) { ok = a < c; reason = "ascent requires t_i < t_{i+1}"; }
                else { ok = a > c; reason = "descent requires t_i > t_{i+1}"; }
                break;
            case PairType::Min:
                ok = a == c;
                reason = "minimum requires t_i = t_{i+1}";
                break;
            case PairType::Max:
                break;
        }
        if (ages[i] < T(0)) { ok = false; reason = "ages must be nonnegative"; }
        if (!ok) {
            if (witness) *witness = {i, reason};
            return false;
        }
    }
    return true;
}

template bool validate_timed<long long>(const Bridge&, const std::vector<long long>&, TimedViolation*);
template bool validate_timed<double>(const Bridge&, const std::vector<double>&, TimedViolation*);

std::vector<Bridge> enumerate_bridges(int L, int cap) {
    if (L < 1) throw ConfigError("L must be positive");
    if (L > cap)
        throw CapExceeded("bridge enumeration for L=" + std::to_string(L) +
                          " exceeds cap " + std::to_string(cap));
    std::vector<Bridge> out;
    // '+' explored first gives lexicographic order under '+' < '-'
    std::vector<int8_t> tmp(2 * L);
    std::function<void(int, int)> gen = [&](int i, int sum) {
        if (i == 2 * L) {
            if (sum == 0) out.push_back(Bridge(tmp));
            return;
        }
        int rem = 2 * L - i - 1;
        if (sum + 1 - rem <= 0) { tmp[i] = 1; gen(i + 1, sum + 1); }
        if (sum - 1 + rem >= 0) { tmp[i] = -1; gen(i + 1, sum - 1); }
    };
    gen(0, 0);
    return out;
}

std::vector<TimedBridge> enumerate_timed_truncated(int L, int T_cap, std::size_t max_states) {
    if (L > 3) throw StateSpaceTooLarge("enumerate_timed_truncated supports L <= 3");
    if (T_cap > 60) throw StateSpaceTooLarge("enumerate_timed_truncated supports T_cap <= 60");
    std::vector<TimedBridge> out;
    for (const Bridge& b : enumerate_bridges(L)) {
        const int n = b.size();
        std::vector<long long> t(n, 0);
        std::function<void(int)> rec = [&](int i) {
            if (i == n) {
                // wrap constraint: pair (n-1, 0)
                long long a = t[n - 1], c = t[0];
                switch (b.pair_type(n - 1)) {
                    case PairType::SameSign:
                        if (b.step(n - 1) == 1 ? !(a < c) : !(a > c)) return;
                        break;
                    case PairType::Min:
                        if (a != c) return;
                        break;
                    case PairType::Max:
                        break;
                }
                out.push_back({b, t});
                if (out.size() > max_states)
                    throw StateSpaceTooLarge("timed-bridge state space exceeds " +
                                             std::to_string(max_states));
                return;
            }
            for (long long x = 0; x <= T_cap; ++x) {
                t[i] = x;
                if (i > 0) {
                    long long a = t[i - 1], c = t[i];
                    switch (b.pair_type(i - 1)) {
                        case PairType::SameSign:
                            if (b.step(i - 1) == 1 ? !(a < c) : !(a > c)) continue;
                            break;
                        case PairType::Min:
                            if (a != c) continue;
                            break;
                        case PairType::Max:
                            break;
                    }
                }
                rec(i + 1);
            }
        };
        rec(0);
    }
    return out;
}

std::string timed_to_json(const TimedBridge& tb) {
    nlohmann::json j;
    j["b"] = tb.bridge.code();
    j["t"] = tb.ages;
    return j.dump();
}

TimedBridge timed_from_json(const std::string& json) {
    auto j = nlohmann::json::parse(json);
    TimedBridge tb;
    tb.bridge = Bridge::from_code(j.at("b").get<std::string>());
    tb.ages = j.at("t").get<std::vector<long long>>();
    if (!validate_timed(tb.bridge, tb.ages))
        throw ConfigError("ages violate the bridge ordering constraints");
    return tb;
}

}  // namespace glpp
