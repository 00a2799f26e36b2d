#ifndef GLPP_BRIDGES_HPP
#define GLPP_BRIDGES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "glpp/common.hpp"

namespace glpp {

// ---------------------------------------------------------------------------
// Bridge: cyclic +-1 step sequence of length 2L summing to zero.  Indexing is
// 0-based internally; edge i pairs with edge (i+1) mod 2L.  The paper's
// 1-based labels map as  paper i  <->  internal i-1.
// ---------------------------------------------------------------------------

enum class PairType : std::uint8_t { SameSign, Max, Min };

class Bridge {
public:
    Bridge() = default;
    explicit Bridge(std::vector<int8_t> steps);
    static Bridge from_code(const std::string& code);  // "+-+-"
    static Bridge alternating(int L);                  // +1 at even internal index

    int L() const { return static_cast<int>(steps_.size() / 2); }
    int size() const { return static_cast<int>(steps_.size()); }
    int step(int i) const { return steps_[mod(i)]; }
    const std::vector<int8_t>& steps() const { return steps_; }

    PairType pair_type(int i) const {
        int a = step(i), b = step(i + 1);
        if (a == b) return PairType::SameSign;
        return a == 1 ? PairType::Max : PairType::Min;
    }

    std::string code() const;
    Bridge rotated(int shift) const;

    bool operator==(const Bridge& o) const { return steps_ == o.steps_; }
    bool operator<(const Bridge& o) const { return steps_ < o.steps_; }

    int mod(int i) const {
        int n = size();
        return ((i % n) + n) % n;
    }

private:
    std::vector<int8_t> steps_;
};

struct ExtremaIndex {
    std::vector<int> maxima;  // positions i with step(i)=+1, step(i+1)=-1
    std::vector<int> minima;  // positions i with step(i)=-1, step(i+1)=+1
    int k() const { return static_cast<int>(maxima.size()); }
};

ExtremaIndex local_extrema(const Bridge& b);

// ---------------------------------------------------------------------------
// Timed bridges.  Ages are integers in discrete mode, reals in continuous.
// ---------------------------------------------------------------------------

template <typename T>
struct BasicTimedBridge {
    Bridge bridge;
    std::vector<T> ages;

    bool operator==(const BasicTimedBridge& o) const {
        return bridge == o.bridge && ages == o.ages;
    }
    bool operator<(const BasicTimedBridge& o) const {
        if (bridge == o.bridge) return ages < o.ages;
        return bridge < o.bridge;
    }
};

using TimedBridge = BasicTimedBridge<long long>;
using TimedBridgeR = BasicTimedBridge<double>;

struct TimedViolation {
    int pair_index;      // internal 0-based position of the offending pair
    std::string reason;
};

// checks the age-ordering constraints; a witness (if requested) reports the
// first violated cyclic pair
template <typename T>
bool validate_timed(const Bridge& b, const std::vector<T>& ages,
                    TimedViolation* witness = nullptr);

// all C(2L, L) bridges in lexicographic order ('+' < '-')
std::vector<Bridge> enumerate_bridges(int L, int cap = 8);

// all (b, t) with every age <= T_cap (discrete); guards the state count
std::vector<TimedBridge> enumerate_timed_truncated(int L, int T_cap,
                                                   std::size_t max_states = 2'000'000);

// text codecs
std::string timed_to_json(const TimedBridge& tb);
TimedBridge timed_from_json(const std::string& json);

}  // namespace glpp

#endif
