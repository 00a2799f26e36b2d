#ifndef GLPP_MEASURES_HPP
#define GLPP_MEASURES_HPP

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "glpp/common.hpp"

namespace glpp {

// ---------------------------------------------------------------------------
// DiscreteMeasure: a probability measure on {1,2,...} stored up to a
// truncation cap, with certified bounds for the mass (and sqrt-mass) beyond
// the cap.  Immutable after construction.
// ---------------------------------------------------------------------------

class DiscreteMeasure {
public:
    DiscreteMeasure() = default;
    // pmf[i-1] = mu(i).  tail_remainder / sqrt_remainder are certified upper
    // bounds on sum_{i>cap} mu(i) and sum_{i>cap} sqrt(mu(i)).
    // sqrt_remainder < 0 flags a sqrt-sum that could not be certified finite.
    DiscreteMeasure(std::vector<double> pmf, double tail_remainder,
                    double sqrt_remainder, std::string label);

    static DiscreteMeasure geometric(double p, int cap = 2000);
    static DiscreteMeasure poisson_conditioned(double lambda, int cap = 400);
    static DiscreteMeasure poisson_shifted(double lambda, int cap = 400);
    static DiscreteMeasure zeta(double alpha, int cap = 200000);
    // explicit (i, mass) table; mass beyond the listed support is zero
    static DiscreteMeasure from_table(const std::vector<std::pair<int, double>>& entries);

    int cap() const { return static_cast<int>(pmf_.size()); }
    const std::string& label() const { return label_; }
    bool finite_support() const { return tail_remainder_ == 0.0; }

    // mu(i); zero beyond the cap (the remainder is tracked separately)
    double operator()(int i) const {
        return (i >= 1 && i <= cap()) ? pmf_[i - 1] : 0.0;
    }
    double log_at(int i) const;

    // sum_{s >= t} mu(s) for t >= 1 (in-cap part; remainder added)
    double tail(int t) const;
    double tail_lower(int t) const;   // certified lower bound (in-cap suffix only)
    double cdf(int n) const { return n <= 0 ? 0.0 : 1.0 - tail(n + 1); }

    double tail_remainder() const { return tail_remainder_; }
    double sqrt_remainder() const { return sqrt_remainder_; }

    // Sigma_s sqrt(mu(s)) with certified bound; throws DivergentSqrtSum if the
    // remainder could not be certified finite
    Bounded sqrt_sum() const;
    bool sqrt_sum_certified() const { return sqrt_remainder_ >= 0.0; }

    double mean() const;

    // inverse-cdf sampling; u in (0,1)
    int sample(double u) const;
    // residual view: value > m distributed as mu(m+.)/tail(m+1)
    int sample_conditional(int m, double u) const;

    // N(d) = sum_{s>=1} sqrt(mu(s) mu(s+d)), the Cond-1 normalizer;
    // bound covers truncation
    Bounded sqrt_overlap(int delta) const;
    // P(a,b) = sum_{s>=1} sqrt(mu(s+a) mu(s+b)) (equals sqrt_overlap at min=0)
    Bounded sqrt_overlap_shifted(int a, int b) const;

    double total_mass() const { return suffix_.empty() ? 0.0 : suffix_[0] + tail_remainder_; }

private:
    std::vector<double> pmf_;
    std::vector<double> logpmf_;
    std::vector<double> suffix_;     // suffix_[i-1] = sum_{s=i..cap} pmf
    double tail_remainder_ = 0.0;
    double sqrt_remainder_ = 0.0;    // < 0 => not certified finite
    std::string label_;
};

// ---------------------------------------------------------------------------
// CertificateReport: result of a grid condition check.  These are statements
// about the scanned grid only, never claims over the infinite index set.
// ---------------------------------------------------------------------------

struct CertificateReport {
    std::string condition;       // e.g. "conv", "conv2", "subadd", "noexplosion"
    bool passed = false;
    double value = 0.0;          // the inf/sup found on the grid
    std::vector<long long> witness;  // location of the extremum / first violation
    std::string witness_kind;
    int delta_max = 0;
    long long t_max = 0;
    std::string note;
    std::string to_json() const;
};

// ---------------------------------------------------------------------------
// MeasureFamily: the model parameter (mu_Delta)_Delta.
// ---------------------------------------------------------------------------

enum class FamilyKind { Constant, Integrable, EdgeLpp, CustomTable };

class MeasureFamily {
public:
    // constant family: mu_Delta = mu for all Delta
    static MeasureFamily constant(DiscreteMeasure mu);
    // Cond-1 family built from mu0 (throws DivergentSqrtSum)
    static MeasureFamily integrable(DiscreteMeasure mu0);
    // edge-LPP family built from mu
    static MeasureFamily edge_lpp(DiscreteMeasure mu);
    // explicit per-gap table (gaps beyond the table fall back to the last entry)
    static MeasureFamily custom(std::vector<DiscreteMeasure> per_delta);

    FamilyKind kind() const { return kind_; }
    const DiscreteMeasure& base() const { return base_; }
    const std::string& label() const { return label_; }

    // mu_Delta, lazily materialized and cached; thread-safe
    const DiscreteMeasure& at(int delta) const;

    // Cond-1 normalizer N(Delta) (only for integrable families)
    Bounded normalizer(int delta) const;

    bool is_integrable_kind() const { return kind_ == FamilyKind::Integrable; }

    MeasureFamily(const MeasureFamily& o)
        : kind_(o.kind_), base_(o.base_), label_(o.label_), table_(o.table_) {
        std::lock_guard<std::mutex> lock(o.cache_mutex_);
        cache_ = o.cache_;
    }
    MeasureFamily(MeasureFamily&& o) noexcept
        : kind_(o.kind_), base_(std::move(o.base_)), label_(std::move(o.label_)),
          table_(std::move(o.table_)) {
        std::lock_guard<std::mutex> lock(o.cache_mutex_);
        cache_ = std::move(o.cache_);
    }
    MeasureFamily& operator=(const MeasureFamily&) = delete;
    MeasureFamily& operator=(MeasureFamily&&) = delete;

private:
    MeasureFamily(FamilyKind k, DiscreteMeasure base, std::string label)
        : kind_(k), base_(std::move(base)), label_(std::move(label)) {}

    DiscreteMeasure materialize(int delta) const;

    FamilyKind kind_;
    DiscreteMeasure base_;
    std::string label_;
    std::vector<DiscreteMeasure> table_;
    mutable std::mutex cache_mutex_;
    mutable std::map<int, std::shared_ptr<const DiscreteMeasure>> cache_;
};

MeasureFamily make_integrable_family(const DiscreteMeasure& mu0);
MeasureFamily make_edge_lpp_family(const DiscreteMeasure& mu);

// Cond 2 hazard-ratio certificate: inf over the grid of
// mu_Delta(t) / sum_{s>=t} mu_Delta(s).  For integrable families also
// evaluates Cond 3 on mu0 (same ratio for mu0) and records that Cond 3
// implies Cond 2.
CertificateReport check_cond_conv(const MeasureFamily& fam, int delta_max, int t_max);
CertificateReport check_cond_conv2(const DiscreteMeasure& mu0, int t_max);

// Cond 7: mu_D([0,n]) <= mu_{D+1}([0,n]) <= mu_D([0,n+1]) on the grid
CertificateReport check_cond_subadd(const MeasureFamily& fam, int delta_max, int n_max);

}  // namespace glpp

#endif
