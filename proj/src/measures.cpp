#include "glpp/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace glpp {

namespace {
constexpr double kLogFloor = -746.0;  // below exp() underflow
}

DiscreteMeasure::DiscreteMeasure(std::vector<double> pmf, double tail_remainder,
                                 double sqrt_remainder, std::string label)
    : pmf_(std::move(pmf)),
      tail_remainder_(tail_remainder),
      sqrt_remainder_(sqrt_remainder),
      label_(std::move(label)) {
    if (pmf_.empty()) throw ConfigError("empty pmf for measure " + label_);
    logpmf_.resize(pmf_.size());
    for (size_t i = 0; i < pmf_.size(); ++i) {
        if (pmf_[i] < 0.0) throw ConfigError("negative mass in measure " + label_);
        logpmf_[i] = pmf_[i] > 0.0 ? std::log(pmf_[i]) : kLogFloor;
    }
    suffix_.resize(pmf_.size());
    KahanSum acc;
    for (size_t i = pmf_.size(); i-- > 0;) {
        acc.add(pmf_[i]);
        suffix_[i] = acc.value();
    }
    double total = suffix_[0] + tail_remainder_;
    if (std::abs(total - 1.0) > 1e-9)
        throw ConfigError("measure " + label_ + " does not sum to 1 (got " +
                          std::to_string(total) + ")");
}

double DiscreteMeasure::log_at(int i) const {
    if (i < 1 || i > cap()) return kLogFloor;
    return logpmf_[i - 1];
}

double DiscreteMeasure::tail(int t) const {
    if (t <= 1) return suffix_.empty() ? 0.0 : suffix_[0] + tail_remainder_;
    if (t > cap()) return tail_remainder_;
    return suffix_[t - 1] + tail_remainder_;
}

double DiscreteMeasure::tail_lower(int t) const {
    if (t <= 1) return suffix_.empty() ? 0.0 : suffix_[0];
    if (t > cap()) return 0.0;
    return suffix_[t - 1];
}

Bounded DiscreteMeasure::sqrt_sum() const {
    if (sqrt_remainder_ < 0.0)
        throw DivergentSqrtSum("sum of sqrt(mu) not certified finite for " + label_);
    KahanSum acc;
    for (double m : pmf_) acc.add(std::sqrt(m));
    return {acc.value() + 0.5 * sqrt_remainder_, 0.5 * sqrt_remainder_};
}

double DiscreteMeasure::mean() const {
    KahanSum acc;
    for (int i = 1; i <= cap(); ++i) acc.add(i * pmf_[i - 1]);
    return acc.value();
}

int DiscreteMeasure::sample(double u) const {
    // inverse cdf on the suffix representation: find smallest i with cdf(i) >= u
    double target = (suffix_[0] + tail_remainder_) * u;
    double acc = 0.0;
    for (int i = 1; i <= cap(); ++i) {
        acc += pmf_[i - 1];
        if (acc >= target) return i;
    }
    return cap();
}

int DiscreteMeasure::sample_conditional(int m, double u) const {
    if (m <= 0) return sample(u);
    double mass = tail(m + 1);
    if (mass < 1e-300)
        throw TailUnderflow("conditioning event {X > " + std::to_string(m) +
                            "} has mass < 1e-300 for " + label_);
    double target = mass * u;
    double acc = 0.0;
    for (int i = m + 1; i <= cap(); ++i) {
        acc += pmf_[i - 1];
        if (acc >= target) return i;
    }
    return cap();
}

Bounded DiscreteMeasure::sqrt_overlap(int delta) const {
    return sqrt_overlap_shifted(0, delta);
}

Bounded DiscreteMeasure::sqrt_overlap_shifted(int a, int b) const {
    if (a > b) std::swap(a, b);
    KahanSum acc;
    const int n = cap();
    for (int s = 1; s + b <= n; ++s)
        acc.add(std::sqrt(pmf_[s + a - 1] * pmf_[s + b - 1]));
    // Cauchy-Schwarz on the discarded range: sum sqrt(xy) <= sqrt(sum x * sum y)
    double rem = std::sqrt(tail(n - b + 1 + a) * tail_remainder_) + tail_remainder_;
    return {acc.value() + 0.5 * rem, 0.5 * rem + 1e-16 * acc.value()};
}

// ---------------------------------------------------------------------------
// Named measures
// ---------------------------------------------------------------------------

DiscreteMeasure DiscreteMeasure::geometric(double p, int cap) {
    if (!(p > 0.0 && p < 1.0)) throw ConfigError("geometric parameter must be in (0,1)");
    std::vector<double> pmf(cap);
    double q = 1.0 - p;
    double cur = p;
    for (int i = 0; i < cap; ++i) {
        pmf[i] = cur;
        cur *= q;
    }
    double tail_rem = std::pow(q, cap);
    // sum_{i>cap} sqrt(p q^{i-1}) = sqrt(p) q^{cap/2} sqrt(q)^... exact geometric sum
    double sq = std::sqrt(q);
    double sqrt_rem = std::sqrt(p) * std::pow(sq, cap) / (1.0 - sq);
    return DiscreteMeasure(std::move(pmf), tail_rem, sqrt_rem,
                           "geometric:" + std::to_string(p));
}

namespace {
// pmf of Poisson(lambda) on {0,1,...} in log space
double log_poisson(double lambda, int k) {
    return -lambda + k * std::log(lambda) - std::lgamma(k + 1.0);
}
}  // namespace

DiscreteMeasure DiscreteMeasure::poisson_conditioned(double lambda, int cap) {
    if (!(lambda > 0.0)) throw ConfigError("poisson parameter must be positive");
    std::vector<double> pmf(cap);
    double norm = 1.0 - std::exp(-lambda);
    for (int i = 1; i <= cap; ++i)
        pmf[i - 1] = std::exp(log_poisson(lambda, i)) / norm;
    // beyond cap the pmf ratio is lambda/(i+1) <= r < 1
    double r = lambda / (cap + 1);
    if (r >= 1.0) throw ConfigError("poisson cap too small for lambda");
    double last = pmf[cap - 1];
    double tail_rem = last * r / (1.0 - r);
    double sr = std::sqrt(r);
    double sqrt_rem = std::sqrt(last) * sr / (1.0 - sr);
    return DiscreteMeasure(std::move(pmf), tail_rem, sqrt_rem,
                           "poisson:" + std::to_string(lambda));
}

DiscreteMeasure DiscreteMeasure::poisson_shifted(double lambda, int cap) {
    if (!(lambda > 0.0)) throw ConfigError("poisson parameter must be positive");
    std::vector<double> pmf(cap);
    for (int i = 1; i <= cap; ++i)
        pmf[i - 1] = std::exp(log_poisson(lambda, i - 1));
    double r = lambda / cap;
    if (r >= 1.0) throw ConfigError("poisson cap too small for lambda");
    double last = pmf[cap - 1];
    double tail_rem = last * r / (1.0 - r);
    double sr = std::sqrt(r);
    double sqrt_rem = std::sqrt(last) * sr / (1.0 - sr);
    return DiscreteMeasure(std::move(pmf), tail_rem, sqrt_rem,
                           "poisson_shifted:" + std::to_string(lambda));
}

DiscreteMeasure DiscreteMeasure::zeta(double alpha, int cap) {
    if (!(alpha > 1.0)) throw ConfigError("zeta exponent must exceed 1");
    // zeta(alpha) via direct summation plus integral remainder
    KahanSum zs;
    for (int i = 1; i <= cap; ++i) zs.add(std::pow(i, -alpha));
    double zeta_rem = std::pow(cap, 1.0 - alpha) / (alpha - 1.0);
    double Z = zs.value() + 0.5 * zeta_rem;
    std::vector<double> pmf(cap);
    for (int i = 1; i <= cap; ++i) pmf[i - 1] = std::pow(i, -alpha) / Z;
    double tail_rem = zeta_rem / Z;
    double sqrt_rem;
    if (alpha > 2.0) {
        // sum_{i>cap} i^{-alpha/2} <= cap^{1-alpha/2} / (alpha/2 - 1)
        sqrt_rem = std::pow(cap, 1.0 - 0.5 * alpha) / (0.5 * alpha - 1.0) / std::sqrt(Z);
    } else {
        sqrt_rem = -1.0;  // divergent sqrt sum
    }
    return DiscreteMeasure(std::move(pmf), tail_rem, sqrt_rem,
                           "zeta:" + std::to_string(alpha));
}

DiscreteMeasure DiscreteMeasure::from_table(const std::vector<std::pair<int, double>>& entries) {
    if (entries.empty()) throw ConfigError("empty table measure");
    int maxi = 0;
    for (auto& [i, m] : entries) {
        if (i < 1) throw ConfigError("table support must be on {1,2,...}");
        maxi = std::max(maxi, i);
    }
    std::vector<double> pmf(maxi, 0.0);
    for (auto& [i, m] : entries) pmf[i - 1] += m;
    double total = 0.0;
    for (double m : pmf) total += m;
    if (std::abs(total - 1.0) > 1e-9)
        throw ConfigError("table measure does not sum to 1");
    for (double& m : pmf) m /= total;
    return DiscreteMeasure(std::move(pmf), 0.0, 0.0, "table");
}

// ---------------------------------------------------------------------------
// MeasureFamily
// ---------------------------------------------------------------------------

MeasureFamily MeasureFamily::constant(DiscreteMeasure mu) {
    std::string label = "constant(" + mu.label() + ")";
    return MeasureFamily(FamilyKind::Constant, std::move(mu), std::move(label));
}

MeasureFamily MeasureFamily::integrable(DiscreteMeasure mu0) {
    mu0.sqrt_sum();  // throws DivergentSqrtSum when not certified
    std::string label = "integrable(" + mu0.label() + ")";
    return MeasureFamily(FamilyKind::Integrable, std::move(mu0), std::move(label));
}

MeasureFamily MeasureFamily::edge_lpp(DiscreteMeasure mu) {
    std::string label = "edge_lpp(" + mu.label() + ")";
    return MeasureFamily(FamilyKind::EdgeLpp, std::move(mu), std::move(label));
}

MeasureFamily MeasureFamily::custom(std::vector<DiscreteMeasure> per_delta) {
    if (per_delta.empty()) throw ConfigError("empty custom family");
    MeasureFamily f(FamilyKind::CustomTable, per_delta.front(), "custom_table");
    f.table_ = std::move(per_delta);
    return f;
}

const DiscreteMeasure& MeasureFamily::at(int delta) const {
    if (delta < 0) throw ConfigError("negative gap");
    if (kind_ == FamilyKind::Constant) return base_;
    if (kind_ == FamilyKind::CustomTable) {
        size_t idx = std::min<size_t>(delta, table_.size() - 1);
        return table_[idx];
    }
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = cache_.find(delta);
    if (it == cache_.end()) {
        it = cache_.emplace(delta,
                            std::make_shared<const DiscreteMeasure>(materialize(delta)))
                 .first;
    }
    return *it->second;
}

DiscreteMeasure MeasureFamily::materialize(int delta) const {
    const DiscreteMeasure& mu = base_;
    const int n = mu.cap();
    if (kind_ == FamilyKind::Integrable) {
        if (delta == 0) return mu;
        std::vector<double> pmf(std::max(1, n - delta), 0.0);
        KahanSum norm;
        for (int t = 1; t + delta <= n; ++t) {
            double w = std::sqrt(mu(t) * mu(t + delta));
            pmf[t - 1] = w;
            norm.add(w);
        }
        if (norm.value() <= 0.0)
            throw TailUnderflow("Cond-1 normalizer underflows at gap " + std::to_string(delta));
        // mass beyond the cap, bounded by Cauchy-Schwarz on the tails
        double rem = std::sqrt(mu.tail(std::max(1, n - delta + 1)) * mu.tail_remainder()) +
                     mu.tail_remainder();
        double N = norm.value() + 0.5 * rem;
        for (double& w : pmf) w /= N;
        double tail_rem = rem / N;
        // sqrt(mu_Delta) <= mu0(t)^{1/4} mu0(t+D)^{1/4} / sqrt(N); crude but finite
        double sqrt_rem = mu.sqrt_sum_certified()
                              ? mu.sqrt_remainder() / std::sqrt(N)
                              : -1.0;
        return DiscreteMeasure(std::move(pmf), tail_rem, sqrt_rem,
                               label_ + "@" + std::to_string(delta));
    }
    if (kind_ == FamilyKind::EdgeLpp) {
        // mu_D(i) = mu(i+D) F(i-1) + mu(i) F(i-1+D) + mu(i) mu(i+D)
        std::vector<double> pmf(n, 0.0);
        for (int i = 1; i <= n; ++i) {
            double a = mu(i + delta) * mu.cdf(i - 1);
            double b = mu(i) * mu.cdf(i - 1 + delta);
            double c = mu(i) * mu(i + delta);
            pmf[i - 1] = a + b + c;
        }
        // remainder: P(max(z1, D+z2) - D > n) <= P(z1 > n+D) + P(z2 > n)
        double tail_rem = mu.tail(n + delta + 1) + mu.tail(n + 1);
        if (mu.finite_support()) tail_rem = 0.0;
        // normalize the tiny truncation slack when support is finite
        if (mu.finite_support()) {
            double tot = 0.0;
            for (double m : pmf) tot += m;
            for (double& m : pmf) m /= tot;
        }
        return DiscreteMeasure(std::move(pmf), tail_rem, mu.finite_support() ? 0.0 : -1.0,
                               label_ + "@" + std::to_string(delta));
    }
    return mu;
}

Bounded MeasureFamily::normalizer(int delta) const {
    if (kind_ != FamilyKind::Integrable)
        throw ConfigError("normalizer only defined for integrable families");
    return base_.sqrt_overlap(delta);
}

MeasureFamily make_integrable_family(const DiscreteMeasure& mu0) {
    return MeasureFamily::integrable(mu0);
}

MeasureFamily make_edge_lpp_family(const DiscreteMeasure& mu) {
    return MeasureFamily::edge_lpp(mu);
}

// ---------------------------------------------------------------------------
// Condition checkers (grid certificates)
// ---------------------------------------------------------------------------

std::string CertificateReport::to_json() const {
    std::ostringstream os;
    os << "{\"condition\":\"" << condition << "\",\"passed\":" << (passed ? "true" : "false")
       << ",\"value\":" << value << ",\"delta_max\":" << delta_max << ",\"t_max\":" << t_max
       << ",\"witness\":[";
    for (size_t i = 0; i < witness.size(); ++i) os << (i ? "," : "") << witness[i];
    os << "],\"witness_kind\":\"" << witness_kind << "\",\"note\":\"" << note << "\"}";
    return os.str();
}

CertificateReport check_cond_conv(const MeasureFamily& fam, int delta_max, int t_max) {
    if (delta_max < 0 || t_max < 1) throw EmptyGrid("caps must cover at least one point");
    CertificateReport rep;
    rep.condition = "conv";
    rep.delta_max = delta_max;
    rep.t_max = t_max;
    double inf = std::numeric_limits<double>::infinity();
    for (int d = 0; d <= delta_max; ++d) {
        const DiscreteMeasure& mu = fam.at(d);
        for (int t = 1; t <= t_max; ++t) {
            double tl = mu.tail(t);
            if (tl <= 0.0) break;
            double ratio = mu(t) / tl;
            if (ratio < inf) {
                inf = ratio;
                rep.witness = {d, t};
                rep.witness_kind = "argmin(delta,t)";
            }
        }
    }
    rep.value = inf;
    rep.passed = inf > 0.0;
    rep.note = "grid certificate only";
    if (fam.is_integrable_kind()) {
        CertificateReport c3 = check_cond_conv2(fam.base(), t_max);
        std::ostringstream os;
        os << "grid certificate only; cond3 on mu0 gives inf=" << c3.value
           << " at t=" << (c3.witness.empty() ? 0 : c3.witness[0])
           << " and cond3 => cond2 with the same alpha";
        rep.note = os.str();
    }
    return rep;
}

CertificateReport check_cond_conv2(const DiscreteMeasure& mu0, int t_max) {
    if (t_max < 1) throw EmptyGrid("t_max must be >= 1");
    CertificateReport rep;
    rep.condition = "conv2";
    rep.t_max = t_max;
    double inf = std::numeric_limits<double>::infinity();
    for (int t = 1; t <= t_max; ++t) {
        double tl = mu0.tail(t);
        if (tl <= 0.0) break;
        double ratio = mu0(t) / tl;
        if (ratio < inf) {
            inf = ratio;
            rep.witness = {t};
            rep.witness_kind = "argmin(t)";
        }
    }
    rep.value = inf;
    rep.passed = inf > 0.0;
    rep.note = "hazard ratio of mu0 on the grid";
    return rep;
}

CertificateReport check_cond_subadd(const MeasureFamily& fam, int delta_max, int n_max) {
    CertificateReport rep;
    rep.condition = "subadd";
    rep.delta_max = delta_max;
    rep.t_max = n_max;
    rep.passed = true;
    const double tol = 1e-12;
    for (int d = 0; d <= delta_max; ++d) {
        const DiscreteMeasure& a = fam.at(d);
        const DiscreteMeasure& b = fam.at(d + 1);
        for (int n = 1; n <= n_max; ++n) {
            double left = a.cdf(n) - b.cdf(n);      // must be <= 0
            double right = b.cdf(n) - a.cdf(n + 1); // must be <= 0
            if (left > tol) {
                rep.passed = false;
                rep.value = left;
                rep.witness = {d, n, 0};
                rep.witness_kind = "(delta,n,side) side=0 left";
                rep.note = "left inequality violated";
                return rep;
            }
            if (right > tol) {
                rep.passed = false;
                rep.value = right;
                rep.witness = {d, n, 1};
                rep.witness_kind = "(delta,n,side) side=1 right";
                rep.note = "right inequality violated";
                return rep;
            }
        }
    }
    rep.note = "grid pass";
    return rep;
}

}  // namespace glpp
