#ifndef GLPP_EXACT_HPP
#define GLPP_EXACT_HPP

#include <map>
#include <string>
#include <vector>

#include "glpp/bridges.hpp"
#include "glpp/common.hpp"
#include "glpp/density.hpp"
#include "glpp/measures.hpp"

namespace glpp {

// ---------------------------------------------------------------------------
// Log-domain nonnegative scalar for the 2L-fold products.
// ---------------------------------------------------------------------------

struct LogValue {
    double log = -std::numeric_limits<double>::infinity();
    static LogValue from_value(double v);
    double value() const { return std::exp(log); }
    LogValue operator*(const LogValue& o) const { return {log + o.log}; }
    bool is_zero() const { return !std::isfinite(log); }
};

// relative agreement in log space
inline bool log_close(const LogValue& a, const LogValue& b, double rel) {
    if (a.is_zero() && b.is_zero()) return true;
    return std::abs(a.log - b.log) <= rel;
}

// ---------------------------------------------------------------------------
// Small dense matrices with an explicit log-scale, for kernel contraction.
// ---------------------------------------------------------------------------

struct ScaledMatrix {
    int n = 0;
    std::vector<double> a;   // row-major, n*n
    double logscale = 0.0;

    static ScaledMatrix identity(int n);
    double& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    double at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
    ScaledMatrix mul(const ScaledMatrix& o) const;
    void rescale();
    LogValue trace() const;
};

// ---------------------------------------------------------------------------
// TransferKernel: the sqrt(mu0) kernels used to sum W over all timed bridges.
// Stored truncated at age cap T.  U = strict up-steps, D = strict down-steps,
// P = the max-pair coupling P(a,b) = sum_{s>=1} sqrt(mu0(s+a) mu0(s+b)).
// The alpha deformation multiplies up/down entries by alpha^{+-increment}
// (cycle products are alpha-invariant).
// ---------------------------------------------------------------------------

class TransferKernel {
public:
    TransferKernel(const DiscreteMeasure& mu0, int T, double alpha = 1.0);

    int T() const { return T_; }
    double alpha() const { return alpha_; }
    const DiscreteMeasure& mu0() const { return mu0_; }

    const ScaledMatrix& up() const { return U_; }
    const ScaledMatrix& down() const { return D_; }
    const ScaledMatrix& peak() const { return P_; }

    // normalized eq.-MM entries: M^-(s;u) = sqrt(mu0(u-s)) a^{u-s} / C-,
    // M^+(u;t) = sqrt(mu0(u-t)) a^{-(u-t)} / C+   (C's certified finite)
    double m_minus(long long s, long long u) const;
    double m_plus(long long u, long long t) const;

    // sum over ages (<= T) of form-3 weights for one bridge; `mark` weights the
    // age of internal edge 0 (paper edge 1): 0 none, 1 age, 2 indicator(age==0)
    LogValue bridge_sum(const Bridge& b, int mark = 0) const;

private:
    DiscreteMeasure mu0_;
    int T_;
    double alpha_;
    ScaledMatrix U_, D_, P_, E_;
    double norm_minus_ = 0.0, norm_plus_ = 0.0;  // eq.-MM normalizers at this alpha
};

// ---------------------------------------------------------------------------
// W_(b,t) in the three stated forms (1 = PCA-normalized, 2 = simple,
// 3 = fully simplified).  Computed in log space.
// ---------------------------------------------------------------------------

LogValue weight_W(const Bridge& b, const std::vector<long long>& ages,
                  const DiscreteMeasure& mu0, int form);

// ---------------------------------------------------------------------------
// ExactLaw: per-bridge stationary masses with truncation bounds.
// ---------------------------------------------------------------------------

struct ExactLaw {
    int L = 0;
    std::string mu0_label;
    int T_cap = 0;
    std::vector<Bridge> bridges;
    std::vector<Bounded> weights;       // Sigma_t W per bridge (form-3 scale)
    Bounded Z;                          // sum of weights
    std::vector<double> nu;             // weights / Z
    double truncation_bound = 0.0;      // bound on total-variation effect

    double nu_of(const Bridge& b) const;
    // nu-tilde at a specific timed bridge (form-3 weight / Z)
    double nu_tilde(const TimedBridge& tb, const DiscreteMeasure& mu0) const;
    std::string to_json() const;
};

Bounded partition_Z(int L, const DiscreteMeasure& mu0, int T_cap);
ExactLaw stationary_law(int L, const DiscreteMeasure& mu0, int T_cap, double alpha = 1.0);

// ---------------------------------------------------------------------------
// Exact speeds.
//   c_via_int_speed = Sigma W / Sigma (2 t1 + 1) W            (thm int-speed)
//   c_via_alt       = open-chain formula                      (eq int-speed-alt)
//   c_zero_age      = stationary probability of {t1 = 0}; agrees with the alt
//                     route (two algebraic routes to the same quantity)
// ---------------------------------------------------------------------------

struct SpeedReport {
    Bounded c_via_int_speed;
    Bounded c_via_alt;
    Bounded c_zero_age;
    std::string to_json() const;
};

SpeedReport speed_exact(int L, const DiscreteMeasure& mu0, int T_cap);

// Prop clasCyl closed form nu_L(b) = (1-p)^{-k_b} / Z
std::map<std::string, double> geometric_closed_form(int L, double p);

// Annex combinatorial lemmas
double lemma_comb(int k, double q);                 // sum binom(i-1,k-1) q^i
unsigned long long lemma_sumcomb(int n, int k);     // sum_{j=k}^n binom(j,k)

// ---------------------------------------------------------------------------
// Continuous stationary density g and its normalizer (Prop int-c).
// Quadrature for L <= 2; Monte Carlo with error bars for L = 3.
// ---------------------------------------------------------------------------

double continuous_density_g(const Bridge& b, const std::vector<double>& ages,
                            const DensityFamily& fam, double Z);
// unnormalized weight of one timed bridge (the product inside g)
double continuous_weight(const Bridge& b, const std::vector<double>& ages,
                         const DensityFamily& fam);
Bounded continuous_Z(int L, const DensityFamily& fam, std::uint64_t mc_seed = 1234);
// per-bridge masses (same machinery), normalized
std::map<std::string, double> continuous_bridge_law(int L, const DensityFamily& fam);

}  // namespace glpp

#endif
