#ifndef GLPP_DENSITY_HPP
#define GLPP_DENSITY_HPP

#include <functional>
#include <memory>
#include <string>

#include "glpp/common.hpp"
#include "glpp/measures.hpp"

namespace glpp {

// ---------------------------------------------------------------------------
// Seed densities on (0, inf): positive and C^1.
// ---------------------------------------------------------------------------

struct SeedDensity {
    virtual ~SeedDensity() = default;
    virtual double pdf(double x) const = 0;
    virtual double cdf(double x) const = 0;
    virtual double inv_cdf(double u) const;  // default: bisection on cdf
    virtual std::string label() const = 0;
    // upper bound for numeric tails: x beyond which mass < 1e-14
    virtual double effective_support() const = 0;
};

struct ExponentialDensity final : SeedDensity {
    double lambda;
    explicit ExponentialDensity(double l);
    double pdf(double x) const override { return x >= 0 ? lambda * std::exp(-lambda * x) : 0.0; }
    double cdf(double x) const override { return x > 0 ? 1.0 - std::exp(-lambda * x) : 0.0; }
    double inv_cdf(double u) const override { return -std::log1p(-u) / lambda; }
    std::string label() const override { return "exp:" + std::to_string(lambda); }
    double effective_support() const override { return 40.0 / lambda; }
};

struct HalfNormalDensity final : SeedDensity {
    double sigma;
    explicit HalfNormalDensity(double s);
    double pdf(double x) const override;
    double cdf(double x) const override;
    std::string label() const override { return "half_normal:" + std::to_string(sigma); }
    double effective_support() const override { return 9.0 * sigma; }
};

// ---------------------------------------------------------------------------
// DensityFamily: (mu_Delta)_Delta with densities f_Delta on (0, inf).
// Constant kind uses f0 for every gap; integrable kind is the Cond-4 family
//   f_Delta(x) = sqrt(f0(x) f0(x+Delta)) / integral sqrt(f0(s) f0(s+Delta)) ds.
// An exponential seed collapses to the constant family (closed-form branch).
// ---------------------------------------------------------------------------

class DensityFamily {
public:
    static DensityFamily constant(std::shared_ptr<const SeedDensity> f0);
    static DensityFamily integrable(std::shared_ptr<const SeedDensity> f0);

    const SeedDensity& seed() const { return *f0_; }
    const std::string& label() const { return label_; }
    bool integrable_kind() const { return integrable_; }

    double pdf(double delta, double x) const;
    double cdf(double delta, double x) const;
    double inv_cdf(double delta, double u) const;
    double tail(double delta, double x) const { return 1.0 - cdf(delta, x); }

    // Cond-4 normalizer integral sqrt(f0(s) f0(s+delta)) ds
    double normalizer(double delta) const;

    // residual draw: value of xi - m given xi > m, xi ~ f_delta
    double sample_residual(double delta, double m, double u) const;

private:
    DensityFamily(std::shared_ptr<const SeedDensity> f0, bool integrable, std::string label)
        : f0_(std::move(f0)), integrable_(integrable), label_(std::move(label)) {}

    std::shared_ptr<const SeedDensity> f0_;
    bool integrable_ = false;
    std::string label_;
    bool exp_closed_form_ = false;
};

DensityFamily make_integrable_density_family(std::shared_ptr<const SeedDensity> f0);

// Cond 5 certificate: sup over the gap grid of mu_Delta([0, eps])
CertificateReport check_noexplosion(const DensityFamily& fam, double eps, double delta_max,
                                    int grid_points = 64);

// hazard beta_m^delta = f_delta(m) / integral f_delta(s + m) ds
double flip_rate(double m, double delta, const DensityFamily& fam);

}  // namespace glpp

#endif
