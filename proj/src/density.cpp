#include "glpp/density.hpp"

#include <cmath>

#include "glpp/stats.hpp"

namespace glpp {

double SeedDensity::inv_cdf(double u) const {
    if (!(u > 0.0 && u < 1.0)) throw ConfigError("inv_cdf needs u in (0,1)");
    double lo = 0.0, hi = effective_support();
    while (cdf(hi) < u) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (cdf(mid) < u ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

ExponentialDensity::ExponentialDensity(double l) : lambda(l) {
    if (!(l > 0.0)) throw ConfigError("exponential rate must be positive");
}

HalfNormalDensity::HalfNormalDensity(double s) : sigma(s) {
    if (!(s > 0.0)) throw ConfigError("half-normal scale must be positive");
}

double HalfNormalDensity::pdf(double x) const {
    if (x < 0.0) return 0.0;
    static const double c = std::sqrt(2.0 / M_PI);
    return c / sigma * std::exp(-x * x / (2.0 * sigma * sigma));
}

double HalfNormalDensity::cdf(double x) const {
    if (x <= 0.0) return 0.0;
    return std::erf(x / (sigma * std::sqrt(2.0)));
}

DensityFamily DensityFamily::constant(std::shared_ptr<const SeedDensity> f0) {
    std::string label = "constant(" + f0->label() + ")";
    return DensityFamily(std::move(f0), false, std::move(label));
}

DensityFamily DensityFamily::integrable(std::shared_ptr<const SeedDensity> f0) {
    // certify integral sqrt(f0) finite
    const SeedDensity& f = *f0;
    double s = integrate_semiinf([&f](double x) { return std::sqrt(f.pdf(x)); }, 1e-9);
    if (!std::isfinite(s) || s <= 0.0)
        throw DivergentSqrtSum("integral of sqrt(f0) not finite for " + f0->label());
    std::string label = "integrable(" + f0->label() + ")";
    DensityFamily fam(std::move(f0), true, std::move(label));
    fam.exp_closed_form_ = dynamic_cast<const ExponentialDensity*>(fam.f0_.get()) != nullptr;
    return fam;
}

double DensityFamily::normalizer(double delta) const {
    const SeedDensity& f = *f0_;
    if (exp_closed_form_) {
        double l = static_cast<const ExponentialDensity&>(f).lambda;
        return std::exp(-0.5 * l * delta);
    }
    double v = integrate_semiinf(
        [&f, delta](double s) { return std::sqrt(f.pdf(s) * f.pdf(s + delta)); }, 1e-11);
    if (!(v > 0.0)) throw QuadratureFailure("Cond-4 normalizer vanished at gap " +
                                            std::to_string(delta));
    return v;
}

double DensityFamily::pdf(double delta, double x) const {
    if (x < 0.0) return 0.0;
    if (!integrable_ || delta == 0.0) return f0_->pdf(x);
    if (exp_closed_form_) return f0_->pdf(x);
    return std::sqrt(f0_->pdf(x) * f0_->pdf(x + delta)) / normalizer(delta);
}

double DensityFamily::cdf(double delta, double x) const {
    if (x <= 0.0) return 0.0;
    if (!integrable_ || delta == 0.0 || exp_closed_form_) return f0_->cdf(x);
    const SeedDensity& f = *f0_;
    double num = adaptive_simpson(
        [&f, delta](double s) { return std::sqrt(f.pdf(s) * f.pdf(s + delta)); }, 0.0, x, 1e-11);
    return std::min(1.0, num / normalizer(delta));
}

double DensityFamily::inv_cdf(double delta, double u) const {
    if (!(u > 0.0 && u < 1.0)) throw ConfigError("inv_cdf needs u in (0,1)");
    if (!integrable_ || delta == 0.0 || exp_closed_form_) return f0_->inv_cdf(u);
    double lo = 0.0, hi = f0_->effective_support();
    while (cdf(delta, hi) < u && hi < 1e9) hi *= 2.0;
    for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        (cdf(delta, mid) < u ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double DensityFamily::sample_residual(double delta, double m, double u) const {
    double Fm = cdf(delta, m);
    double tail_mass = 1.0 - Fm;
    if (tail_mass < 1e-300)
        throw TailUnderflow("residual conditioning mass underflow at m=" + std::to_string(m));
    double v = Fm + u * tail_mass;
    if (v >= 1.0) v = std::nextafter(1.0, 0.0);
    return inv_cdf(delta, v) - m;
}

DensityFamily make_integrable_density_family(std::shared_ptr<const SeedDensity> f0) {
    return DensityFamily::integrable(std::move(f0));
}

CertificateReport check_noexplosion(const DensityFamily& fam, double eps, double delta_max,
                                    int grid_points) {
    CertificateReport rep;
    rep.condition = "noexplosion";
    rep.delta_max = static_cast<int>(delta_max);
    if (eps < 0.0) throw ConfigError("eps must be nonnegative");
    if (eps == 0.0) {
        rep.passed = true;
        rep.value = 0.0;
        rep.note = "eps = 0 passes degenerately (warned)";
        return rep;
    }
    double sup = 0.0;
    for (int i = 0; i <= grid_points; ++i) {
        double d = delta_max * i / grid_points;
        double mass = fam.cdf(d, eps);
        if (mass > sup) {
            sup = mass;
            rep.witness = {static_cast<long long>(1e6 * d)};
            rep.witness_kind = "argmax delta (x 1e6)";
        }
    }
    rep.value = sup;
    rep.passed = sup < 1.0;
    rep.note = "grid certificate: sup_Delta mu_Delta([0,eps]) at eps=" + std::to_string(eps);
    return rep;
}

double flip_rate(double m, double delta, const DensityFamily& fam) {
    double t = fam.tail(delta, m);
    if (t <= 0.0) throw QuadratureFailure("tail integral vanished in flip_rate");
    return fam.pdf(delta, m) / t;
}

}  // namespace glpp
