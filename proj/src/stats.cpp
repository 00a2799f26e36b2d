#include "glpp/stats.hpp"

#include <algorithm>
#include <cmath>

namespace glpp {

double tv_distance(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size())
        throw SupportMismatch("tv_distance needs matched supports (" +
                              std::to_string(p.size()) + " vs " + std::to_string(q.size()) + ")");
    KahanSum acc;
    for (size_t i = 0; i < p.size(); ++i) acc.add(std::abs(p[i] - q[i]));
    return 0.5 * acc.value();
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw InsufficientSamples("ks_statistic needs samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        double F = cdf(samples[i]);
        d = std::max(d, std::abs(F - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - F));
    }
    return d;
}

// regularized incomplete gamma Q(a,x), series + continued fraction
static double gamma_q_series_p(double a, double x) {
    double ap = a, sum = 1.0 / a, del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

static double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw ConfigError("gamma_q domain");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_q_series_p(a, x);
    return gamma_q_cf(a, x);
}

double chi2_pvalue(double stat, int dof) {
    return gamma_q(0.5 * dof, 0.5 * stat);
}

static double simpson_rec(const std::function<double(double)>& f, double a, double b,
                          double fa, double fm, double fb, double whole, double tol,
                          int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0) throw QuadratureFailure("max recursion depth reached");
    if (std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

double integrate_semiinf(const std::function<double(double)>& f, double tol) {
    auto g = [&f](double t) {
        if (t >= 1.0) return 0.0;
        double x = t / (1.0 - t);
        double jac = 1.0 / ((1.0 - t) * (1.0 - t));
        double v = f(x) * jac;
        return std::isfinite(v) ? v : 0.0;
    };
    // split at t=0.5 (x=1) to help the adaptor over the two regimes
    return adaptive_simpson(g, 0.0, 0.5, 0.5 * tol) +
           adaptive_simpson(g, 0.5, 1.0 - 1e-12, 0.5 * tol);
}

void BatchMeans::add(double x, long long index, long long total) {
    int nb = static_cast<int>(batches.size());
    int b = static_cast<int>((index * nb) / std::max<long long>(total, 1));
    if (b >= nb) b = nb - 1;
    batches[b] += x;
    counts[b] += 1;
}

double BatchMeans::mean() const {
    double s = 0.0;
    long long n = 0;
    for (size_t i = 0; i < batches.size(); ++i) {
        s += batches[i];
        n += counts[i];
    }
    return n ? s / n : 0.0;
}

double BatchMeans::se() const {
    std::vector<double> m;
    for (size_t i = 0; i < batches.size(); ++i)
        if (counts[i] > 0) m.push_back(batches[i] / counts[i]);
    if (m.size() < 2) return 0.0;
    double mu = 0.0;
    for (double v : m) mu += v;
    mu /= m.size();
    double var = 0.0;
    for (double v : m) var += (v - mu) * (v - mu);
    var /= (m.size() - 1);
    return std::sqrt(var / m.size());
}

double binom(long long n, long long k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace glpp
