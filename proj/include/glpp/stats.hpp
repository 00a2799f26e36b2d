#ifndef GLPP_STATS_HPP
#define GLPP_STATS_HPP

#include <functional>
#include <vector>

#include "glpp/common.hpp"

namespace glpp {

// total variation distance between two finite distributions on a shared support
double tv_distance(const std::vector<double>& p, const std::vector<double>& q);

// one-sample Kolmogorov-Smirnov statistic against a cdf
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

// chi-square survival p-value, k degrees of freedom (regularized upper gamma)
double chi2_pvalue(double stat, int dof);
double gamma_q(double a, double x);

// adaptive Simpson on [a,b]
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth = 40);

// integral over (0, inf) via x = t/(1-t); integrand must decay
double integrate_semiinf(const std::function<double(double)>& f, double tol);

// batch-means standard error for a correlated scalar stream
struct BatchMeans {
    explicit BatchMeans(int n_batches = 64) : batches(n_batches, 0.0), counts(n_batches, 0) {}
    void add(double x, long long index, long long total);
    double mean() const;
    double se() const;
    std::vector<double> batches;
    std::vector<long long> counts;
};

// exact binomial coefficient as double (stable for our ranges)
double binom(long long n, long long k);

}  // namespace glpp

#endif
