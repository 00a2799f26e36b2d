#ifndef GLPP_ORACLE_HPP
#define GLPP_ORACLE_HPP

#include <map>
#include <string>
#include <vector>

#include "glpp/bridges.hpp"
#include "glpp/chain.hpp"
#include "glpp/common.hpp"
#include "glpp/measures.hpp"

namespace glpp {

enum class ClosurePolicy { LeakRenormalize, ReflectToCap };

// ---------------------------------------------------------------------------
// Truncated transition matrix over the enumerated timed bridges.  Entries are
// recomputed from the case analysis via chain::transition_prob; the oracle
// never touches the kernel-contraction machinery.
// ---------------------------------------------------------------------------

struct TruncatedKernel {
    int L = 0;
    int T_cap = 0;
    ClosurePolicy policy = ClosurePolicy::LeakRenormalize;
    std::vector<TimedBridge> states;
    std::map<TimedBridge, int> index;
    // CSR sparse rows
    std::vector<int> row_ptr;
    std::vector<int> col;
    std::vector<double> val;
    std::vector<double> row_leak;   // out-of-cap mass per row before closure

    std::string to_coordinate_csv() const;
};

TruncatedKernel truncated_transition_matrix(int L, const MeasureFamily& fam, int T_cap,
                                            ClosurePolicy policy = ClosurePolicy::LeakRenormalize);

// pi with ||pi K - pi||_1 <= tol; throws NoConvergence
std::vector<double> power_iterate_stationary(const TruncatedKernel& k, double tol,
                                             long long max_iters, long long* iters_out = nullptr);

// stationary-weighted leak sum_i pi_i * leak_i; the default gate is 1e-8
double stationary_leak(const TruncatedKernel& k, const std::vector<double>& pi);

// restrict a distribution over `states` to those with max age <= window and
// renormalize; returns the restricted vector and the matching state list
std::pair<std::vector<double>, std::vector<TimedBridge>> restrict_to_window(
    const std::vector<TimedBridge>& states, const std::vector<double>& p, long long window);

}  // namespace glpp

#endif
