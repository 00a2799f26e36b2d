#ifndef GLPP_PCA_HPP
#define GLPP_PCA_HPP

#include <string>
#include <vector>

#include "glpp/bridges.hpp"
#include "glpp/common.hpp"
#include "glpp/exact.hpp"
#include "glpp/growth.hpp"
#include "glpp/measures.hpp"

namespace glpp {

// ---------------------------------------------------------------------------
// The transition T(a,b;c) = mu_{|b-a|}(c - max(a,b)); zero unless c > max(a,b)
// ---------------------------------------------------------------------------

struct PcaTransition {
    const MeasureFamily& fam;
    double operator()(long long a, long long b, long long c) const {
        long long m = std::max(a, b);
        if (c <= m) return 0.0;
        return fam.at(static_cast<int>(std::llabs(b - a)))(static_cast<int>(c - m));
    }
    // sum over c on [max+1, max+cap] plus tail remainder
    double row_mass(long long a, long long b, int cap) const;
};

// ---------------------------------------------------------------------------
// Residual reports for the algebraic identities
// ---------------------------------------------------------------------------

struct ResidualReport {
    std::string identity;
    double max_residual = 0.0;
    std::vector<long long> witness;
    std::string grid;
    std::string to_json() const;
};

// eq. stable: (M- M+)(s;t) T(s,t;u) = M-(s;u) M+(u;t) on the grid
// s,t <= grid_st, u <= grid_u
ResidualReport check_stable_identity(const DiscreteMeasure& mu0, int grid_st, int grid_u);

// eq. Belyaev eight-factor identity on the grid (any discrete family)
ResidualReport check_belyaev(const MeasureFamily& fam, int grid_st, int grid_u);

// the specialization of Belyaev at s=t=0, s'=t'=Delta, u=Delta+1, u'=Delta+v:
// mu0(D+1) mu0(1) mu_D(v)^2 = mu0(v) mu0(D+v) mu_D(1)^2
ResidualReport derive_cond_int(const MeasureFamily& fam, int delta_max, int v_max);

// negative control: perturbs mu_{delta}(entry) by eps and renormalizes
MeasureFamily perturbed_family(const DiscreteMeasure& mu0, int delta, int entry, double eps);

// ---------------------------------------------------------------------------
// Space-time iteration of the PCA from the zero line (Z/LZ columns).  With a
// shared DrawSource keyed by cylinder cells, equals cylinder growth through
// Phi (the executable content of the model equivalence).
// ---------------------------------------------------------------------------

std::vector<std::vector<long long>> iterate_space_time(int L, const MeasureFamily& fam,
                                                       int rows, DrawSource& draws);
std::vector<std::vector<long long>> iterate_space_time(int L, const MeasureFamily& fam,
                                                       int rows, std::uint64_t seed);

// ---------------------------------------------------------------------------
// eq. HAT-bridges: product of M+- entries along a cyclic bridge whose vertex
// values are eta (the PCA heights), with the alpha-deformed kernels
// ---------------------------------------------------------------------------

LogValue hzmm_bridge_weight(const Bridge& b, const std::vector<long long>& eta,
                            const TransferKernel& kernel);

// cross-route evaluation of W form 1 through the kernel product: sums the
// free below-maximum vertices of the PCA bridge and multiplies the survival
// factors; equals weight_W(..., form=1)
LogValue kernel_product_form1(const Bridge& b, const std::vector<long long>& ages,
                              const DiscreteMeasure& mu0);

}  // namespace glpp

#endif
