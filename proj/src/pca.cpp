#include "glpp/pca.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace glpp {

double PcaTransition::row_mass(long long a, long long b, int cap) const {
    const DiscreteMeasure& mu = fam.at(static_cast<int>(std::llabs(b - a)));
    KahanSum acc;
    for (int i = 1; i <= std::min(cap, mu.cap()); ++i) acc.add(mu(i));
    return acc.value() + mu.tail_remainder();
}

std::string ResidualReport::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"identity\":\"" << identity << "\",\"max_residual\":" << max_residual
       << ",\"grid\":\"" << grid << "\",\"witness\":[";
    for (size_t i = 0; i < witness.size(); ++i) os << (i ? "," : "") << witness[i];
    os << "]}";
    return os.str();
}

ResidualReport check_stable_identity(const DiscreteMeasure& mu0, int grid_st, int grid_u) {
    MeasureFamily fam = MeasureFamily::integrable(mu0);
    double S = mu0.sqrt_sum().value;
    ResidualReport rep;
    rep.identity = "stable";
    rep.grid = "s,t<=" + std::to_string(grid_st) + ",u<=" + std::to_string(grid_u);
    for (long long s = 0; s <= grid_st; ++s)
        for (long long t = 0; t <= grid_st; ++t) {
            double MM = mu0.sqrt_overlap(static_cast<int>(std::llabs(t - s))).value / (S * S);
            const DiscreteMeasure& mu = fam.at(static_cast<int>(std::llabs(t - s)));
            for (long long u = std::max(s, t) + 1; u <= grid_u; ++u) {
                double lhs = MM * mu(static_cast<int>(u - std::max(s, t)));
                double rhs = std::exp(0.5 * (mu0.log_at(static_cast<int>(u - s)) +
                                             mu0.log_at(static_cast<int>(u - t)))) /
                             (S * S);
                double r = std::abs(lhs - rhs);
                if (r > rep.max_residual) {
                    rep.max_residual = r;
                    rep.witness = {s, t, u};
                }
            }
        }
    return rep;
}

ResidualReport check_belyaev(const MeasureFamily& fam, int grid_st, int grid_u) {
    PcaTransition T{fam};
    ResidualReport rep;
    rep.identity = "belyaev";
    rep.grid = "s,t,s',t'<=" + std::to_string(grid_st) + ",u,u'<=" + std::to_string(grid_u);
    for (long long s = 0; s <= grid_st; ++s)
        for (long long t = 0; t <= grid_st; ++t)
            for (long long s2 = 0; s2 <= grid_st; ++s2)
                for (long long t2 = 0; t2 <= grid_st; ++t2) {
                    long long base = std::max({s, t, s2, t2});
                    for (long long u = base + 1; u <= grid_u; ++u)
                        for (long long u2 = base + 1; u2 <= grid_u; ++u2) {
                            double lhs = T(s, t, u) * T(s2, t2, u) * T(s2, t, u2) * T(s, t2, u2);
                            double rhs = T(s2, t2, u2) * T(s, t, u2) * T(s, t2, u) * T(s2, t, u);
                            double r = std::abs(lhs - rhs);
                            if (r > rep.max_residual) {
                                rep.max_residual = r;
                                rep.witness = {s, t, s2, t2, u, u2};
                            }
                        }
                }
    return rep;
}

ResidualReport derive_cond_int(const MeasureFamily& fam, int delta_max, int v_max) {
    ResidualReport rep;
    rep.identity = "cond-int-from-belyaev";
    rep.grid = "delta<=" + std::to_string(delta_max) + ",v<=" + std::to_string(v_max);
    const DiscreteMeasure& mu0 = fam.at(0);
    for (int d = 0; d <= delta_max; ++d) {
        const DiscreteMeasure& mud = fam.at(d);
        for (int v = 1; v <= v_max; ++v) {
            double lhs = mu0(d + 1) * mu0(1) * mud(v) * mud(v);
            double rhs = mu0(v) * mu0(d + v) * mud(1) * mud(1);
            double r = std::abs(lhs - rhs);
            if (r > rep.max_residual) {
                rep.max_residual = r;
                rep.witness = {d, v};
            }
        }
    }
    return rep;
}

MeasureFamily perturbed_family(const DiscreteMeasure& mu0, int delta, int entry, double eps) {
    MeasureFamily base = MeasureFamily::integrable(mu0);
    std::vector<DiscreteMeasure> table;
    int dmax = std::max(delta + 2, 12);
    for (int d = 0; d <= dmax; ++d) {
        const DiscreteMeasure& m = base.at(d);
        if (d != delta) {
            table.push_back(m);
            continue;
        }
        std::vector<double> pmf(m.cap());
        for (int i = 1; i <= m.cap(); ++i) pmf[i - 1] = m(i);
        pmf[entry - 1] += eps;
        double tot = 0.0;
        for (double x : pmf) tot += x;
        double rem = m.tail_remainder() / (tot + m.tail_remainder());
        for (double& x : pmf) x /= (tot + m.tail_remainder());
        table.push_back(DiscreteMeasure(std::move(pmf), rem, -1.0,
                                        "perturbed@" + std::to_string(d)));
    }
    return MeasureFamily::custom(std::move(table));
}

std::vector<std::vector<long long>> iterate_space_time(int L, const MeasureFamily& fam,
                                                       int rows, DrawSource& draws) {
    if (L > 64 || rows > 10000) throw CapExceeded("iterate_space_time grid too large");
    std::vector<std::vector<long long>> eta;
    eta.reserve(rows + 1);
    eta.emplace_back(L, 0);
    for (int y = 0; y < rows; ++y) {
        const std::vector<long long>& prev = eta.back();
        std::vector<long long> cur(L);
        for (int x = 0; x < L; ++x) {
            long long a = prev[x];
            long long b = prev[(x + 1) % L];
            long long delta = std::llabs(b - a);
            // the cell's draw is keyed by its cylinder coordinates through Phi
            auto [cx, cy] = phi_map(x, y + 1, L);
            double u = draws.uniform(cx, cy);
            cur[x] = std::max(a, b) + fam.at(static_cast<int>(delta)).sample(u);
        }
        eta.push_back(std::move(cur));
    }
    return eta;
}

std::vector<std::vector<long long>> iterate_space_time(int L, const MeasureFamily& fam,
                                                       int rows, std::uint64_t seed) {
    CounterDrawSource src(seed);
    return iterate_space_time(L, fam, rows, src);
}

LogValue hzmm_bridge_weight(const Bridge& b, const std::vector<long long>& eta,
                            const TransferKernel& kernel) {
    if (static_cast<int>(eta.size()) != b.size())
        throw ConfigError("eta length must match bridge length");
    double lg = 0.0;
    for (int i = 0; i < b.size(); ++i) {
        long long a = eta[i], c = eta[b.mod(i + 1)];
        double f = b.step(i) == 1 ? kernel.m_plus(a, c) : kernel.m_minus(a, c);
        if (f <= 0.0) return LogValue{};
        lg += std::log(f);
    }
    return LogValue{lg};
}

LogValue kernel_product_form1(const Bridge& b, const std::vector<long long>& ages,
                              const DiscreteMeasure& mu0) {
    if (!validate_timed(b, ages)) throw ConfigError("invalid timed bridge");
    double S = mu0.sqrt_sum().value;
    double logS = std::log(S);
    double lg = 0.0;
    const int n = b.size();
    for (int i = 0; i < n; ++i) {
        long long a = ages[i], c = ages[b.mod(i + 1)];
        switch (b.pair_type(i)) {
            case PairType::SameSign:
                // single M+- entry: depth difference along the zigzag step
                lg += 0.5 * mu0.log_at(static_cast<int>(std::llabs(c - a))) - logS;
                break;
            case PairType::Max: {
                // free vertex below the maximum: contract M+ into M- over all
                // depths u > max(ages), then multiply the survival factor
                long long mx = std::max(a, c);
                KahanSum contraction;
                for (long long u = mx + 1; u <= mx + mu0.cap(); ++u) {
                    double f = std::exp(0.5 * (mu0.log_at(static_cast<int>(u - a)) +
                                               mu0.log_at(static_cast<int>(u - c))));
                    if (f == 0.0 && u > mx + mu0.cap()) break;
                    contraction.add(f);
                }
                int d = static_cast<int>(std::llabs(c - a));
                int m = static_cast<int>(std::min(a, c));
                // survival: sum_{s>=1} mu_d(m+s) with mu_d per Cond 1
                KahanSum surv;
                for (int s = 1; s + m + d <= mu0.cap(); ++s)
                    surv.add(std::exp(0.5 * (mu0.log_at(m + s) + mu0.log_at(m + s + d))));
                double Nd = mu0.sqrt_overlap(d).value;
                lg += std::log(contraction.value()) - 2.0 * logS +
                      std::log(surv.value() / Nd);
                break;
            }
            case PairType::Min:
                break;
        }
    }
    return LogValue{lg};
}

}  // namespace glpp
