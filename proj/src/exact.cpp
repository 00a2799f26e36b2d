#include "glpp/exact.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "glpp/stats.hpp"

namespace glpp {

LogValue LogValue::from_value(double v) {
    if (v < 0.0) throw ConfigError("LogValue is for nonnegative quantities");
    LogValue lv;
    lv.log = v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
    return lv;
}

// ---------------------------------------------------------------------------
// ScaledMatrix
// ---------------------------------------------------------------------------

ScaledMatrix ScaledMatrix::identity(int n) {
    ScaledMatrix m;
    m.n = n;
    m.a.assign(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

ScaledMatrix ScaledMatrix::mul(const ScaledMatrix& o) const {
    ScaledMatrix r;
    r.n = n;
    r.a.assign(static_cast<size_t>(n) * n, 0.0);
    r.logscale = logscale + o.logscale;
    for (int i = 0; i < n; ++i) {
        const double* ai = &a[static_cast<size_t>(i) * n];
        double* ri = &r.a[static_cast<size_t>(i) * n];
        for (int k = 0; k < n; ++k) {
            double v = ai[k];
            if (v == 0.0) continue;
            const double* ok = &o.a[static_cast<size_t>(k) * n];
            for (int j = 0; j < n; ++j) ri[j] += v * ok[j];
        }
    }
    r.rescale();
    return r;
}

void ScaledMatrix::rescale() {
    double mx = 0.0;
    for (double v : a) mx = std::max(mx, std::abs(v));
    if (mx > 0.0 && (mx > 1e150 || mx < 1e-150)) {
        double s = 1.0 / mx;
        for (double& v : a) v *= s;
        logscale += std::log(mx);
    }
}

LogValue ScaledMatrix::trace() const {
    KahanSum tr;
    for (int i = 0; i < n; ++i) tr.add(at(i, i));
    if (tr.value() <= 0.0) return LogValue{};
    return LogValue{std::log(tr.value()) + logscale};
}

// ---------------------------------------------------------------------------
// TransferKernel
// ---------------------------------------------------------------------------

TransferKernel::TransferKernel(const DiscreteMeasure& mu0, int T, double alpha)
    : mu0_(mu0), T_(T), alpha_(alpha) {
    if (T < 1) throw ConfigError("kernel cap must be positive");
    const int n = T + 1;
    U_ = ScaledMatrix::identity(n);
    D_ = ScaledMatrix::identity(n);
    P_ = ScaledMatrix::identity(n);
    std::fill(U_.a.begin(), U_.a.end(), 0.0);
    std::fill(D_.a.begin(), D_.a.end(), 0.0);
    std::fill(P_.a.begin(), P_.a.end(), 0.0);
    double la = std::log(alpha);
    for (int a = 0; a <= T; ++a) {
        for (int c = 0; c <= T; ++c) {
            if (c > a) U_.at(a, c) = std::exp(0.5 * mu0.log_at(c - a) + (c - a) * la);
            if (c < a) D_.at(a, c) = std::exp(0.5 * mu0.log_at(a - c) - (a - c) * la);
        }
    }
    for (int a = 0; a <= T; ++a)
        for (int c = a; c <= T; ++c) {
            double v = mu0.sqrt_overlap_shifted(a, c).value;
            P_.at(a, c) = v;
            P_.at(c, a) = v;
        }
    // eq.-MM normalizers at this alpha (may be +inf when the deformation
    // breaks summability; the unnormalized kernels stay usable on cycles)
    KahanSum nm, np;
    for (int v = 1; v <= mu0.cap(); ++v) {
        double s = std::exp(0.5 * mu0.log_at(v));
        nm.add(s * std::pow(alpha, v));
        np.add(s * std::pow(alpha, -v));
    }
    norm_minus_ = nm.value();
    norm_plus_ = np.value();
    if (alpha == 1.0) {
        Bounded S = mu0.sqrt_sum();
        norm_minus_ = norm_plus_ = S.value;
    }
}

double TransferKernel::m_minus(long long s, long long u) const {
    if (u <= s) return 0.0;
    return std::exp(0.5 * mu0_.log_at(static_cast<int>(u - s))) *
           std::pow(alpha_, static_cast<double>(u - s)) / norm_minus_;
}

double TransferKernel::m_plus(long long u, long long t) const {
    if (u <= t) return 0.0;
    return std::exp(0.5 * mu0_.log_at(static_cast<int>(u - t))) *
           std::pow(alpha_, -static_cast<double>(u - t)) / norm_plus_;
}

LogValue TransferKernel::bridge_sum(const Bridge& b, int mark) const {
    const int n = T_ + 1;
    ScaledMatrix acc = ScaledMatrix::identity(n);
    if (mark == 1) {
        for (int i = 0; i < n; ++i) acc.at(i, i) = static_cast<double>(i);
    } else if (mark == 2) {
        for (int i = 1; i < n; ++i) acc.at(i, i) = 0.0;
    }
    for (int i = 0; i < b.size(); ++i) {
        switch (b.pair_type(i)) {
            case PairType::SameSign:
                acc = acc.mul(b.step(i) == 1 ? U_ : D_);
                break;
            case PairType::Max:
                acc = acc.mul(P_);
                break;
            case PairType::Min:
                break;  // identity: equality of ages
        }
    }
    return acc.trace();
}

// ---------------------------------------------------------------------------
// W forms
// ---------------------------------------------------------------------------

LogValue weight_W(const Bridge& b, const std::vector<long long>& ages,
                  const DiscreteMeasure& mu0, int form) {
    if (form < 1 || form > 3) throw ConfigError("W form must be 1, 2 or 3");
    if (!validate_timed(b, ages)) throw ConfigError("invalid timed bridge in weight_W");
    Bounded S = mu0.sqrt_sum();  // throws on divergence
    double logS = std::log(S.value);
    double lg = 0.0;
    const int n = b.size();
    for (int i = 0; i < n; ++i) {
        long long a = ages[i];
        long long c = ages[b.mod(i + 1)];
        switch (b.pair_type(i)) {
            case PairType::SameSign:
                lg += 0.5 * mu0.log_at(static_cast<int>(std::llabs(c - a)));
                if (form == 1) lg -= logS;
                break;
            case PairType::Max: {
                int d = static_cast<int>(std::llabs(c - a));
                int m = static_cast<int>(std::min(a, c));
                if (form == 3) {
                    // folded factor sum_{s>=1} sqrt(mu0(s+t_i) mu0(s+t_{i+1}))
                    lg += std::log(mu0.sqrt_overlap_shifted(static_cast<int>(a),
                                                            static_cast<int>(c)).value);
                } else {
                    // split factors: the coupling sum over the cell below the
                    // maximum times the survival mass of mu_delta above min
                    double coupling = mu0.sqrt_overlap(d).value;
                    KahanSum surv_num;  // numerator of sum_{s>=1} mu_d(m+s), mu_d per Cond 1
                    for (int s = 1; s + m + d <= mu0.cap(); ++s)
                        surv_num.add(std::exp(0.5 * (mu0.log_at(m + s) + mu0.log_at(m + s + d))));
                    double survival = surv_num.value() / coupling;
                    lg += std::log(coupling) + std::log(survival);
                    if (form == 1) lg -= 2.0 * logS;
                }
                break;
            }
            case PairType::Min:
                break;
        }
    }
    return LogValue{lg};
}

// ---------------------------------------------------------------------------
// Partition sums and the stationary law
// ---------------------------------------------------------------------------

namespace {

struct BridgeSums {
    LogValue w_full, w_mid, w_small;  // caps T, T-pad, T-2*pad
};

// truncation bound from the observed geometric decay of cap increments
Bounded bound_from_caps(const BridgeSums& s) {
    double v = s.w_full.value();
    if (v == 0.0) return {0.0, 0.0};
    double vm = s.w_mid.value(), vs = s.w_small.value();
    double d2 = v - vm, d1 = vm - vs;
    if (d2 <= 0.0) return {v, 1e-15 * v};
    if (d1 <= 0.0 || d2 >= d1)
        throw TruncationNotConverged("cap increments are not decaying");
    double rho = d2 / d1;
    double bound = 2.0 * d2 * rho / (1.0 - rho) + 1e-15 * v;
    return {v, bound};
}

}  // namespace

Bounded partition_Z(int L, const DiscreteMeasure& mu0, int T_cap) {
    if (L > 6) throw CapExceeded("partition_Z supports L <= 6");
    mu0.sqrt_sum();
    const int pad = std::max(4, T_cap / 8);
    if (T_cap <= 2 * pad + 2) throw ConfigError("cap too small for convergence control");
    TransferKernel full(mu0, T_cap), mid(mu0, T_cap - pad), small(mu0, T_cap - 2 * pad);
    KahanSum zf, zm, zs;
    for (const Bridge& b : enumerate_bridges(L)) {
        zf.add(full.bridge_sum(b).value());
        zm.add(mid.bridge_sum(b).value());
        zs.add(small.bridge_sum(b).value());
    }
    return bound_from_caps({LogValue::from_value(zf.value()), LogValue::from_value(zm.value()),
                            LogValue::from_value(zs.value())});
}

ExactLaw stationary_law(int L, const DiscreteMeasure& mu0, int T_cap, double alpha) {
    if (L > 6) throw CapExceeded("stationary_law supports L <= 6");
    mu0.sqrt_sum();
    const int pad = std::max(4, T_cap / 8);
    if (T_cap <= 2 * pad + 2) throw ConfigError("cap too small for convergence control");
    TransferKernel full(mu0, T_cap, alpha), mid(mu0, T_cap - pad, alpha),
        small(mu0, T_cap - 2 * pad, alpha);
    ExactLaw law;
    law.L = L;
    law.mu0_label = mu0.label();
    law.T_cap = T_cap;
    law.bridges = enumerate_bridges(L);
    KahanSum z;
    double zbound = 0.0;
    for (const Bridge& b : law.bridges) {
        BridgeSums s{full.bridge_sum(b), mid.bridge_sum(b), small.bridge_sum(b)};
        Bounded w = bound_from_caps(s);
        law.weights.push_back(w);
        z.add(w.value);
        zbound += w.bound;
    }
    law.Z = {z.value(), zbound};
    law.nu.resize(law.bridges.size());
    double tv = 0.0;
    for (size_t i = 0; i < law.bridges.size(); ++i) {
        law.nu[i] = law.weights[i].value / law.Z.value;
        tv += law.weights[i].bound / law.Z.value;
    }
    law.truncation_bound = tv;
    return law;
}

double ExactLaw::nu_of(const Bridge& b) const {
    for (size_t i = 0; i < bridges.size(); ++i)
        if (bridges[i] == b) return nu[i];
    throw ConfigError("bridge not in law: " + b.code());
}

double ExactLaw::nu_tilde(const TimedBridge& tb, const DiscreteMeasure& mu0) const {
    return weight_W(tb.bridge, tb.ages, mu0, 3).value() / Z.value;
}

std::string ExactLaw::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"L\":" << L << ",\"mu0\":\"" << mu0_label << "\",\"T_cap\":" << T_cap
       << ",\"Z\":{\"value\":" << Z.value << ",\"bound\":" << Z.bound << "},\"nu\":{";
    for (size_t i = 0; i < bridges.size(); ++i) {
        os << (i ? "," : "") << "\"" << bridges[i].code() << "\":{\"p\":" << nu[i]
           << ",\"bound\":" << weights[i].bound / Z.value << "}";
    }
    os << "},\"truncation_bound\":" << truncation_bound << "}";
    return os.str();
}

// ---------------------------------------------------------------------------
// Speeds
// ---------------------------------------------------------------------------

namespace {

// open-chain sums of eq. int-speed-alt: variables t_1..t_L >= 1 with
// A(t,t') = sum_{s < min} sqrt(mu0(t-s) mu0(t'-s)) = N(|t-t'|) and boundary
// weights sqrt(mu0(t_1)), sqrt(mu0(t_L)); `marked` inserts a factor t_1
std::pair<double, double> alt_chain(const DiscreteMeasure& mu0, int L, int T) {
    std::vector<double> Nd(T + 1);
    for (int d = 0; d <= T; ++d) Nd[d] = mu0.sqrt_overlap(d).value;
    std::vector<double> sq(T + 1, 0.0);
    for (int t = 1; t <= T; ++t) sq[t] = std::exp(0.5 * mu0.log_at(t));
    std::vector<double> vec(sq);
    for (int step = 0; step < L - 1; ++step) {
        std::vector<double> nxt(T + 1, 0.0);
        for (int t = 1; t <= T; ++t) {
            KahanSum acc;
            for (int u = 1; u <= T; ++u) acc.add(Nd[std::abs(t - u)] * vec[u]);
            nxt[t] = acc.value();
        }
        vec.swap(nxt);
    }
    KahanSum num, den;
    for (int t = 1; t <= T; ++t) {
        num.add(sq[t] * vec[t]);
        den.add(t * sq[t] * vec[t]);
    }
    return {num.value(), den.value()};
}

}  // namespace

SpeedReport speed_exact(int L, const DiscreteMeasure& mu0, int T_cap) {
    mu0.sqrt_sum();
    const int pad = std::max(4, T_cap / 8);
    if (T_cap <= 2 * pad + 2) throw ConfigError("cap too small for convergence control");
    SpeedReport rep;

    // int-speed route and stationary zero-age rate from the cyclic sums
    auto eval_cyclic = [&](int cap) {
        TransferKernel k(mu0, cap);
        KahanSum z, zden, zzero;
        for (const Bridge& b : enumerate_bridges(L)) {
            z.add(k.bridge_sum(b, 0).value());
            zden.add(k.bridge_sum(b, 1).value());
            zzero.add(k.bridge_sum(b, 2).value());
        }
        double zz = z.value();
        return std::array<double, 2>{zz / (2.0 * zden.value() + zz), zzero.value() / zz};
    };
    auto c_full = eval_cyclic(T_cap);
    auto c_mid = eval_cyclic(T_cap - pad);
    auto c_small = eval_cyclic(T_cap - 2 * pad);
    auto bnd = [](double f, double m, double s) {
        double d2 = std::abs(f - m), d1 = std::abs(m - s);
        if (d2 == 0.0) return 1e-15 * std::abs(f) + 1e-300;
        if (d1 <= d2) throw TruncationNotConverged("speed cap increments not decaying");
        double rho = d2 / d1;
        return 2.0 * d2 * rho / (1.0 - rho) + 1e-15 * std::abs(f);
    };
    rep.c_via_int_speed = {c_full[0], bnd(c_full[0], c_mid[0], c_small[0])};
    rep.c_zero_age = {c_full[1], bnd(c_full[1], c_mid[1], c_small[1])};

    auto [nf, df] = alt_chain(mu0, L, T_cap);
    auto [nm, dm] = alt_chain(mu0, L, T_cap - pad);
    auto [ns, ds] = alt_chain(mu0, L, T_cap - 2 * pad);
    double af = nf / df, am = nm / dm, as = ns / ds;
    rep.c_via_alt = {af, bnd(af, am, as)};
    return rep;
}

std::string SpeedReport::to_json() const {
    std::ostringstream os;
    os.precision(17);
    os << "{\"c_via_int_speed\":{\"value\":" << c_via_int_speed.value
       << ",\"bound\":" << c_via_int_speed.bound << "},\"c_via_alt\":{\"value\":"
       << c_via_alt.value << ",\"bound\":" << c_via_alt.bound
       << "},\"c_zero_age\":{\"value\":" << c_zero_age.value
       << ",\"bound\":" << c_zero_age.bound << "}}";
    return os.str();
}

std::map<std::string, double> geometric_closed_form(int L, double p) {
    if (!(p > 0.0 && p < 1.0)) throw ConfigError("p must be in (0,1)");
    if (L > 8) throw CapExceeded("geometric_closed_form supports L <= 8");
    std::map<std::string, double> nu;
    double Z = 0.0;
    for (const Bridge& b : enumerate_bridges(L)) {
        double w = std::pow(1.0 - p, -local_extrema(b).k());
        nu[b.code()] = w;
        Z += w;
    }
    for (auto& [k, v] : nu) v /= Z;
    return nu;
}

double lemma_comb(int k, double q) {
    if (k < 1 || !(q > 0.0 && q < 1.0)) throw ConfigError("lemma_comb domain");
    return std::pow(q / (1.0 - q), k);
}

unsigned long long lemma_sumcomb(int n, int k) {
    if (k > n || k < 0) throw ConfigError("lemma_sumcomb needs 0 <= k <= n");
    // binom(n+1, k+1) exactly
    unsigned long long r = 1;
    int kk = std::min(k + 1, n - k);
    for (int i = 1; i <= kk; ++i)
        r = r * static_cast<unsigned long long>(n + 1 - kk + i) / i;
    return r;
}

// ---------------------------------------------------------------------------
// Continuous machinery (Prop int-c)
// ---------------------------------------------------------------------------

namespace {

double peak_integral(const DensityFamily& fam, double a, double c) {
    const SeedDensity& f = fam.seed();
    if (auto* e = dynamic_cast<const ExponentialDensity*>(&f))
        return std::exp(-0.5 * e->lambda * (a + c));
    return integrate_semiinf(
        [&f, a, c](double s) { return std::sqrt(f.pdf(s + a) * f.pdf(s + c)); }, 1e-11);
}

// segment decomposition of a bridge: per valley, (ascent length, descent length)
struct Segments {
    std::vector<int> minima;   // position of each min pair
    std::vector<int> maxima;   // following max pair
    std::vector<int> up_len;   // edges in the ascent
    std::vector<int> dn_len;   // edges in the descent
};

Segments decompose(const Bridge& b) {
    ExtremaIndex e = local_extrema(b);
    Segments s;
    int k = e.k();
    for (int l = 0; l < k; ++l) {
        int m = e.minima[l];
        // the max following m cyclically
        int M = -1;
        for (int j = 1; j <= b.size(); ++j) {
            int cand = b.mod(m + j);
            if (b.pair_type(cand) == PairType::Max) { M = cand; break; }
        }
        int mnext = -1;
        for (int j = 1; j <= b.size(); ++j) {
            int cand = b.mod(M + j);
            if (b.pair_type(cand) == PairType::Min) { mnext = cand; break; }
        }
        s.minima.push_back(m);
        s.maxima.push_back(M);
        s.up_len.push_back(b.mod(M - m) == 0 ? b.size() : b.mod(M - m));
        s.dn_len.push_back(b.mod(mnext - M) == 0 ? b.size() : b.mod(mnext - M));
    }
    return s;
}

// 64-point Gauss-Legendre nodes/weights on [0,1]
void gauss_legendre01(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double z1 = z;
            z = z1 - p0 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        x[i] = 0.5 * (1.0 - z);
        w[i] = 1.0 / ((1.0 - z * z) * pp * pp);
    }
}

}  // namespace

double continuous_weight(const Bridge& b, const std::vector<double>& ages,
                         const DensityFamily& fam) {
    if (!validate_timed(b, ages)) throw ConfigError("invalid timed bridge");
    const SeedDensity& f = fam.seed();
    double w = 1.0;
    for (int i = 0; i < b.size(); ++i) {
        double a = ages[i], c = ages[b.mod(i + 1)];
        switch (b.pair_type(i)) {
            case PairType::SameSign:
                w *= std::sqrt(f.pdf(std::abs(c - a)));
                break;
            case PairType::Max:
                w *= peak_integral(fam, a, c);
                break;
            case PairType::Min:
                break;
        }
    }
    return w;
}

double continuous_density_g(const Bridge& b, const std::vector<double>& ages,
                            const DensityFamily& fam, double Z) {
    return continuous_weight(b, ages, fam) / Z;
}

namespace {

// rebuilds the full age vector from free coordinates: k valley values, then
// the strict up increments per segment, then the strict down increments
std::vector<double> ages_from_free(const Bridge& b, const Segments& seg,
                                   const std::vector<double>& vars) {
    const int k = static_cast<int>(seg.minima.size());
    std::vector<double> ages(b.size(), 0.0);
    int inc = k;
    for (int l = 0; l < k; ++l) {
        double v = vars[l];
        int m = seg.minima[l];
        ages[m] = v;
        ages[b.mod(m + 1)] = v;
        double cur = v;
        for (int j = 2; j <= seg.up_len[l]; ++j) {
            cur += vars[inc++];
            ages[b.mod(m + j)] = cur;
        }
    }
    for (int l = 0; l < k; ++l) {
        int M = seg.maxima[l];
        int dn = seg.dn_len[l];
        int mnext = b.mod(M + dn);  // next valley; its value is already set
        double cur = ages[mnext];
        for (int j = 1; j <= dn - 1; ++j) {
            cur += vars[inc++];
            ages[b.mod(mnext - j)] = cur;
        }
    }
    return ages;
}

double weight_of_ages(const Bridge& b, const std::vector<double>& ages,
                      const DensityFamily& fam) {
    const SeedDensity& f = fam.seed();
    double w = 1.0;
    for (int i = 0; i < b.size(); ++i) {
        double a = ages[i], c = ages[b.mod(i + 1)];
        switch (b.pair_type(i)) {
            case PairType::SameSign:
                w *= std::sqrt(f.pdf(std::abs(c - a)));
                break;
            case PairType::Max:
                w *= peak_integral(fam, a, c);
                break;
            case PairType::Min:
                break;
        }
    }
    return w;
}

// integrates the continuous weight of one bridge over its free coordinates
// (valleys + strict increments), mapped to (0,1)^dim with x = -scale*ln(1-u)
double bridge_mass(const Bridge& b, const DensityFamily& fam, int order, double scale) {
    Segments seg = decompose(b);
    const int k = static_cast<int>(seg.minima.size());
    const int dim = b.size() - k;
    std::vector<double> gx, gw;
    gauss_legendre01(order, gx, gw);
    std::vector<double> vars(dim, 0.0);
    double total = 0.0;
    std::function<void(int, double)> rec = [&](int d, double wacc) {
        if (d == dim) {
            total += wacc * weight_of_ages(b, ages_from_free(b, seg, vars), fam);
            return;
        }
        for (int q = 0; q < order; ++q) {
            double u = gx[q];
            double x = -scale * std::log1p(-u);  // (0,inf)
            double jac = scale / (1.0 - u);
            vars[d] = x;
            rec(d + 1, wacc * gw[q] * jac);
        }
    };
    rec(0, 1.0);
    return total;
}

}  // namespace

std::map<std::string, double> continuous_bridge_law(int L, const DensityFamily& fam) {
    if (L > 2) throw CapExceeded("continuous_bridge_law quadrature supports L <= 2");
    std::map<std::string, double> masses;
    double Z = 0.0;
    double scale = 1.0;
    if (auto* e = dynamic_cast<const ExponentialDensity*>(&fam.seed()))
        scale = 1.0 / e->lambda;
    for (const Bridge& b : enumerate_bridges(L)) {
        double m = bridge_mass(b, fam, 48, scale);
        masses[b.code()] = m;
        Z += m;
    }
    for (auto& [k, v] : masses) v /= Z;
    return masses;
}

Bounded continuous_Z(int L, const DensityFamily& fam, std::uint64_t mc_seed) {
    double scale = 1.0;
    if (auto* e = dynamic_cast<const ExponentialDensity*>(&fam.seed()))
        scale = 1.0 / e->lambda;
    if (L <= 2) {
        KahanSum z48, z32;
        for (const Bridge& b : enumerate_bridges(L)) {
            z48.add(bridge_mass(b, fam, 48, scale));
            z32.add(bridge_mass(b, fam, 32, scale));
        }
        double bound = std::abs(z48.value() - z32.value()) * 4.0 + 1e-13 * z48.value();
        if (bound > 1e-6 * std::max(1.0, z48.value()))
            throw QuadratureFailure("continuous_Z quadrature did not settle");
        return {z48.value(), bound};
    }
    if (L != 3) throw CapExceeded("continuous_Z supports L <= 3");
    // Monte Carlo with exponential proposals on the free coordinates
    Rng rng(mc_seed);
    KahanSum acc, acc2;
    const long long n = 400000;
    std::vector<Bridge> bs = enumerate_bridges(L);
    for (long long it = 0; it < n; ++it) {
        const Bridge& b = bs[rng() % bs.size()];
        Segments seg = decompose(b);
        const int k = static_cast<int>(seg.minima.size());
        const int dim = b.size() - k;
        std::vector<double> vars(dim);
        double logq = 0.0;
        for (int d = 0; d < dim; ++d) {
            double u = uniform01(rng);
            vars[d] = -scale * std::log1p(-u);
            logq += -std::log(scale) - vars[d] / scale;
        }
        double w = weight_of_ages(b, ages_from_free(b, seg, vars), fam);
        double est = w / std::exp(logq) * static_cast<double>(bs.size());
        acc.add(est);
        acc2.add(est * est);
    }
    double mean = acc.value() / n;
    double var = std::max(0.0, acc2.value() / n - mean * mean);
    return {mean, 3.0 * std::sqrt(var / n)};
}

}  // namespace glpp
