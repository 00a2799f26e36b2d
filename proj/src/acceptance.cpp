#include "glpp/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "glpp/chain.hpp"
#include "glpp/exact.hpp"
#include "glpp/growth.hpp"
#include "glpp/measures.hpp"
#include "glpp/oracle.hpp"
#include "glpp/pca.hpp"
#include "glpp/stats.hpp"

namespace glpp {

namespace {

struct Check {
    bool ok = true;
    std::ostringstream detail;
    void expect(bool cond, const std::string& what) {
        if (!cond) ok = false;
        detail << (cond ? "[ok] " : "[FAIL] ") << what << "; ";
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// random valid timed bridge built from the segment structure
TimedBridge random_timed(const Bridge& b, Rng& rng, int age_scale) {
    ExtremaIndex ex = local_extrema(b);
    const int n = b.size();
    std::vector<long long> ages(n, -1);
    auto geom = [&](int scale) {
        return static_cast<long long>(std::floor(-scale * std::log(uniform01(rng)) / 2.0));
    };
    for (int m : ex.minima) {
        long long v = geom(age_scale);
        ages[m] = v;
        ages[b.mod(m + 1)] = v;
    }
    // ascents from each minimum, descents walked from the next minimum
    for (int m : ex.minima) {
        long long cur = ages[b.mod(m + 1)];
        int i = b.mod(m + 1);
        while (b.step(b.mod(i + 1)) == 1) {
            i = b.mod(i + 1);
            cur += 1 + geom(age_scale);
            ages[i] = cur;
        }
    }
    for (int m : ex.minima) {
        long long cur = ages[m];
        int i = m;
        while (b.step(b.mod(i - 1)) == -1) {
            i = b.mod(i - 1);
            cur += 1 + geom(age_scale);
            ages[i] = cur;
        }
    }
    TimedBridge tb{b, ages};
    if (!validate_timed(tb.bridge, tb.ages)) throw ConfigError("random_timed produced invalid ages");
    return tb;
}

// ---------------------------------------------------------------------------

CriterionResult crit1() {
    Check c;
    const int window = 40;
    const int kernel_cap = 56;  // oracle runs at its own cap; both laws are
                                // restricted to the window and renormalized
    for (int L : {1, 2}) {
        for (double p : {0.3, 0.5, 0.7}) {
            DiscreteMeasure mu0 = DiscreteMeasure::geometric(p);
            MeasureFamily fam = MeasureFamily::constant(mu0);
            TruncatedKernel k = truncated_transition_matrix(L, fam, kernel_cap);
            std::vector<double> pi = power_iterate_stationary(k, 1e-13, 200000);
            auto [pi_w, states_w] = restrict_to_window(k.states, pi, window);
            // truncated Theorem-int law on the same window
            std::vector<double> w(states_w.size());
            KahanSum z;
            for (size_t i = 0; i < states_w.size(); ++i) {
                w[i] = weight_W(states_w[i].bridge, states_w[i].ages, mu0, 3).value();
                z.add(w[i]);
            }
            for (double& v : w) v /= z.value();
            double tv = tv_distance(pi_w, w);
            double leak = stationary_leak(k, pi);
            c.expect(tv <= 1e-8, "L=" + std::to_string(L) + " p=" + fmt(p) +
                                     " TV=" + fmt(tv) + " (leak=" + fmt(leak) + ")");
        }
    }
    return {1, "exact vs oracle stationary law (TV <= 1e-8)", c.ok, c.detail.str(), 0.0};
}

CriterionResult crit2() {
    Check c;
    for (int L : {2, 3}) {
        for (double p : {0.3, 0.5, 0.7}) {
            DiscreteMeasure mu0 = DiscreteMeasure::geometric(p);
            ExactLaw law = stationary_law(L, mu0, 96);
            auto closed = geometric_closed_form(L, p);
            double worst = 0.0;
            for (size_t i = 0; i < law.bridges.size(); ++i)
                worst = std::max(worst,
                                 std::abs(law.nu[i] - closed.at(law.bridges[i].code())));
            c.expect(worst <= 1e-10,
                     "L=" + std::to_string(L) + " p=" + fmt(p) + " max|nu-closed|=" + fmt(worst));
        }
    }
    return {2, "closed-form stationary law for constant geometric", c.ok, c.detail.str(), 0.0};
}

CriterionResult crit3() {
    Check c;
    DiscreteMeasure mu0 = DiscreteMeasure::geometric(0.5);
    SpeedReport rep = speed_exact(1, mu0, 200);
    const double target = 0.5 / (2.0 - 0.5);  // p/(2-p) = 1/3
    c.expect(std::abs(rep.c_via_int_speed.value - target) <= 0.005 * target,
             "int-speed route " + fmt(rep.c_via_int_speed.value) + " vs 1/3");
    c.expect(std::abs(rep.c_via_alt.value - target) <= 0.005 * target,
             "alt route " + fmt(rep.c_via_alt.value) + " vs 1/3");
    c.expect(std::abs(rep.c_via_int_speed.value - rep.c_via_alt.value) <= 1e-10,
             "routes agree to 1e-10 (gap=" +
                 fmt(std::abs(rep.c_via_int_speed.value - rep.c_via_alt.value)) + ")");
    MeasureFamily fam = MeasureFamily::constant(mu0);
    Trajectory traj = simulate_discrete(1, fam, 1000000, 100000, 20240517);
    SpeedEstimate est = traj.speed();
    c.expect(std::abs(est.c_from_ages - target) <= 0.005 * target,
             "simulation (age estimator) " + fmt(est.c_from_ages) + " vs 1/3");
    c.detail << "| note: growth-rate estimator gives " << fmt(est.c_from_growth)
             << ", zero-age exact rate " << fmt(rep.c_zero_age.value)
             << " -- the alt route reproduces the realized height rate, see ledger";
    return {3, "speed triangulation at L=1, geometric(0.5)", c.ok, c.detail.str(), 0.0};
}

CriterionResult crit4() {
    Check c;
    DiscreteMeasure mu0 = DiscreteMeasure::geometric(0.5);
    MeasureFamily fam = MeasureFamily::constant(mu0);
    Trajectory traj = simulate_discrete(2, fam, 1000000, 100000, 97);
    ExactLaw law = stationary_law(2, mu0, 64);
    std::vector<double> emp, exact;
    for (size_t i = 0; i < law.bridges.size(); ++i) {
        auto it = traj.bridge_counts.find(law.bridges[i].code());
        emp.push_back(it == traj.bridge_counts.end()
                          ? 0.0
                          : static_cast<double>(it->second) / traj.samples);
        exact.push_back(law.nu[i]);
    }
    double tv = tv_distance(emp, exact);
    c.expect(tv <= 0.01, "bridge-marginal TV=" + fmt(tv) + " at 1e6 steps");
    return {4, "simulation vs exact bridge marginal (L=2)", c.ok, c.detail.str(), 0.0};
}

CriterionResult crit5() {
    Check c;
    std::vector<DiscreteMeasure> mus = {DiscreteMeasure::geometric(0.5),
                                        DiscreteMeasure::poisson_conditioned(1.0),
                                        DiscreteMeasure::zeta(6.0)};
    for (const DiscreteMeasure& mu0 : mus) {
        ResidualReport st = check_stable_identity(mu0, 10, 30);
        c.expect(st.max_residual <= 1e-10, mu0.label() + " stable residual=" + fmt(st.max_residual));
        MeasureFamily fam = MeasureFamily::integrable(mu0);
        ResidualReport be = check_belyaev(fam, 6, 20);
        c.expect(be.max_residual <= 1e-10, mu0.label() + " belyaev residual=" + fmt(be.max_residual));
    }
    MeasureFamily bad = perturbed_family(DiscreteMeasure::geometric(0.5), 1, 1, 1e-2);
    ResidualReport be = check_belyaev(bad, 6, 20);
    c.expect(be.max_residual >= 1e-3,
             "perturbed control residual=" + fmt(be.max_residual) + " >= 1e-3");
    return {5, "PCA integrability identities and negative control", c.ok, c.detail.str(), 0.0};
}

CriterionResult crit6() {
    Check c;
    Rng rng(31415);
    std::vector<DiscreteMeasure> mus = {
        DiscreteMeasure::geometric(0.3), DiscreteMeasure::geometric(0.5),
        DiscreteMeasure::geometric(0.7), DiscreteMeasure::poisson_conditioned(1.0),
        DiscreteMeasure::zeta(6.0)};
    std::vector<Bridge> pool = enumerate_bridges(3);
    for (const DiscreteMeasure& mu0 : mus) {
        double S = mu0.sqrt_sum().value;
        double worst23 = 0.0, worst12 = 0.0, worstK = 0.0;
        for (int it = 0; it < 1000; ++it) {
            const Bridge& b = pool[rng() % pool.size()];
            TimedBridge tb = random_timed(b, rng, 3);
            LogValue f1 = weight_W(b, tb.ages, mu0, 1);
            LogValue f2 = weight_W(b, tb.ages, mu0, 2);
            LogValue f3 = weight_W(b, tb.ages, mu0, 3);
            LogValue kp = kernel_product_form1(b, tb.ages, mu0);
            worst23 = std::max(worst23, std::abs(f2.log - f3.log));
            worst12 = std::max(worst12,
                               std::abs(f1.log + b.size() * std::log(S) - f2.log));
            worstK = std::max(worstK, std::abs(kp.log - f1.log));
        }
        c.expect(worst23 <= 1e-12, mu0.label() + " |log f2 - log f3| = " + fmt(worst23));
        c.expect(worst12 <= 1e-12,
                 mu0.label() + " |log f1 + 2L log S - log f2| = " + fmt(worst12));
        c.expect(worstK <= 1e-12, mu0.label() + " kernel-product vs form1 = " + fmt(worstK));
    }
    return {6, "W-form coherence and kernel-product identity", c.ok, c.detail.str(), 0.0};
}

CriterionResult crit7() {
    Check c;
    DiscreteMeasure half = DiscreteMeasure::from_table({{1, 0.5}, {2, 0.5}});
    MeasureFamily fam = MeasureFamily::edge_lpp(half);
    // enumeration oracle for max(z1, D + z2) - D over the finite support
    auto oracle = [&](int D) {
        std::map<int, double> pmf;
        for (int z1 = 1; z1 <= 2; ++z1)
            for (int z2 = 1; z2 <= 2; ++z2)
                pmf[std::max(z1, D + z2) - D] += 0.25;
        return pmf;
    };
    for (int D : {0, 1, 2, 5}) {
        const DiscreteMeasure& mD = fam.at(D);
        auto target = oracle(D);
        double worst = 0.0;
        for (auto& [i, m] : target) worst = std::max(worst, std::abs(mD(i) - m));
        c.expect(worst <= 1e-15, "finite-support Delta=" + std::to_string(D) +
                                     " max err=" + fmt(worst));
    }
    c.expect(std::abs(fam.at(0)(1) - 0.25) < 1e-15 && std::abs(fam.at(0)(2) - 0.75) < 1e-15,
             "Delta=0 gives (0.25, 0.75)");
    c.expect(std::abs(fam.at(1)(1) - 0.5) < 1e-15 && std::abs(fam.at(1)(2) - 0.5) < 1e-15,
             "Delta=1 gives (0.5, 0.5)");
    MeasureFamily geo = MeasureFamily::edge_lpp(DiscreteMeasure::geometric(0.5));
    double worst = 0.0;
    for (int D = 0; D <= 20; ++D)
        worst = std::max(worst, std::abs(geo.at(D).total_mass() - 1.0));
    c.expect(worst <= 1e-9, "geometric edge-LPP mass defect <= 1e-9 up to Delta=20 (got " +
                                fmt(worst) + ")");
    return {7, "edge-LPP family vs enumeration oracle", c.ok, c.detail.str(), 0.0};
}

CriterionResult crit8() {
    Check c;
    const int n = 500;
    const double p = 0.5;
    MeasureFamily fam = MeasureFamily::constant(DiscreteMeasure::geometric(p));
    KahanSum acc;
    for (int seed = 0; seed < 20; ++seed) {
        QuarterField f = grow_quarter_plane(n, fam, 1000 + seed);
        acc.add(static_cast<double>(f.tau(n, n)) / n);
    }
    double mean = acc.value() / 20.0;
    const double pinned = 4.8284;  // the spec's reference value
    c.expect(std::abs(mean - pinned) <= 0.05 * pinned,
             "mean tau(n,n)/n = " + fmt(mean) + " vs pinned 4.8284 +-5%");
    double corrected = lpp_shape_geometric_nstar(1.0, 1.0, p);
    c.detail << "| info: support-correct reference f(1,1)=" << fmt(corrected)
             << " (weights on {1,2,...}); simulated mean is within "
             << fmt(100.0 * std::abs(mean - corrected) / corrected)
             << "% of it, see ledger on the swapped shape formulas";
    return {8, "classical quarter-plane diagonal shape (statistical)", c.ok, c.detail.str(), 0.0};
}

CriterionResult crit9() {
    Check c;
    auto f0 = std::make_shared<ExponentialDensity>(1.0);
    DensityFamily fam = DensityFamily::integrable(f0);
    CertificateReport cert = check_noexplosion(fam, 0.1, 50.0);
    c.expect(cert.passed && std::abs(cert.value - (1.0 - std::exp(-0.1))) < 1e-9,
             "Cond-5 certificate sup=" + fmt(cert.value) + " (= 1-e^-0.1)");
    // L = 2: uniform bridge marginal
    TrajectoryC t2 = simulate_continuous(2, fam, 100000.0, 4242);
    std::map<std::string, long long> counts;
    for (const std::string& s : t2.bridge_samples) counts[s] += 1;
    double nsamp = static_cast<double>(t2.bridge_samples.size());
    double expd = nsamp / 6.0;
    double stat = 0.0;
    for (const Bridge& b : enumerate_bridges(2)) {
        double o = static_cast<double>(counts[b.code()]);
        stat += (o - expd) * (o - expd) / expd;
    }
    double pval = chi2_pvalue(stat, 5);
    c.expect(pval > 0.01, "chi^2 p=" + fmt(pval) + " for uniform bridge marginal (stat=" +
                              fmt(stat) + ", n=" + fmt(nsamp) + ")");
    // L = 1: stationary age is Exp(1)
    TrajectoryC t1 = simulate_continuous(1, fam, 100000.0, 777);
    std::vector<double> ages(t1.age_samples);
    double ks = ks_statistic(std::move(ages),
                             [](double x) { return x > 0 ? 1.0 - std::exp(-x) : 0.0; });
    c.expect(ks <= 0.02, "KS vs Exp(1) ages = " + fmt(ks));
    c.expect(t1.max_events_per_unit < 1e4 && t2.max_events_per_unit < 1e4,
             "no explosion (max events/unit = " + fmt(t2.max_events_per_unit) + ")");
    return {9, "continuous time: uniform bridges, Exp ages, no explosion", c.ok,
            c.detail.str(), 0.0};
}

CriterionResult crit10() {
    Check c;
    // chain vs growth, shared draws, 1e4 steps at L=4
    {
        const int L = 4;
        const std::uint64_t seed = 555;
        DiscreteMeasure mu0 = DiscreteMeasure::geometric(0.5);
        MeasureFamily fam = MeasureFamily::constant(mu0);
        CylinderField field(L, seed);
        field.grow(fam, 10000);
        FrontChainState st = FrontChainState::initial(L);
        SharedDrawDecider decider(fam, seed);
        bool all_equal = true;
        long long first_bad = -1;
        for (long long nstep = 1; nstep <= 10000; ++nstep) {
            step_discrete(st, decider);
            TimedBridge fl = field.front_line(nstep);
            if (!(fl == st.timed)) {
                all_equal = false;
                first_bad = nstep;
                break;
            }
        }
        c.expect(all_equal, all_equal ? "chain == growth front lines for 1e4 steps"
                                      : "chain/growth diverge at step " +
                                            std::to_string(first_bad));
    }
    // growth vs PCA through Phi, 50 rows at L=4
    {
        const int L = 4;
        const std::uint64_t seed = 556;
        DiscreteMeasure mu0 = DiscreteMeasure::poisson_conditioned(1.0);
        MeasureFamily fam = MeasureFamily::integrable(mu0);
        CylinderField field(L, seed);
        field.grow(fam, 100000);
        auto eta = iterate_space_time(L, fam, 50, seed);
        bool equal = true;
        for (int y = 0; y <= 50 && equal; ++y)
            for (int x = 0; x < L && equal; ++x) {
                auto [cx, cy] = phi_map(x, y, L);
                if (eta[static_cast<size_t>(y)][static_cast<size_t>(x)] != field.tau(cx, cy))
                    equal = false;
            }
        c.expect(equal, "PCA space-time diagram == growth through Phi for 50 rows");
    }
    // Lemma comb partial sums
    {
        double worst = 0.0;
        for (int k = 1; k <= 5; ++k)
            for (double q : {0.25, 0.5, 0.75}) {
                KahanSum partial;
                for (int i = k; i <= 400; ++i)
                    partial.add(binom(i - 1, k - 1) * std::pow(q, i));
                worst = std::max(worst, std::abs(partial.value() - lemma_comb(k, q)));
            }
        c.expect(worst <= 1e-12, "lemma-comb partial sums, worst gap=" + fmt(worst));
    }
    return {10, "coupling equalities and combinatorial identities", c.ok, c.detail.str(), 0.0};
}

}  // namespace

std::vector<CriterionResult> run_acceptance_suite(const std::string& suite, int only) {
    if (suite != "desk") throw ConfigError("unknown suite: " + suite);
    std::vector<std::function<CriterionResult()>> crits = {
        crit1, crit2, crit3, crit4, crit5, crit6, crit7, crit8, crit9, crit10};
    std::vector<CriterionResult> out;
    for (size_t i = 0; i < crits.size(); ++i) {
        if (only > 0 && static_cast<int>(i + 1) != only) continue;
        auto t0 = std::chrono::steady_clock::now();
        CriterionResult r = crits[i]();
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(std::move(r));
    }
    return out;
}

std::string format_acceptance_table(const std::vector<CriterionResult>& results) {
    std::ostringstream os;
    for (const CriterionResult& r : results) {
        os << (r.passed ? "PASS" : "FAIL") << "  #" << r.id << "  " << r.title << "  ["
           << fmt(r.seconds) << "s]\n";
        if (!r.detail.empty()) os << "      " << r.detail << "\n";
    }
    return os.str();
}

}  // namespace glpp
