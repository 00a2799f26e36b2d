#include <doctest.h>

#include <cmath>
#include <thread>

#include "glpp/measures.hpp"
#include "glpp/stats.hpp"

using namespace glpp;

TEST_CASE("named measures are normalized with certified tails") {
    for (const DiscreteMeasure& mu :
         {DiscreteMeasure::geometric(0.5), DiscreteMeasure::geometric(0.3),
          DiscreteMeasure::poisson_conditioned(1.0), DiscreteMeasure::poisson_shifted(2.0),
          DiscreteMeasure::zeta(6.0)}) {
        CHECK(std::abs(mu.total_mass() - 1.0) < 1e-12);
        CHECK(std::abs(mu.tail(1) - 1.0) < 1e-12);
        double prev = mu.tail(1);
        for (int t = 2; t <= 50; ++t) {
            CHECK(mu.tail(t) <= prev + 1e-15);
            prev = mu.tail(t);
        }
        for (int i = 1; i <= 50; ++i) CHECK(mu(i) > 0.0);
    }
}

TEST_CASE("integrable family satisfies the defining identity pointwise") {
    for (const DiscreteMeasure& mu0 :
         {DiscreteMeasure::geometric(0.4), DiscreteMeasure::poisson_conditioned(1.0),
          DiscreteMeasure::zeta(6.0)}) {
        MeasureFamily fam = MeasureFamily::integrable(mu0);
        for (int d = 0; d <= 20; ++d) {
            Bounded N = fam.normalizer(d);
            CHECK(N.value <= 1.0 + 1e-12);  // Cauchy-Schwarz
            const DiscreteMeasure& mud = fam.at(d);
            for (int t = 1; t <= 30; ++t) {
                double lhs = mud(t) * N.value;
                double rhs = std::sqrt(mu0(t) * mu0(t + d));
                CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
            }
        }
    }
}

TEST_CASE("geometric seeds reproduce themselves at every gap") {
    DiscreteMeasure mu0 = DiscreteMeasure::geometric(0.5);
    MeasureFamily fam = MeasureFamily::integrable(mu0);
    for (int d = 0; d <= 20; ++d) {
        const DiscreteMeasure& mud = fam.at(d);
        for (int t = 1; t <= 40; ++t) CHECK(std::abs(mud(t) - mu0(t)) < 1e-12);
    }
}

TEST_CASE("gap zero returns the seed") {
    DiscreteMeasure mu0 = DiscreteMeasure::poisson_conditioned(1.0);
    MeasureFamily fam = MeasureFamily::integrable(mu0);
    for (int t = 1; t <= 20; ++t) CHECK(fam.at(0)(t) == mu0(t));
}

TEST_CASE("poisson-based family value against a partial-sum oracle at cap 200") {
    DiscreteMeasure mu0 = DiscreteMeasure::poisson_conditioned(1.0);
    MeasureFamily fam = MeasureFamily::integrable(mu0);
    // independent evaluation of mu_2(1)
    KahanSum norm;
    for (int s = 1; s <= 200; ++s) norm.add(std::sqrt(mu0(s) * mu0(s + 2)));
    double oracle = std::sqrt(mu0(1) * mu0(3)) / norm.value();
    CHECK(std::abs(fam.at(2)(1) - oracle) < 1e-10);
    CHECK(std::abs(fam.at(2)(1) - 0.6815967731159391) < 1e-9);  // frozen
}

TEST_CASE("both directions of the constant-iff-geometric characterization") {
    // integrable + constant => geometric ratio
    DiscreteMeasure geo = DiscreteMeasure::geometric(0.37);
    MeasureFamily gfam = MeasureFamily::integrable(geo);
    bool constant = true;
    for (int d = 1; d <= 20 && constant; ++d)
        for (int t = 1; t <= 30; ++t)
            if (std::abs(gfam.at(d)(t) - gfam.at(0)(t)) > 1e-10) constant = false;
    CHECK(constant);
    double ratio = geo(2) / geo(1);
    for (int i = 1; i <= 30; ++i) CHECK(std::abs(geo(i + 1) / geo(i) - ratio) < 1e-10);

    // a non-geometric seed cannot stay constant
    DiscreteMeasure pois = DiscreteMeasure::poisson_conditioned(1.0);
    MeasureFamily pfam = MeasureFamily::integrable(pois);
    double dev = 0.0;
    for (int t = 1; t <= 10; ++t) dev = std::max(dev, std::abs(pfam.at(3)(t) - pois(t)));
    CHECK(dev > 1e-3);
}

TEST_CASE("edge-LPP family matches direct enumeration on a finite support") {
    DiscreteMeasure half = DiscreteMeasure::from_table({{1, 0.5}, {2, 0.5}});
    MeasureFamily fam = MeasureFamily::edge_lpp(half);
    CHECK(fam.at(0)(1) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(fam.at(0)(2) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(fam.at(1)(1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(fam.at(1)(2) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("edge-LPP: mu_D(1) collapses to the stated products") {
    DiscreteMeasure mu = DiscreteMeasure::geometric(0.6);
    MeasureFamily fam = MeasureFamily::edge_lpp(mu);
    CHECK(std::abs(fam.at(0)(1) - mu(1) * mu(1)) < 1e-14);
    CHECK(std::abs(fam.at(4)(1) - (mu(1) * mu.cdf(4) + mu(1) * mu(5))) < 1e-14);
}

TEST_CASE("edge-LPP masses stay normalized for geometric up to gap 20") {
    MeasureFamily fam = MeasureFamily::edge_lpp(DiscreteMeasure::geometric(0.5));
    for (int d = 0; d <= 20; ++d)
        CHECK(std::abs(fam.at(d).total_mass() - 1.0) < 1e-9);
}

TEST_CASE("hazard-ratio certificate: geometric is exactly p on the grid") {
    MeasureFamily fam = MeasureFamily::constant(DiscreteMeasure::geometric(0.5));
    CertificateReport rep = check_cond_conv(fam, 10, 40);
    CHECK(rep.passed);
    CHECK(std::abs(rep.value - 0.5) < 1e-12);
}

TEST_CASE("hazard-ratio certificate: zeta(6) decreases in t, min at the grid edge") {
    MeasureFamily fam = MeasureFamily::integrable(DiscreteMeasure::zeta(6.0));
    CertificateReport rep = check_cond_conv2(fam.base(), 40);
    CHECK(rep.witness == std::vector<long long>{40});
    double prev = 2.0;
    for (int t = 1; t <= 40; ++t) {
        double h = fam.base()(t) / fam.base().tail(t);
        CHECK(h < prev);
        prev = h;
    }
    CHECK(rep.value == doctest::Approx(prev).epsilon(1e-12));
}

TEST_CASE("degenerate single-point grid") {
    MeasureFamily fam = MeasureFamily::constant(DiscreteMeasure::geometric(0.3));
    CertificateReport rep = check_cond_conv(fam, 0, 1);
    CHECK(std::abs(rep.value - 0.3) < 1e-14);  // mu0(1)/1
    CHECK_THROWS_AS(check_cond_conv(fam, 0, 0), EmptyGrid);
}

TEST_CASE("cond-subadd grid: constant passes, poisson passes, zeta fails left") {
    MeasureFamily cst = MeasureFamily::constant(DiscreteMeasure::geometric(0.5));
    CHECK(check_cond_subadd(cst, 8, 40).passed);
    MeasureFamily pois = MeasureFamily::integrable(DiscreteMeasure::poisson_conditioned(1.0));
    CHECK(check_cond_subadd(pois, 8, 40).passed);
    MeasureFamily zeta = MeasureFamily::integrable(DiscreteMeasure::zeta(6.0));
    CertificateReport rep = check_cond_subadd(zeta, 8, 40);
    CHECK_FALSE(rep.passed);
    REQUIRE(rep.witness.size() == 3);
    CHECK(rep.witness[2] == 0);  // left side
    CHECK(rep.witness[0] == 0);
    CHECK(rep.witness[1] == 1);
}

TEST_CASE("inverse-cdf sampling hits the documented points") {
    DiscreteMeasure geo = DiscreteMeasure::geometric(0.5);
    CHECK(geo.sample(0.49) == 1);
    CHECK(geo.sample(0.51) == 2);
    CHECK(geo.sample_conditional(3, 0.49) == 4);  // memorylessness
}

TEST_CASE("tail underflow guard on deep conditioning") {
    DiscreteMeasure geo = DiscreteMeasure::geometric(0.5);
    CHECK_THROWS_AS(geo.sample_conditional(1990, 0.5), TailUnderflow);
}

TEST_CASE("divergent sqrt-sum is rejected, not approximated") {
    DiscreteMeasure heavy = DiscreteMeasure::zeta(1.8, 50000);
    CHECK_THROWS_AS(MeasureFamily::integrable(heavy), DivergentSqrtSum);
}

TEST_CASE("families are shareable across threads (consistent lazy cache)") {
    MeasureFamily fam = MeasureFamily::integrable(DiscreteMeasure::poisson_conditioned(1.0));
    std::vector<std::thread> threads;
    std::vector<double> results(8, 0.0);
    for (int i = 0; i < 8; ++i)
        threads.emplace_back([&fam, &results, i] { results[i] = fam.at(i % 4)(1 + i % 3); });
    for (auto& t : threads) t.join();
    for (int i = 0; i < 8; ++i) CHECK(results[i] == fam.at(i % 4)(1 + i % 3));
}
