#ifndef GLPP_GROWTH_HPP
#define GLPP_GROWTH_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "glpp/bridges.hpp"
#include "glpp/common.hpp"
#include "glpp/measures.hpp"

namespace glpp {

// ---------------------------------------------------------------------------
// Per-cell uniform draws.  The default is counter-based (stable across
// modules, which is what the chain/growth/PCA coupling checks rely on).
// ---------------------------------------------------------------------------

struct DrawSource {
    virtual ~DrawSource() = default;
    virtual double uniform(std::int64_t x, std::int64_t y) = 0;
};

struct CounterDrawSource final : DrawSource {
    std::uint64_t seed;
    explicit CounterDrawSource(std::uint64_t s) : seed(s) {}
    double uniform(std::int64_t x, std::int64_t y) override {
        return cell_uniform(seed, x, y);
    }
};

// ---------------------------------------------------------------------------
// Cylinder growth field.  Cells (x, y), x in Z/2LZ, x + y even; row 0 cells
// (2x, 0) arrive at time 0.  tau is stored row by row.
// ---------------------------------------------------------------------------

class CylinderField {
public:
    CylinderField(int L, std::uint64_t seed) : L_(L), source_(seed) {}

    int L() const { return L_; }
    long long grown_until() const { return until_; }

    // materializes every cell with tau <= until_time
    void grow(const MeasureFamily& fam, long long until_time);

    long long tau(std::int64_t x, std::int64_t y) const;   // NotMaterialized if absent
    bool arrived(std::int64_t x, std::int64_t y, long long by_time) const;

    // the front line at time n in the paper's bridge convention
    TimedBridge front_line(long long n) const;

    // residence times zeta of successive edges at corner x, rows 0..count-1
    std::vector<long long> edge_residence_times(std::int64_t x, int count) const;

    // export rows as CSV "x,y,tau"
    std::string to_csv() const;

private:
    int L_;
    CounterDrawSource source_;
    long long until_ = -1;
    // per row y, tau of the L cells: row y holds cells x = (y mod 2) + 2k
    std::vector<std::vector<long long>> rows_;
    long long cell_tau(std::int64_t x, std::int64_t y) const;
    void set_tau(std::int64_t x, std::int64_t y, long long t);
    friend struct GrowthHarness;
};

// test hook: inject an explicit tau assignment
struct GrowthHarness {
    static void set(CylinderField& f, std::int64_t x, std::int64_t y, long long tau) {
        f.set_tau(x, y, tau);
    }
    static void seal(CylinderField& f, long long until) { f.until_ = until; }
};

CylinderField grow_cylinder(int L, const MeasureFamily& fam, long long until_time,
                            std::uint64_t seed);

// ---------------------------------------------------------------------------
// Phi map between the PCA lattice (Z/LZ x N) and the cylinder
// ---------------------------------------------------------------------------

std::pair<std::int64_t, std::int64_t> phi_map(std::int64_t x, std::int64_t y, int L);
std::pair<std::int64_t, std::int64_t> phi_inv(std::int64_t x, std::int64_t y, int L);

// ---------------------------------------------------------------------------
// Quarter-plane growth (zero boundary row and column, cells (x,y) >= (1,1))
// ---------------------------------------------------------------------------

class QuarterField {
public:
    QuarterField(int N, std::uint64_t seed) : N_(N), seed_(seed) {}

    int N() const { return N_; }
    // grows every cell in the box; cells with tau > until_time are still
    // materialized when needed for the front (tau is monotone along rows)
    void grow(const MeasureFamily& fam);
    long long tau(int x, int y) const;

    // boundary polyline of {tau <= t}, normalized by t, as (x/t, y/t)
    std::vector<std::pair<double, double>> shape_profile(long long t) const;

private:
    int N_;
    std::uint64_t seed_;
    std::vector<long long> tau_;  // (N+1)^2, boundary included
};

QuarterField grow_quarter_plane(int N, const MeasureFamily& fam, std::uint64_t seed);

// classical quarter-plane shape constants f(x,y) for constant geometric
// weights; both supports are exposed because the two are easy to mix up
double lpp_shape_geometric_nstar(double x, double y, double p);  // weights on {1,2,...}
double lpp_shape_geometric_n(double x, double y, double p);      // weights on {0,1,...}
double lpp_shape_exponential(double x, double y, double lambda); // (sqrt x + sqrt y)^2 / lambda

// sup relative deviation of the time-t front from the reference shape,
// restricted to slopes y/x in [1/4, 4]
double shape_deviation(const QuarterField& field, long long t,
                       const std::function<double(double, double)>& shape);

// SVG rendering of a shape profile with optional reference curve
std::string shape_svg(const std::vector<std::pair<double, double>>& profile,
                      const std::function<double(double, double)>* shape);

// ---------------------------------------------------------------------------
// Superadditivity probe (pathwise coupling by shared per-cell uniforms)
// ---------------------------------------------------------------------------

struct SuperadditivityReport {
    long long replicas = 0;
    long long violations = 0;
    double mean_slack = 0.0;
    bool cond7_certified = false;
    std::string to_json() const;
};

SuperadditivityReport superadditivity_probe(const MeasureFamily& fam,
                                            std::pair<int, int> z1, std::pair<int, int> z2,
                                            int replicas, std::uint64_t seed);

}  // namespace glpp

#endif
