#include "glpp/growth.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <tuple>

namespace glpp {

// ---------------------------------------------------------------------------
// Cylinder field
// ---------------------------------------------------------------------------

namespace {
struct Scheduled {
    long long tau;
    std::int64_t x, y;
    bool operator>(const Scheduled& o) const {
        return std::tie(tau, y, x) > std::tie(o.tau, o.y, o.x);
    }
};
}  // namespace

long long CylinderField::cell_tau(std::int64_t x, std::int64_t y) const {
    const int n = 2 * L_;
    x = ((x % n) + n) % n;
    if (y < 0 || (x + y) % 2 != 0) return -1;
    size_t k = static_cast<size_t>(y);
    if (k >= rows_.size()) return -1;
    return rows_[k][static_cast<size_t>(x / 2)];
}

void CylinderField::set_tau(std::int64_t x, std::int64_t y, long long t) {
    const int n = 2 * L_;
    x = ((x % n) + n) % n;
    while (rows_.size() <= static_cast<size_t>(y))
        rows_.emplace_back(static_cast<size_t>(L_), -1);
    rows_[static_cast<size_t>(y)][static_cast<size_t>(x / 2)] = t;
}

void CylinderField::grow(const MeasureFamily& fam, long long until_time) {
    if (until_time < 0) throw ConfigError("until_time must be nonnegative");
    if (until_ >= until_time) return;
    const int n = 2 * L_;
    if (rows_.empty())
        for (int k = 0; k < L_; ++k) set_tau(2 * k, 0, 0);

    std::priority_queue<Scheduled, std::vector<Scheduled>, std::greater<Scheduled>> queue;
    auto try_schedule = [&](std::int64_t x, std::int64_t y) {
        x = ((x % n) + n) % n;
        if (cell_tau(x, y) >= 0) return;
        long long t1 = cell_tau(x - 1, y - 1);
        long long t2 = cell_tau(x + 1, y - 1);
        if (t1 < 0 || t2 < 0) return;
        long long base = std::max(t1, t2);
        long long delta = std::llabs(t1 - t2);
        double u = source_.uniform(x, y);
        long long xi = fam.at(static_cast<int>(delta)).sample(u);
        queue.push({base + xi, x, y});
    };
    // re-seed the frontier: every unmaterialized cell whose predecessors exist
    for (size_t y = 0; y < rows_.size() + 1; ++y)
        for (int k = 0; k < L_; ++k)
            try_schedule(static_cast<std::int64_t>(y % 2) + 2 * k, static_cast<std::int64_t>(y));

    while (!queue.empty()) {
        Scheduled s = queue.top();
        if (s.tau > until_time) break;
        queue.pop();
        if (cell_tau(s.x, s.y) >= 0) continue;
        set_tau(s.x, s.y, s.tau);
        try_schedule(s.x - 1, s.y + 1);
        try_schedule(s.x + 1, s.y + 1);
    }
    until_ = until_time;
}

long long CylinderField::tau(std::int64_t x, std::int64_t y) const {
    long long t = cell_tau(x, y);
    if (t < 0)
        throw NotMaterialized("cell (" + std::to_string(x) + "," + std::to_string(y) +
                              ") not materialized");
    return t;
}

bool CylinderField::arrived(std::int64_t x, std::int64_t y, long long by_time) const {
    long long t = cell_tau(x, y);
    return t >= 0 && t <= by_time;
}

TimedBridge CylinderField::front_line(long long nt) const {
    if (nt > until_) throw NotMaterialized("field grown only to " + std::to_string(until_));
    const int n = 2 * L_;
    // per column, the top arrived row by time nt; tau strictly increases in y
    // and the materialized cells form a prefix, so binary search applies
    std::vector<long long> top(n, -1);
    for (int x = 0; x < n; ++x) {
        long long parity = (x % 2 == 0) ? 0 : 1;
        if (cell_tau(x, parity) < 0 || cell_tau(x, parity) > nt) continue;
        long long lo = 0;  // in units of k, y = parity + 2k
        long long hi = (static_cast<long long>(rows_.size()) - 1 - parity) / 2;
        while (lo < hi) {
            long long mid = (lo + hi + 1) / 2;
            long long t = cell_tau(x, parity + 2 * mid);
            if (t >= 0 && t <= nt) lo = mid;
            else hi = mid - 1;
        }
        top[x] = parity + 2 * lo;
    }
    std::vector<long long> h(n);
    for (int x = 0; x < n; ++x) {
        long long hx = -1;
        if (top[x] >= 0) hx = std::max(hx, top[x] + 1);
        int xm = (x - 1 + n) % n, xp = (x + 1) % n;
        if (top[xm] >= 0) hx = std::max(hx, top[xm]);
        if (top[xp] >= 0) hx = std::max(hx, top[xp]);
        h[x] = hx;
    }
    TimedBridge tb;
    std::vector<int8_t> steps(n);
    tb.ages.resize(n);
    for (int i = 0; i < n; ++i) {
        int ip = (i + 1) % n;
        long long diff = h[i] - h[ip];
        if (diff != 1 && diff != -1)
            throw NotMaterialized("front line not a bridge at time " + std::to_string(nt));
        steps[i] = static_cast<int8_t>(diff);
        // arrived face below the edge
        std::int64_t fx = diff == 1 ? i : ip;
        std::int64_t fy = (diff == 1 ? h[i] : h[ip]) - 1;
        tb.ages[i] = nt - tau(fx, fy);
    }
    tb.bridge = Bridge(std::move(steps));
    return tb;
}

std::vector<long long> CylinderField::edge_residence_times(std::int64_t x, int count) const {
    const int n = 2 * L_;
    x = ((x % n) + n) % n;
    std::vector<long long> out;
    auto cover = [&](long long r) {  // face covering interval (x, x+1) in row r
        std::int64_t cx = ((x + r) % 2 == 0) ? x : (x + 1) % n;
        return tau(cx, r);
    };
    for (int r = 0; r < count; ++r) out.push_back(cover(r + 1) - cover(r));
    return out;
}

std::string CylinderField::to_csv() const {
    std::ostringstream os;
    os << "x,y,tau\n";
    for (size_t y = 0; y < rows_.size(); ++y)
        for (int k = 0; k < L_; ++k) {
            long long x = static_cast<long long>(y % 2) + 2 * k;
            long long t = rows_[y][static_cast<size_t>(k)];
            if (t >= 0) os << x << "," << y << "," << t << "\n";
        }
    return os.str();
}

CylinderField grow_cylinder(int L, const MeasureFamily& fam, long long until_time,
                            std::uint64_t seed) {
    CylinderField f(L, seed);
    f.grow(fam, until_time);
    return f;
}

// ---------------------------------------------------------------------------
// Phi
// ---------------------------------------------------------------------------

std::pair<std::int64_t, std::int64_t> phi_map(std::int64_t x, std::int64_t y, int L) {
    const int n = 2 * L;
    std::int64_t cx = (((2 * x + y) % n) + n) % n;
    return {cx, y};
}

std::pair<std::int64_t, std::int64_t> phi_inv(std::int64_t x, std::int64_t y, int L) {
    if (((x + y) % 2 + 2) % 2 != 0)
        throw ParityViolation("cell (" + std::to_string(x) + "," + std::to_string(y) +
                              ") has odd parity");
    std::int64_t px = (x - y) / 2;
    px = ((px % L) + L) % L;
    return {px, y};
}

// ---------------------------------------------------------------------------
// Quarter plane
// ---------------------------------------------------------------------------

void QuarterField::grow(const MeasureFamily& fam) {
    tau_.assign(static_cast<size_t>(N_ + 1) * (N_ + 1), 0);
    for (int y = 1; y <= N_; ++y) {
        for (int x = 1; x <= N_; ++x) {
            long long a = tau_[static_cast<size_t>(y - 1) * (N_ + 1) + x];
            long long b = tau_[static_cast<size_t>(y) * (N_ + 1) + x - 1];
            long long delta = std::llabs(a - b);
            double u = cell_uniform(seed_, x, y);
            long long xi = fam.at(static_cast<int>(delta)).sample(u);
            tau_[static_cast<size_t>(y) * (N_ + 1) + x] = std::max(a, b) + xi;
        }
    }
}

long long QuarterField::tau(int x, int y) const {
    if (tau_.empty()) throw NotMaterialized("quarter-plane field not grown");
    if (x < 0 || y < 0 || x > N_ || y > N_)
        throw NotMaterialized("cell outside the box");
    return tau_[static_cast<size_t>(y) * (N_ + 1) + x];
}

std::vector<std::pair<double, double>> QuarterField::shape_profile(long long t) const {
    if (tau_.empty()) throw NotMaterialized("quarter-plane field not grown");
    if (t > 0 && (tau(N_, 1) <= t || tau(1, N_) <= t))
        throw BoxExhausted("front reaches the box boundary before time " + std::to_string(t));
    std::vector<std::pair<double, double>> pts;
    if (t <= 0) {
        pts.push_back({0.0, 1.0});
        pts.push_back({0.0, 0.0});
        pts.push_back({1.0, 0.0});
        return pts;
    }
    double scale = static_cast<double>(t);
    for (int x = 1; x <= N_; ++x) {
        int top = 0;
        int lo = 1, hi = N_;
        // tau increases in y along a column
        while (lo <= hi) {
            int mid = (lo + hi) / 2;
            if (tau(x, mid) <= t) { top = mid; lo = mid + 1; }
            else hi = mid - 1;
        }
        if (top == 0) break;
        pts.push_back({x / scale, top / scale});
    }
    return pts;
}

QuarterField grow_quarter_plane(int N, const MeasureFamily& fam, std::uint64_t seed) {
    QuarterField f(N, seed);
    f.grow(fam);
    return f;
}

double lpp_shape_geometric_nstar(double x, double y, double p) {
    return (x + 2.0 * std::sqrt(x * y * (1.0 - p)) + y) / p;
}

double lpp_shape_geometric_n(double x, double y, double p) {
    return ((1.0 - p) * x + 2.0 * std::sqrt(x * y * (1.0 - p)) + (1.0 - p) * y) / p;
}

double lpp_shape_exponential(double x, double y, double lambda) {
    double s = std::sqrt(x) + std::sqrt(y);
    return s * s / lambda;
}

double shape_deviation(const QuarterField& field, long long t,
                       const std::function<double(double, double)>& shape) {
    auto pts = field.shape_profile(t);
    double dev = 0.0;
    bool any = false;
    for (auto& [x, y] : pts) {
        if (x <= 0.0 || y <= 0.0) continue;
        double slope = y / x;
        if (slope < 0.25 || slope > 4.0) continue;
        dev = std::max(dev, std::abs(shape(x, y) - 1.0));
        any = true;
    }
    if (!any) throw InsufficientSamples("no front points in the slope window");
    return dev;
}

// ---------------------------------------------------------------------------
// Superadditivity probe
// ---------------------------------------------------------------------------

namespace {

// quarter-plane growth reading its per-cell uniforms at an offset (used to
// replay the same draws for the shifted field)
std::vector<long long> grow_qp_offset(int nx, int ny, const MeasureFamily& fam,
                                      std::uint64_t seed, int ox, int oy) {
    std::vector<long long> tau(static_cast<size_t>(ny + 1) * (nx + 1), 0);
    for (int y = 1; y <= ny; ++y)
        for (int x = 1; x <= nx; ++x) {
            long long a = tau[static_cast<size_t>(y - 1) * (nx + 1) + x];
            long long b = tau[static_cast<size_t>(y) * (nx + 1) + x - 1];
            long long delta = std::llabs(a - b);
            double u = cell_uniform(seed, x + ox, y + oy);
            tau[static_cast<size_t>(y) * (nx + 1) + x] =
                std::max(a, b) + fam.at(static_cast<int>(delta)).sample(u);
        }
    return tau;
}

}  // namespace

std::string SuperadditivityReport::to_json() const {
    std::ostringstream os;
    os << "{\"replicas\":" << replicas << ",\"violations\":" << violations
       << ",\"mean_slack\":" << mean_slack
       << ",\"cond7_certified\":" << (cond7_certified ? "true" : "false") << "}";
    return os.str();
}

SuperadditivityReport superadditivity_probe(const MeasureFamily& fam,
                                            std::pair<int, int> z1, std::pair<int, int> z2,
                                            int replicas, std::uint64_t seed) {
    SuperadditivityReport rep;
    rep.replicas = replicas;
    rep.cond7_certified = check_cond_subadd(fam, 16, 64).passed;
    const int nx = z1.first + z2.first, ny = z1.second + z2.second;
    KahanSum slack;
    for (int r = 0; r < replicas; ++r) {
        std::uint64_t s = seed + static_cast<std::uint64_t>(r);
        auto tauA = grow_qp_offset(nx, ny, fam, s, 0, 0);
        auto at = [&](int x, int y) { return tauA[static_cast<size_t>(y) * (nx + 1) + x]; };
        long long t_sum = at(nx, ny);
        long long t_z1 = at(z1.first, z1.second);
        // fresh zero-boundary field of size z2 driven by the shifted draws
        long long t_z2;
        if (z2.first == 0 || z2.second == 0) {
            t_z2 = 0;  // boundary cells arrive at time 0
        } else {
            auto tauC = grow_qp_offset(z2.first, z2.second, fam, s, z1.first, z1.second);
            t_z2 = tauC[static_cast<size_t>(z2.second) * (z2.first + 1) + z2.first];
        }
        long long diff = (t_sum - t_z1) - t_z2;
        if (diff < 0) rep.violations += 1;
        slack.add(static_cast<double>(diff));
    }
    rep.mean_slack = replicas > 0 ? slack.value() / replicas : 0.0;
    return rep;
}

}  // namespace glpp
