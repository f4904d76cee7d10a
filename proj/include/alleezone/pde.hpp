#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "alleezone/baseline.hpp"
#include "alleezone/errors.hpp"
#include "alleezone/model.hpp"

namespace alleezone {

// ── Time-domain simulation of  u_t = u_xx + F(u) ─────────────────────────────

enum class Scheme { ExplicitEuler, SemiImplicitCN };

struct SimConfig {
    double dx = 0.025;
    double dt = 0.0;     // 0: defaults to dx for CN, dx^2/2 for explicit
    double t_end = 2000.0;
    Scheme scheme = Scheme::SemiImplicitCN;
    double persistence_floor = 0.0; // xi; 0: defaults to a/2
    std::function<double(double)> dirichlet_weight; // optional override of e~(x)
    int snapshot_count = 256;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> snapshots; // cell-centred density profiles
    std::vector<double> mass_floor_series;      // per-snapshot min of u (or u/e~)
    std::vector<double> cell_centers;
    double t_end = 0.0;
    double xi = 0.0; // floor actually used
};

// Default weight e~ for Dirichlet-end comparisons: the first eigenfunction
// shape of the matching Laplacian, clipped away from zero.
inline std::function<double(double)> default_dirichlet_weight(double L, const BoundarySpec& bc) {
    const double pi = std::numbers::pi;
    const bool dl = bc.dirichlet_left(), dr = bc.dirichlet_right();
    if (dl && dr) return [L, pi](double x) { return std::max(std::sin(pi * x / L), 1e-6); };
    if (dl) return [L, pi](double x) { return std::max(std::sin(pi * x / (2.0 * L)), 1e-6); };
    if (dr) return [L, pi](double x) { return std::max(std::cos(pi * x / (2.0 * L)), 1e-6); };
    return [](double) { return 1.0; };
}

namespace detail {

// Tridiagonal solve for (I + c A) u = rhs with A the cell-centred diffusion
// stencil including the ghost-eliminated boundary rows (Thomas algorithm).
struct DiffusionOperator {
    std::vector<double> diag; // A diagonal
    double off = 0.0;         // A off-diagonal (constant, -1/h^2)
    double h = 0.0;

    static DiffusionOperator build(double L, int n, const BoundarySpec& bc) {
        DiffusionOperator op;
        op.h = L / n;
        const double h = op.h;
        op.off = -1.0 / (h * h);
        op.diag.assign(static_cast<std::size_t>(n), 2.0 / (h * h));
        const double cl = (2.0 * bc.a1 - bc.a2 * h) / (2.0 * bc.a1 + bc.a2 * h);
        const double cr = (2.0 * bc.b1 - bc.b2 * h) / (2.0 * bc.b1 + bc.b2 * h);
        op.diag.front() -= cl / (h * h);
        op.diag.back() -= cr / (h * h);
        return op;
    }

    void apply(const std::vector<double>& u, std::vector<double>& out) const {
        const std::size_t n = u.size();
        for (std::size_t i = 0; i < n; ++i) {
            double v = diag[i] * u[i];
            if (i > 0) v += off * u[i - 1];
            if (i + 1 < n) v += off * u[i + 1];
            out[i] = v;
        }
    }

    // solves (I + c A) x = rhs in place
    void solve_shifted(double c, std::vector<double>& rhs, std::vector<double>& cprime) const {
        const std::size_t n = rhs.size();
        const double lower = c * off;
        cprime.resize(n);
        double beta = 1.0 + c * diag[0];
        cprime[0] = lower / beta;
        rhs[0] /= beta;
        for (std::size_t i = 1; i < n; ++i) {
            beta = 1.0 + c * diag[i] - lower * cprime[i - 1];
            cprime[i] = lower / beta;
            rhs[i] = (rhs[i] - lower * rhs[i - 1]) / beta;
        }
        for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= cprime[i] * rhs[i + 1];
    }
};

} // namespace detail

// Crank-Nicolson (implicit diffusion, explicit reaction) or explicit Euler.
// The first CN steps are taken as pairs of half-step backward Euler solves
// (Rannacher smoothing), which damps the boundary-layer ringing that CN
// would otherwise sustain from non-matching initial data at Dirichlet walls.
inline Trajectory simulate(const ZoneLayout& layout, const BoundarySpec& bc,
                           const GrowthPair& growth, const std::vector<double>& u0,
                           const SimConfig& cfg) {
    const double h = cfg.dx;
    if (!(h > 0.0) || !(cfg.t_end > 0.0))
        throw ValidationError("simulate: dx and t_end must be positive");
    const int n = static_cast<int>(std::lround(layout.L / h));
    if (n < 4 || std::abs(n * h - layout.L) > 1e-9 * layout.L)
        throw ValidationError("simulate: dx must divide L");
    double dt = cfg.dt;
    if (dt <= 0.0) dt = cfg.scheme == Scheme::ExplicitEuler ? 0.5 * h * h : h;
    if (cfg.scheme == Scheme::ExplicitEuler && dt > 0.5 * h * h * (1.0 + 1e-12))
        throw StabilityViolation("simulate: explicit Euler needs dt <= dx^2/2");

    std::vector<double> u;
    if (u0.size() == 1) u.assign(static_cast<std::size_t>(n), u0[0]);
    else if (u0.size() == static_cast<std::size_t>(n)) u = u0;
    else throw ValidationError("simulate: u0 must be scalar or match the grid");
    for (double v : u)
        if (v < 0.0) throw ValidationError("simulate: u0 must be nonnegative");

    Trajectory traj;
    traj.t_end = cfg.t_end;
    traj.xi = cfg.persistence_floor > 0.0 ? cfg.persistence_floor : 0.5 * growth.allee_a;
    traj.cell_centers.resize(static_cast<std::size_t>(n));
    std::vector<bool> in_zone(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = (i + 0.5) * h;
        traj.cell_centers[static_cast<std::size_t>(i)] = x;
        in_zone[static_cast<std::size_t>(i)] = x > layout.alpha && x < layout.alpha + layout.l;
    }
    auto weight = cfg.dirichlet_weight ? cfg.dirichlet_weight
                                       : default_dirichlet_weight(layout.L, bc);
    const bool weighted = bc.any_dirichlet();

    const auto op = detail::DiffusionOperator::build(layout.L, n, bc);
    const long nsteps = std::lround(cfg.t_end / dt);
    const long stride = std::max<long>(1, nsteps / std::max(1, cfg.snapshot_count));

    std::vector<double> react(static_cast<std::size_t>(n)), scratch, au(static_cast<std::size_t>(n));
    auto reaction = [&](const std::vector<double>& v) {
        for (std::size_t i = 0; i < v.size(); ++i)
            react[i] = in_zone[i] ? growth.f_eval(v[i]) : growth.g_eval(v[i]);
    };
    auto record = [&](double t) {
        traj.times.push_back(t);
        traj.snapshots.push_back(u);
        double floor_val = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double w = weighted ? weight(traj.cell_centers[i]) : 1.0;
            floor_val = std::min(floor_val, u[i] / w);
        }
        traj.mass_floor_series.push_back(floor_val);
    };
    auto clip = [&] {
        for (double& v : u) {
            if (v < 0.0) {
                if (v < -1e-12)
                    throw NegativeDensity("simulate: density fell below -1e-12");
                v = 0.0;
            }
        }
    };

    record(0.0);
    for (long step = 0; step < nsteps; ++step) {
        if (cfg.scheme == Scheme::ExplicitEuler) {
            reaction(u);
            op.apply(u, au);
            for (std::size_t i = 0; i < u.size(); ++i) u[i] += dt * (-au[i] + react[i]);
        } else if (step < 4) {
            for (int half = 0; half < 2; ++half) {
                reaction(u);
                for (std::size_t i = 0; i < u.size(); ++i) u[i] += 0.5 * dt * react[i];
                op.solve_shifted(0.5 * dt, u, scratch);
            }
        } else {
            reaction(u);
            op.apply(u, au);
            for (std::size_t i = 0; i < u.size(); ++i)
                u[i] += dt * (-0.5 * au[i] + react[i]);
            op.solve_shifted(0.5 * dt, u, scratch);
        }
        clip();
        if ((step + 1) % stride == 0 || step + 1 == nsteps) record((step + 1) * dt);
    }
    return traj;
}

// ── Long-term fate classification ────────────────────────────────────────────
//
// Over the trailing window: Persist when the (weighted) floor never drops
// below xi; Extinct when the profile maximum has decayed below xi/10 and is
// monotonically nonincreasing; anything else is Undecided.  A window shorter
// than 20% of the run is not evidence either way.
inline FateVerdict classify_fate(const Trajectory& traj, const BoundarySpec& bc, double xi,
                                 double window) {
    (void)bc; // the weighting was fixed when the trajectory was recorded
    FateVerdict verdict;
    verdict.verdict = Fate::Undecided;
    if (traj.times.empty()) return verdict;
    if (window < 0.2 * traj.t_end) return verdict;
    const double t0 = traj.t_end - window;

    double floor_min = std::numeric_limits<double>::infinity();
    double max_max = 0.0;
    bool monotone = true;
    double prev_max = std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        if (traj.times[k] < t0) continue;
        any = true;
        floor_min = std::min(floor_min, traj.mass_floor_series[k]);
        double mx = 0.0;
        for (double v : traj.snapshots[k]) mx = std::max(mx, v);
        if (mx > prev_max + 1e-12) monotone = false;
        prev_max = mx;
        max_max = std::max(max_max, mx);
    }
    if (!any) return verdict;
    verdict.sim_floor = floor_min;
    if (floor_min >= xi) verdict.verdict = Fate::Persist;
    else if (max_max < xi / 10.0 && monotone) verdict.verdict = Fate::Extinct;
    return verdict;
}

// ── Auxiliary Dirichlet steady state on the zone ─────────────────────────────

namespace detail {

// One adaptive Cash-Karp 4(5) step for the planar system
//   u' = v, v' = -f(u).
struct CkState {
    double x, u, v;
};

template <typename F>
inline bool ck_step(const F& f, CkState& s, double& hstep, double tol) {
    auto du = [](double, double v) { return v; };
    auto dv = [&f](double u, double) { return -f(u); };
    const double h = hstep;
    const double k1u = du(s.u, s.v), k1v = dv(s.u, s.v);
    double u2 = s.u + h * (k1u / 5.0), v2 = s.v + h * (k1v / 5.0);
    const double k2u = du(u2, v2), k2v = dv(u2, v2);
    double u3 = s.u + h * (3.0 / 40.0 * k1u + 9.0 / 40.0 * k2u);
    double v3 = s.v + h * (3.0 / 40.0 * k1v + 9.0 / 40.0 * k2v);
    const double k3u = du(u3, v3), k3v = dv(u3, v3);
    double u4 = s.u + h * (3.0 / 10.0 * k1u - 9.0 / 10.0 * k2u + 6.0 / 5.0 * k3u);
    double v4 = s.v + h * (3.0 / 10.0 * k1v - 9.0 / 10.0 * k2v + 6.0 / 5.0 * k3v);
    const double k4u = du(u4, v4), k4v = dv(u4, v4);
    double u5 = s.u + h * (-11.0 / 54.0 * k1u + 5.0 / 2.0 * k2u - 70.0 / 27.0 * k3u +
                           35.0 / 27.0 * k4u);
    double v5 = s.v + h * (-11.0 / 54.0 * k1v + 5.0 / 2.0 * k2v - 70.0 / 27.0 * k3v +
                           35.0 / 27.0 * k4v);
    const double k5u = du(u5, v5), k5v = dv(u5, v5);
    double u6 = s.u + h * (1631.0 / 55296.0 * k1u + 175.0 / 512.0 * k2u +
                           575.0 / 13824.0 * k3u + 44275.0 / 110592.0 * k4u +
                           253.0 / 4096.0 * k5u);
    double v6 = s.v + h * (1631.0 / 55296.0 * k1v + 175.0 / 512.0 * k2v +
                           575.0 / 13824.0 * k3v + 44275.0 / 110592.0 * k4v +
                           253.0 / 4096.0 * k5v);
    const double k6u = du(u6, v6), k6v = dv(u6, v6);

    const double u5th = s.u + h * (37.0 / 378.0 * k1u + 250.0 / 621.0 * k3u +
                                   125.0 / 594.0 * k4u + 512.0 / 1771.0 * k6u);
    const double v5th = s.v + h * (37.0 / 378.0 * k1v + 250.0 / 621.0 * k3v +
                                   125.0 / 594.0 * k4v + 512.0 / 1771.0 * k6v);
    const double u4th = s.u + h * (2825.0 / 27648.0 * k1u + 18575.0 / 48384.0 * k3u +
                                   13525.0 / 55296.0 * k4u + 277.0 / 14336.0 * k5u +
                                   0.25 * k6u);
    const double v4th = s.v + h * (2825.0 / 27648.0 * k1v + 18575.0 / 48384.0 * k3v +
                                   13525.0 / 55296.0 * k4v + 277.0 / 14336.0 * k5v +
                                   0.25 * k6v);
    const double err = std::max(std::abs(u5th - u4th), std::abs(v5th - v4th));
    const double scale = tol * (1.0 + std::max(std::abs(s.u), std::abs(s.v)));
    if (err > scale) {
        hstep = std::max(0.2 * h, 0.9 * h * std::pow(scale / err, 0.25));
        return false;
    }
    s.x += h;
    s.u = u5th;
    s.v = v5th;
    if (err > 0.0) hstep = std::min(5.0 * h, 0.9 * h * std::pow(scale / err, 0.2));
    else hstep = 5.0 * h;
    return true;
}

} // namespace detail

// Unique positive solution of  u'' + f(u) = 0, u(0) = u(l) = 0, existing
// when f'(0) > pi^2/l^2.  Found by shooting on the initial slope: the first
// zero of the trajectory moves monotonically right as the slope grows, so
// bisection pins the slope whose first zero sits exactly at l.
inline std::vector<std::pair<double, double>>
theta_f(double zone_length, const GrowthPair& growth, double tol = 1e-11,
        int n_samples = 1025) {
    const double l = zone_length;
    const double pi = std::numbers::pi;
    if (!(growth.fp0 > pi * pi / (l * l)))
        throw BelowThreshold("theta_f: requires f'(0) > pi^2/l^2");
    const auto& f = growth.f_eval;

    // energy bound: s_max = sqrt(2 int_0^1 f), the heteroclinic slope
    double Fmax = 0.0;
    {
        const int m = 2048;
        double acc = 0.0;
        for (int i = 0; i < m; ++i) {
            const double x0 = static_cast<double>(i) / m, x1 = static_cast<double>(i + 1) / m;
            acc += (f(x0) + 4.0 * f(0.5 * (x0 + x1)) + f(x1)) * (x1 - x0) / 6.0;
        }
        Fmax = acc;
    }
    const double s_max = std::sqrt(2.0 * Fmax);

    // only the position of the first zero relative to l matters, so the
    // trajectory is never integrated past l
    const double x_cap = l * (1.0 + 1e-12) + 1e-12;
    auto first_zero = [&](double slope) {
        detail::CkState st{0.0, 0.0, slope};
        double hstep = l / 256.0;
        double prev_x = 0.0, prev_u = 0.0;
        while (st.x < x_cap) {
            prev_x = st.x;
            prev_u = st.u;
            detail::CkState trial = st;
            double htry = std::min(hstep, x_cap - st.x);
            if (htry < 1e-14 * l) break; // cap reached to FP resolution
            if (!detail::ck_step(f, trial, htry, tol)) {
                hstep = htry;
                continue;
            }
            hstep = htry;
            st = trial;
            if (st.u <= 0.0 && st.x > 0.0 && prev_u > 0.0)
                return prev_x + (st.x - prev_x) * prev_u / (prev_u - st.u);
        }
        return x_cap + l;
    };

    double lo = 1e-12, hi = s_max * (1.0 - 1e-12);
    for (int it = 0; it < 100 && hi - lo > 1e-15 * s_max; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (first_zero(mid) < l) lo = mid;
        else hi = mid;
    }
    const double slope = 0.5 * (lo + hi);

    // dense output on the sample grid
    std::vector<std::pair<double, double>> profile;
    profile.reserve(static_cast<std::size_t>(n_samples));
    detail::CkState st{0.0, 0.0, slope};
    double hstep = l / 1024.0;
    profile.emplace_back(0.0, 0.0);
    for (int j = 1; j < n_samples; ++j) {
        const double xt = l * static_cast<double>(j) / (n_samples - 1);
        while (st.x < xt) {
            double htry = std::min(hstep, xt - st.x);
            if (htry < 1e-14 * l) break;
            detail::CkState trial = st;
            if (detail::ck_step(f, trial, htry, tol)) {
                st = trial;
                hstep = std::min(htry, l / 64.0);
            } else {
                hstep = htry;
            }
        }
        profile.emplace_back(xt, std::max(0.0, st.u));
    }
    profile.back().second = 0.0;
    return profile;
}

// Sufficient extinction condition: with a non-Neumann pair and subhomogeneous
// growth, lambda0(L) > f'(0) forces every nonnegative solution to zero.
inline bool extinction_sufficient(const GrowthPair& growth, const BoundarySpec& bc, double L) {
    if (bc.kind_left == BoundaryKind::Neumann && bc.kind_right == BoundaryKind::Neumann)
        throw NotApplicable("extinction_sufficient: vacuous for the Neumann-Neumann pair");
    return lambda0(L, bc) > growth.fp0;
}

} // namespace alleezone
