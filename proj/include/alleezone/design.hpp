#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "alleezone/eigen.hpp"
#include "alleezone/errors.hpp"
#include "alleezone/model.hpp"

namespace alleezone {

// ── Optimal zone placement ────────────────────────────────────────────────────

enum class BoundaryFamily { NN, DD, ND, DN, Robin };

inline BoundaryFamily boundary_family(const BoundarySpec& bc) {
    const bool nl = bc.kind_left == BoundaryKind::Neumann;
    const bool nr = bc.kind_right == BoundaryKind::Neumann;
    const bool dl = bc.kind_left == BoundaryKind::Dirichlet;
    const bool dr = bc.kind_right == BoundaryKind::Dirichlet;
    if (nl && nr) return BoundaryFamily::NN;
    if (dl && dr) return BoundaryFamily::DD;
    if (nl && dr) return BoundaryFamily::ND;
    if (dl && nr) return BoundaryFamily::DN;
    return BoundaryFamily::Robin;
}

inline const char* to_string(BoundaryFamily f) {
    switch (f) {
        case BoundaryFamily::NN: return "NN";
        case BoundaryFamily::DD: return "DD";
        case BoundaryFamily::ND: return "ND";
        case BoundaryFamily::DN: return "DN";
        default:                 return "Robin";
    }
}

namespace detail {

inline double lambda1_at(double L, double alpha, double l, const BoundarySpec& bc,
                         const GrowthPair& growth, double tol = 1e-12) {
    return principal_eigenvalue(ZoneLayout(L, alpha, l), bc, growth, tol).lambda1;
}

// Golden-section minimisation of lambda1(alpha) on [lo, hi].
inline double golden_min(const std::function<double(double)>& f, double lo, double hi,
                         double tol) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = f(c), fd = f(d);
    while (hi - lo > tol) {
        if (fc < fd) {
            hi = d; d = c; fd = fc;
            c = hi - gr * (hi - lo);
            fc = f(c);
        } else {
            lo = c; c = d; fc = fd;
            d = lo + gr * (hi - lo);
            fd = f(d);
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace detail

// Minimising starts of lambda1(alpha, l).  The monotone families have
// closed answers; Neumann ends tie, so both are reported.  Robin pairs are
// minimised numerically by golden section restarted from both ends and the
// midpoint, the monotone answers being the natural hypotheses.
inline std::vector<double> optimal_alpha(double l, double L, const BoundarySpec& bc,
                                         const GrowthPair& growth) {
    if (!(l > 0.0 && l <= L)) throw ValidationError("optimal_alpha: need 0 < l <= L");
    const double slack = L - l;
    switch (boundary_family(bc)) {
        case BoundaryFamily::NN: return slack > 0.0 ? std::vector<double>{0.0, slack}
                                                    : std::vector<double>{0.0};
        case BoundaryFamily::DD: return {slack / 2.0};
        case BoundaryFamily::ND: return {0.0};
        case BoundaryFamily::DN: return {slack};
        default: break;
    }
    if (slack == 0.0) return {0.0};
    auto f = [&](double a) { return detail::lambda1_at(L, a, l, bc, growth); };
    const double tol = 1e-6 * L;
    double best_a = 0.0, best_v = f(0.0);
    for (double seed_lo : {0.0, slack / 4.0, slack / 2.0}) {
        const double a = detail::golden_min(f, seed_lo, std::min(slack, seed_lo + slack / 2.0), tol);
        const double v = f(a);
        if (v < best_v) { best_v = v; best_a = a; }
    }
    for (double end : {0.0, slack}) {
        const double v = f(end);
        if (v < best_v) { best_v = v; best_a = end; }
    }
    return {best_a};
}

// ── Critical zone lengths ─────────────────────────────────────────────────────
//
// Closed-form sufficiency thresholds: any-placement persistence is implied
// by f'(0) >= pi^2/(4 l^2) for the Neumann pair (l1_bar = pi/(2 sqrt(f'0)))
// and by f'(0) >= pi^2/l^2 otherwise (l1_bar = pi/sqrt(f'0)); the mixed
// pairs also split at l2_bar = pi/(2 sqrt(f'0)).  The remaining thresholds
// are sharp zero crossings of lambda1 at the family's optimal start, found
// by bisection in l (lambda1 is strictly decreasing in l, so each root is
// unique).  Entries outside (0, L) are omitted.
inline std::map<std::string, double> critical_lengths(const BoundarySpec& bc,
                                                      const GrowthPair& growth, double L,
                                                      double tol = 1e-10) {
    if (!(tol > 0.0)) throw ValidationError("critical_lengths: tol must be positive");
    const double pi = std::numbers::pi;
    std::map<std::string, double> out;
    const auto family = boundary_family(bc);
    if (family == BoundaryFamily::Robin) return out;

    auto lam = [&](double alpha, double l) {
        return detail::lambda1_at(L, alpha, l, bc, growth, 1e-13);
    };
    // root of lambda1(alpha(l), l) = 0 for l in (lo, hi), if it brackets
    auto bisect_l = [&](const std::function<double(double)>& alpha_of_l, double lo,
                        double hi) -> std::optional<double> {
        double flo = lam(alpha_of_l(lo), lo), fhi = lam(alpha_of_l(hi), hi);
        if (flo * fhi > 0.0) return std::nullopt;
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            const double fm = lam(alpha_of_l(mid), mid);
            if (fm == 0.0) return mid;
            if (flo * fm < 0.0) hi = mid;
            else { lo = mid; flo = fm; }
        }
        return 0.5 * (lo + hi);
    };
    const double l_lo = 1e-4 * L, l_hi = L * (1.0 - 1e-9);

    if (family == BoundaryFamily::NN) {
        const double l1 = pi / (2.0 * std::sqrt(growth.fp0));
        if (l1 < L) {
            out["l1_bar"] = l1;
            if (lam(0.0, l1) < 0.0)
                if (auto r = bisect_l([](double) { return 0.0; }, l_lo, l1)) out["l2_bar"] = *r;
        } else {
            // zone at an end: lambda1(0, l) crosses zero at l_tilde
            if (auto r = bisect_l([](double) { return 0.0; }, l_lo, l_hi)) out["l_tilde"] = *r;
        }
        return out;
    }

    const double l1 = pi / std::sqrt(growth.fp0);
    if (family == BoundaryFamily::DD) {
        if (l1 < L) {
            out["l1_bar"] = l1;
            auto mid = [L](double l) { return (L - l) / 2.0; };
            if (lam(mid(l1), l1) < 0.0)
                if (auto r = bisect_l(mid, l_lo, l1)) out["l2_bar"] = *r;
        }
        return out;
    }

    // mixed pairs: optimal start hugs the Neumann end
    const double l2 = pi / (2.0 * std::sqrt(growth.fp0));
    auto best = [&](double l) { return family == BoundaryFamily::ND ? 0.0 : L - l; };
    if (l1 < L) out["l1_bar"] = l1;
    if (l2 < L) {
        out["l2_bar"] = l2;
        if (lam(best(l2), l2) < 0.0)
            if (auto r = bisect_l(best, l_lo, l2)) out["l3_bar"] = *r;
    }
    return out;
}

// ── Design report ─────────────────────────────────────────────────────────────

struct AlphaStar {
    enum class Kind { Values, Anywhere, None } kind = Kind::None;
    std::vector<double> values;

    static AlphaStar anywhere() { return {Kind::Anywhere, {}}; }
    static AlphaStar none() { return {Kind::None, {}}; }
    static AlphaStar at(std::vector<double> v) { return {Kind::Values, std::move(v)}; }
};

struct DesignReport {
    std::string regime;
    std::map<std::string, double> l_bars;
    AlphaStar alpha_star;
    FateVerdict verdict_at_optimum;
    std::string rule; // the design rule applied, in words
};

namespace detail {

// verify an "any placement works" claim on a 50-point alpha grid
inline bool sign_on_alpha_grid(double L, double l, const BoundarySpec& bc,
                               const GrowthPair& growth, bool want_negative) {
    const double slack = L - l;
    for (int i = 0; i < 50; ++i) {
        const double a = slack * static_cast<double>(i) / 49.0;
        const double v = lambda1_at(L, a, l, bc, growth);
        if (want_negative ? v >= 0.0 : v <= 0.0) return false;
    }
    return true;
}

} // namespace detail

// Classify the parameter point into its regime and recommend a placement.
// Every claim the report makes is re-verified by direct lambda1 evaluations
// (a 50-point alpha grid for "anywhere"/"nowhere" claims, the recommended
// layout otherwise); the inequality-based branch labels are advisory and
// the eigenvalue sign is authoritative.  Robin pairs skip the inequality
// machinery and classify from direct evaluations at the numeric optimum.
inline DesignReport design_report(double L, const BoundarySpec& bc, const GrowthPair& growth,
                                  std::optional<double> l_opt = std::nullopt) {
    DesignReport rep;
    const auto family = boundary_family(bc);
    rep.l_bars = critical_lengths(bc, growth, L);
    rep.regime = to_string(family);

    if (!l_opt) {
        rep.alpha_star = AlphaStar::none();
        rep.rule = "no zone length given: thresholds only";
        return rep;
    }
    const double l = *l_opt;
    if (!(l > 0.0 && l <= L)) throw ValidationError("design_report: need 0 < l <= L");

    const auto starts = optimal_alpha(l, L, bc, growth);
    const double a_best = starts.front();
    const double lam_best = detail::lambda1_at(L, a_best, l, bc, growth);

    const bool degenerate = !(L - l > 0.0);
    const bool anywhere =
        degenerate ? lam_best < 0.0 : detail::sign_on_alpha_grid(L, l, bc, growth, true);
    const bool nowhere =
        degenerate ? lam_best > 0.0 : detail::sign_on_alpha_grid(L, l, bc, growth, false);

    rep.verdict_at_optimum.lambda1 = lam_best;
    rep.verdict_at_optimum.verdict = lam_best < 0.0 ? Fate::Persist : Fate::Extinct;

    const auto fam_name = std::string(to_string(family));
    if (anywhere) {
        rep.regime = fam_name + " persist-anywhere";
        rep.alpha_star = AlphaStar::anywhere();
        rep.rule = "lambda1 < 0 for every feasible start; any placement maintains the population";
    } else if (nowhere) {
        rep.regime = fam_name + " extinct-everywhere";
        rep.alpha_star = AlphaStar::none();
        rep.rule = "lambda1 > 0 for every feasible start; no placement of this length rescues "
                   "small populations";
    } else if (lam_best < 0.0) {
        rep.regime = fam_name + " placement-sensitive";
        rep.alpha_star = AlphaStar::at(starts);
        rep.rule = "lambda1 < 0 only near the optimal start; place the zone there";
    } else {
        rep.regime = fam_name + " insufficient-length";
        rep.alpha_star = AlphaStar::none();
        rep.rule = "even the optimal start gives lambda1 >= 0; lengthen the zone";
    }
    return rep;
}

// ── Sweep tables ──────────────────────────────────────────────────────────────

struct SweepTable {
    std::vector<double> alphas;
    std::vector<double> ls;
    // row-major [i_alpha][i_l]; infeasible cells are NaN
    std::vector<double> lambda;

    double& at(std::size_t ia, std::size_t il) { return lambda[ia * ls.size() + il]; }
    double at(std::size_t ia, std::size_t il) const { return lambda[ia * ls.size() + il]; }
};

// Parallel driver for independent lambda1 cells; thread count capped by the
// ALLEE_ZONE_THREADS environment variable.
int sweep_thread_cap();

SweepTable sweep(double L, const BoundarySpec& bc, const GrowthPair& growth,
                 const std::vector<double>& alpha_grid, const std::vector<double>& l_grid);

} // namespace alleezone

// implementation kept out of the class body to pull in <thread> lazily
#include <atomic>
#include <cstdlib>
#include <thread>

namespace alleezone {

inline int sweep_thread_cap() {
    if (const char* env = std::getenv("ALLEE_ZONE_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

inline SweepTable sweep(double L, const BoundarySpec& bc, const GrowthPair& growth,
                        const std::vector<double>& alpha_grid, const std::vector<double>& l_grid) {
    SweepTable table;
    table.alphas = alpha_grid;
    table.ls = l_grid;
    table.lambda.assign(alpha_grid.size() * l_grid.size(),
                        std::numeric_limits<double>::quiet_NaN());
    const std::size_t cells = table.lambda.size();
    const int nthreads = std::min<int>(sweep_thread_cap(), static_cast<int>(cells) > 0
                                                               ? static_cast<int>(cells)
                                                               : 1);
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= cells || failed.load()) return;
            const double a = alpha_grid[k / l_grid.size()];
            const double l = l_grid[k % l_grid.size()];
            if (!(l > 0.0) || a < 0.0 || a + l > L) continue;
            try {
                table.lambda[k] =
                    principal_eigenvalue(ZoneLayout(L, a, l), bc, growth).lambda1;
            } catch (...) {
                if (!failed.exchange(true)) first_error = std::current_exception();
                return;
            }
        }
    };
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failed.load() && first_error) std::rethrow_exception(first_error);
    return table;
}

} // namespace alleezone
