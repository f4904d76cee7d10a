#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "alleezone/errors.hpp"

namespace alleezone {

// ── Growth laws ───────────────────────────────────────────────────────────────
//
// The habitat carries two per-capita growth laws: logistic f inside the
// protection zone and strong-Allee g outside it.  The eigenvalue machinery
// only ever sees the linearisations f'(0) > 0 and g'(0) < 0; the nonlinear
// callables feed the time-domain simulator.
//
// Defaults: f(u) = r u (1-u),  g(u) = r u (1-u)(u-a),  so f'(0) = r and
// g'(0) = -r a.  Subhomogeneity requires f'(0) >= -g'(0).
struct GrowthPair {
    double fp0;     // f'(0) > 0
    double gp0;     // g'(0) < 0
    double allee_a; // sparsity threshold, in (0,1)
    double rate_r;  // intrinsic rate, > 0
    std::function<double(double)> f_eval;
    std::function<double(double)> g_eval;

    GrowthPair(double fp0_, double gp0_, double a, double r,
               std::function<double(double)> f, std::function<double(double)> g)
        : fp0(fp0_), gp0(gp0_), allee_a(a), rate_r(r),
          f_eval(std::move(f)), g_eval(std::move(g)) {
        if (!(fp0 > 0.0))
            throw ValidationError("GrowthPair: f'(0) must be positive");
        if (!(gp0 < 0.0))
            throw ValidationError("GrowthPair: g'(0) must be negative");
        if (fp0 < -gp0)
            throw ValidationError("GrowthPair: subhomogeneity needs f'(0) >= -g'(0)");
        if (!(a > 0.0 && a < 1.0))
            throw ValidationError("GrowthPair: Allee threshold must lie in (0,1)");
        if (!(r > 0.0))
            throw ValidationError("GrowthPair: rate must be positive");
    }

    // Cubic/logistic defaults for given (r, a).
    static GrowthPair cubic_logistic(double r, double a) {
        return GrowthPair(r, -r * a, a, r,
                          [r](double u) { return r * u * (1.0 - u); },
                          [r, a](double u) { return r * u * (1.0 - u) * (u - a); });
    }
};

// ── Boundary conditions ───────────────────────────────────────────────────────

enum class BoundaryKind { Neumann, Dirichlet, Robin };

inline const char* to_string(BoundaryKind k) {
    switch (k) {
        case BoundaryKind::Neumann:   return "Neumann";
        case BoundaryKind::Dirichlet: return "Dirichlet";
        default:                      return "Robin";
    }
}

// Robin rows  a1 u'(0) - a2 u(0) = 0  and  b1 u'(L) + b2 u(L) = 0 with
// nonnegative coefficients, not both zero per end.  Neumann and Dirichlet
// are the degenerate rows a2 = 0 and a1 = 0.
struct BoundarySpec {
    double a1, a2; // left row
    double b1, b2; // right row
    BoundaryKind kind_left;
    BoundaryKind kind_right;

    BoundarySpec(double a1_, double a2_, double b1_, double b2_)
        : a1(a1_), a2(a2_), b1(b1_), b2(b2_),
          kind_left(classify_end(a1_, a2_, "left")),
          kind_right(classify_end(b1_, b2_, "right")) {}

    static BoundarySpec neumann_neumann()     { return {1.0, 0.0, 1.0, 0.0}; }
    static BoundarySpec dirichlet_dirichlet() { return {0.0, 1.0, 0.0, 1.0}; }
    static BoundarySpec neumann_dirichlet()   { return {1.0, 0.0, 0.0, 1.0}; }
    static BoundarySpec dirichlet_neumann()   { return {0.0, 1.0, 1.0, 0.0}; }

    bool dirichlet_left() const  { return kind_left == BoundaryKind::Dirichlet; }
    bool dirichlet_right() const { return kind_right == BoundaryKind::Dirichlet; }
    bool any_dirichlet() const   { return dirichlet_left() || dirichlet_right(); }

    // Swap the ends; used by the x -> L-x reflection identity.
    BoundarySpec reflected() const { return {b1, b2, a1, a2}; }

  private:
    static BoundaryKind classify_end(double c1, double c2, const char* side) {
        if (c1 < 0.0 || c2 < 0.0)
            throw ValidationError(std::string("BoundarySpec: negative coefficient on ") + side);
        if (c1 == 0.0 && c2 == 0.0)
            throw ValidationError(std::string("BoundarySpec: zero row on ") + side);
        if (c2 == 0.0) return BoundaryKind::Neumann;
        if (c1 == 0.0) return BoundaryKind::Dirichlet;
        return BoundaryKind::Robin;
    }
};

// ── Zone geometry ─────────────────────────────────────────────────────────────

// Protection zone [alpha, alpha+l] inside the habitat [0, L].
struct ZoneLayout {
    double L;
    double alpha;
    double l;

    ZoneLayout(double L_, double alpha_, double l_) : L(L_), alpha(alpha_), l(l_) {
        if (!(L > 0.0)) throw ValidationError("ZoneLayout: habitat length must be positive");
        if (alpha < 0.0) throw ValidationError("ZoneLayout: zone start must be nonnegative");
        if (!(l > 0.0)) throw ValidationError("ZoneLayout: zone length must be positive");
        if (alpha + l > L * (1.0 + 1e-15) || alpha + l > L + 1e-12)
            throw ValidationError("ZoneLayout: zone must fit inside the habitat");
    }

    double zone_end() const { return alpha + l; }
    ZoneLayout reflected() const { return {L, L - alpha - l, l}; }
};

// ── Spectral case classification ──────────────────────────────────────────────

// Sign of g'(0) + lambda1 decides which closed-form regime applies:
//   H1: g'(0)+lambda1 < 0  (hyperbolic outside the zone)
//   H2: g'(0)+lambda1 = 0  (linear outside the zone)
//   H3: g'(0)+lambda1 > 0  (oscillatory outside the zone)
enum class CaseTag { H1, H2, H3 };

inline const char* to_string(CaseTag t) {
    switch (t) {
        case CaseTag::H1: return "H1";
        case CaseTag::H2: return "H2";
        default:          return "H3";
    }
}

// H2 is a measure-zero seam; it is detected by a tolerance band.
inline constexpr double kCaseTagTol = 1e-9;

inline CaseTag classify_case(double lambda, double gp0, double tol = kCaseTagTol) {
    const double mu = gp0 + lambda;
    if (mu < -tol) return CaseTag::H1;
    if (mu > tol) return CaseTag::H3;
    return CaseTag::H2;
}

// ── Results ───────────────────────────────────────────────────────────────────

struct SpectralResult {
    double lambda1 = 0.0;
    CaseTag case_tag = CaseTag::H1;
    double f_tilde = 0.0; // sqrt(f'(0) + lambda1), always real
    double g_tilde = 0.0; // sqrt(|g'(0) + lambda1|)
    double residual = 0.0; // characteristic residual at lambda1
    std::vector<std::pair<double, double>> phi_samples; // (x, phi), max-normalised
};

enum class Fate { Persist, Extinct, Undecided };

inline const char* to_string(Fate f) {
    switch (f) {
        case Fate::Persist: return "Persist";
        case Fate::Extinct: return "Extinct";
        default:            return "Undecided";
    }
}

struct FateVerdict {
    Fate verdict = Fate::Undecided;
    double lambda1 = 0.0;
    double sim_floor = 0.0; // observed long-time minimum density (weighted for Dirichlet)
};

} // namespace alleezone
