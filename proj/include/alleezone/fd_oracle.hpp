#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "alleezone/errors.hpp"
#include "alleezone/model.hpp"

namespace alleezone {

// ── Finite-difference discretisation ─────────────────────────────────────────
//
// Independent brute-force route to lambda1: discretise
//   -phi'' + H(x) phi = lambda phi
// on a cell-centred grid x_i = (i + 1/2) h, h = L/n.  Each boundary row is
// eliminated through a ghost cell chosen so the face value/derivative obey
// the Robin row to second order:
//   phi_ghost = c * phi_0,   c = (2 a1 - a2 h) / (2 a1 + a2 h)
// (c = 1 reproduces Neumann, c = -1 the Dirichlet reflection).  The result
// is symmetric with off-diagonal entries exactly -1/h^2, so Sturm-sequence
// bisection applies directly.  H is sampled per cell as the length-weighted
// average over the cell's overlap with the protection zone, which keeps the
// O(h^2) convergence through the potential discontinuities.
struct Tridiag {
    std::vector<double> diag;
    std::vector<double> off; // length diag.size()-1
    double h = 0.0;
};

inline Tridiag assemble(const ZoneLayout& layout, const BoundarySpec& bc,
                        const GrowthPair& growth, int n) {
    if (n < 16) throw ValidationError("assemble: need n >= 16");
    Tridiag t;
    const double h = layout.L / n;
    t.h = h;
    t.diag.resize(static_cast<std::size_t>(n));
    t.off.assign(static_cast<std::size_t>(n) - 1, -1.0 / (h * h));

    const double h_in = -growth.fp0, h_out = -growth.gp0;
    const double z0 = layout.alpha, z1 = layout.alpha + layout.l;
    for (int i = 0; i < n; ++i) {
        const double xl = i * h, xr = xl + h;
        const double overlap = std::max(0.0, std::min(xr, z1) - std::max(xl, z0));
        t.diag[static_cast<std::size_t>(i)] = 2.0 / (h * h) + h_out + (h_in - h_out) * overlap / h;
    }
    // boundary rows: (2 - c)/h^2 replaces the interior 2/h^2
    const double cl = (2.0 * bc.a1 - bc.a2 * h) / (2.0 * bc.a1 + bc.a2 * h);
    const double cr = (2.0 * bc.b1 - bc.b2 * h) / (2.0 * bc.b1 + bc.b2 * h);
    t.diag.front() -= cl / (h * h);
    t.diag.back() -= cr / (h * h);
    return t;
}

namespace detail {

// Number of eigenvalues of T strictly below sigma, by the standard
// two-term Sturm recurrence on the leading minors with underflow guarding.
inline int sturm_count(const Tridiag& t, double sigma) {
    const std::size_t n = t.diag.size();
    int count = 0;
    double q = t.diag[0] - sigma;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < n; ++i) {
        const double e = t.off[i - 1];
        if (q == 0.0) q = 1e-300;
        q = (t.diag[i] - sigma) - e * e / q;
        if (q < 0.0) ++count;
    }
    return count;
}

} // namespace detail

// Smallest eigenvalue via Sturm bisection.  Gershgorin disks give an
// a-priori bracket, so the count is 0 at the lower end and n at the upper.
inline double smallest_eig(const Tridiag& t, double tol = 1e-12) {
    if (!(tol > 0.0)) throw ValidationError("smallest_eig: tol must be positive");
    const std::size_t n = t.diag.size();
    double lo = t.diag[0], hi = t.diag[0];
    for (std::size_t i = 0; i < n; ++i) {
        double radius = 0.0;
        if (i > 0) radius += std::abs(t.off[i - 1]);
        if (i + 1 < n) radius += std::abs(t.off[i]);
        lo = std::min(lo, t.diag[i] - radius);
        hi = std::max(hi, t.diag[i] + radius);
    }
    lo -= 1.0;
    hi += 1.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (detail::sturm_count(t, mid) >= 1) hi = mid;
        else lo = mid;
    }
    return 0.5 * (lo + hi);
}

struct OracleValue {
    double value;        // Richardson-extrapolated smallest eigenvalue
    double err_estimate; // |fine - coarse|
};

inline constexpr int kOracleDefaultN = 4096;

// Discrete eigenvalue at n and 2n cells, extrapolated under the O(h^2)
// error model.  A third, coarser solve watches that refinement actually
// shrinks the error; a stalled ratio flags a mishandled zone seam.
inline OracleValue oracle_eigenvalue(const ZoneLayout& layout, const BoundarySpec& bc,
                                     const GrowthPair& growth, double tol = 1e-13,
                                     int n = kOracleDefaultN) {
    if (!(tol > 0.0)) throw ValidationError("oracle_eigenvalue: tol must be positive");
    n = std::max(n, 2048); // keep h <= L/2048
    const double e_half = smallest_eig(assemble(layout, bc, growth, n / 2), tol);
    const double e1 = smallest_eig(assemble(layout, bc, growth, n), tol);
    const double e2 = smallest_eig(assemble(layout, bc, growth, 2 * n), tol);
    const double d1 = std::abs(e1 - e_half);
    const double d2 = std::abs(e2 - e1);
    if (d2 > 0.5 * d1 && d2 > 64.0 * tol)
        throw NonConvergent("oracle_eigenvalue: refinement stalled (non-O(h^2) behaviour)");
    return {e2 + (e2 - e1) / 3.0, d2};
}

} // namespace alleezone
