#pragma once

#include <cmath>
#include <numbers>

#include "alleezone/errors.hpp"
#include "alleezone/model.hpp"

namespace alleezone {

// Principal eigenvalue lambda0(L) of  -phi'' = lambda phi  under the given
// boundary rows.  Pure Neumann/Dirichlet combinations have closed forms;
// rows with a true Robin end satisfy a transcendental relation that is
// solved on the s = sqrt(lambda0) axis, where it is smooth.
//
// The relation, cross-multiplied so it has no poles, is
//     s (a2 b1 + a1 b2) cos(sL) - (a1 b1 s^2 - a2 b2) sin(sL) = 0,
// which reduces to each mixed row (tan sL = a2/(a1 s), tan sL = -b1 s/b2,
// cot sL = ...) when the opposite end degenerates.
namespace detail {

inline double robin_relation(double s, double L, const BoundarySpec& bc) {
    return s * (bc.a2 * bc.b1 + bc.a1 * bc.b2) * std::cos(s * L) -
           (bc.a1 * bc.b1 * s * s - bc.a2 * bc.b2) * std::sin(s * L);
}

} // namespace detail

inline double lambda0(double L, const BoundarySpec& bc, double tol = 1e-13) {
    if (!(L > 0.0)) throw ValidationError("lambda0: L must be positive");
    if (!(tol > 0.0)) throw ValidationError("lambda0: tol must be positive");
    const double pi = std::numbers::pi;

    const bool nl = bc.kind_left == BoundaryKind::Neumann;
    const bool nr = bc.kind_right == BoundaryKind::Neumann;
    const bool dl = bc.kind_left == BoundaryKind::Dirichlet;
    const bool dr = bc.kind_right == BoundaryKind::Dirichlet;
    if (nl && nr) return 0.0;
    if (dl && dr) return pi * pi / (L * L);
    if ((nl && dr) || (dl && nr)) return pi * pi / (4.0 * L * L);

    // Smallest positive root on s in (0, 2 pi / L], stepped in 64 panels so
    // the leftmost sign change is isolated before any further root.
    const double s_max = 2.0 * pi / L;
    const int panels = 64;
    double prev_s = 1e-14 * s_max;
    double prev_f = detail::robin_relation(prev_s, L, bc);
    for (int i = 1; i <= panels; ++i) {
        const double s = s_max * static_cast<double>(i) / panels;
        const double f = detail::robin_relation(s, L, bc);
        if (prev_f == 0.0) return prev_s * prev_s;
        if (prev_f * f < 0.0) {
            double lo = prev_s, hi = s, flo = prev_f;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = detail::robin_relation(mid, L, bc);
                if (fm == 0.0) { lo = hi = mid; break; }
                if (flo * fm < 0.0) hi = mid;
                else { lo = mid; flo = fm; }
                if (hi - lo <= 1e-17 * s_max) break;
            }
            const double root = 0.5 * (lo + hi);
            if (std::abs(detail::robin_relation(root, L, bc)) > tol &&
                std::abs(detail::robin_relation(root, L, bc)) >
                    tol * (1.0 + std::abs(bc.a1 * bc.b1) * root * root))
                throw NumericalError("lambda0: bisection stalled above tolerance");
            return root * root;
        }
        prev_s = s;
        prev_f = f;
    }
    throw NumericalError("lambda0: no bracket found in (0, (2 pi / L)^2]");
}

// Rigid spectral bracket for the piecewise problem:
//   lambda0(L) - f'(0)  <  lambda1(alpha, l)  <  lambda0(L) - g'(0)
// for every interior zone, since the piecewise potential sits strictly
// between the two constant ones.
struct Bracket {
    double lo; // lambda_{L,f}
    double hi; // lambda_{L,g}
};

inline Bracket spectral_bracket(double L, const BoundarySpec& bc, const GrowthPair& growth) {
    const double lam0 = lambda0(L, bc);
    return Bracket{lam0 - growth.fp0, lam0 - growth.gp0};
}

} // namespace alleezone
