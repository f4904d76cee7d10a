#pragma once

#include <cmath>

#include "alleezone/eigen.hpp"
#include "alleezone/errors.hpp"
#include "alleezone/model.hpp"

namespace alleezone {

struct SensitivityTerms {
    PaperConstants constants;  // populated in the hyperbolic (H1) regime
    double E_denominator = 0.0;
    double dlambda_dalpha = 0.0;
};

namespace detail {

// Entire-in-mu building blocks for the oscillatory/seam regimes, with
// mu = g'(0) + lambda:
//   sig(x) = sin(sqrt(mu) x)/sqrt(mu)   (= sinh analogue for mu < 0)
//   c(x)   = cos(sqrt(mu) x)
// and their mu-derivatives
//   d sig/d mu = (x c - sig)/(2 mu),   d c/d mu = -x sig / 2,
// evaluated by series near mu = 0 where the quotient cancels.
struct SigmaC {
    double sig, c, dsig, dc;
};

inline SigmaC sigma_c(double x, double mu) {
    const double z = mu * x * x;
    SigmaC out{};
    if (std::abs(z) < 1e-6) {
        out.sig = x * (1.0 - z / 6.0 + z * z / 120.0);
        out.c = 1.0 - z / 2.0 + z * z / 24.0;
        out.dsig = -(x * x * x) / 6.0 * (1.0 - z / 10.0 + z * z / 280.0);
    } else if (mu > 0.0) {
        const double s = std::sqrt(mu);
        out.sig = std::sin(s * x) / s;
        out.c = std::cos(s * x);
        out.dsig = (x * out.c - out.sig) / (2.0 * mu);
    } else {
        const double s = std::sqrt(-mu);
        out.sig = std::sinh(s * x) / s;
        out.c = std::cosh(s * x);
        out.dsig = (x * out.c - out.sig) / (2.0 * mu);
    }
    out.dc = -x * out.sig / 2.0;
    return out;
}

// d lambda1/d alpha in the H2/H3 regimes for the Dirichlet-Dirichlet pair,
// by implicit differentiation of the desingularised characteristic
//   Psi = sin(ft l) (ft^2 sig(a) sig(b) - c(a) c(b)) - ft sig(L-l) cos(ft l),
// whose zero set is the eigenvalue curve uniformly through the seam.
// The alpha-derivative collapses to
//   Psi_alpha = sin(ft l) (f'(0) - g'(0)) sig(L - 2 alpha - l).
inline SensitivityTerms dd_seam_sensitivity(double lambda, const ZoneLayout& lay,
                                            const GrowthPair& growth) {
    const double mu = growth.gp0 + lambda;
    const double ft = std::sqrt(growth.fp0 + lambda);
    const double l = lay.l, al = lay.alpha;
    const double b = lay.L - al - l, m = lay.L - l;
    const auto sa = sigma_c(al, mu), sb = sigma_c(b, mu), sm = sigma_c(m, mu);
    const auto sba = sigma_c(b - al, mu);
    const double Sl = std::sin(ft * l), Cl = std::cos(ft * l);
    const double dSl = l * Cl / (2.0 * ft), dCl = -l * Sl / (2.0 * ft);

    const double psi_al = Sl * (growth.fp0 - growth.gp0) * sba.sig;
    const double psi_lam =
        dSl * (ft * ft * sa.sig * sb.sig - sa.c * sb.c) +
        Sl * (sa.sig * sb.sig + ft * ft * (sa.dsig * sb.sig + sa.sig * sb.dsig) -
              (sa.dc * sb.c + sa.c * sb.dc)) -
        sm.sig * Cl / (2.0 * ft) - ft * sm.dsig * Cl - ft * sm.sig * dCl;

    SensitivityTerms out;
    out.constants.ft = ft;
    out.constants.gt = std::sqrt(std::abs(mu));
    out.E_denominator = psi_lam;
    out.dlambda_dalpha = -psi_al / psi_lam;
    return out;
}

// Neumann-Dirichlet analogue with
//   Psi = sin(ft l) (ft^2 c(a) sig(b) + mu sig(a) c(b)) - ft c(L-l) cos(ft l),
//   Psi_alpha = -sin(ft l) (f'(0) - g'(0)) c(L - 2 alpha - l).
inline SensitivityTerms nd_seam_sensitivity(double lambda, const ZoneLayout& lay,
                                            const GrowthPair& growth) {
    const double mu = growth.gp0 + lambda;
    const double ft = std::sqrt(growth.fp0 + lambda);
    const double l = lay.l, al = lay.alpha;
    const double b = lay.L - al - l, m = lay.L - l;
    const auto sa = sigma_c(al, mu), sb = sigma_c(b, mu), sm = sigma_c(m, mu);
    const auto sba = sigma_c(b - al, mu);
    const double Sl = std::sin(ft * l), Cl = std::cos(ft * l);
    const double dSl = l * Cl / (2.0 * ft), dCl = -l * Sl / (2.0 * ft);

    const double psi_al = -Sl * (growth.fp0 - growth.gp0) * sba.c;
    const double psi_lam =
        dSl * (ft * ft * sa.c * sb.sig + mu * sa.sig * sb.c) +
        Sl * (sa.c * sb.sig + ft * ft * (sa.dc * sb.sig + sa.c * sb.dsig) + sa.sig * sb.c +
              mu * (sa.dsig * sb.c + sa.sig * sb.dc)) -
        sm.c * Cl / (2.0 * ft) - ft * sm.dc * Cl - ft * sm.c * dCl;

    SensitivityTerms out;
    out.constants.ft = ft;
    out.constants.gt = std::sqrt(std::abs(mu));
    out.E_denominator = psi_lam;
    out.dlambda_dalpha = -psi_al / psi_lam;
    return out;
}

} // namespace detail

// Closed-form d lambda1 / d alpha.
//
// H1 (all boundary rows, Robin included) evaluates
//   lambda1_alpha = ft gt^2 (ft^2 + gt^2) T1 T3 / E
// with
//   E = -(ft/(2gt) + gt/(2ft)) T1 T4 + ft (ft^2+gt^2)/2 T1 alpha T3
//       - 2 ft (A^2 ft^2 + C^2 gt^2)(L-l) R2 + ft (B^2 ft^2 + D^2 gt^2) R1h
//       + ft (A^2 ft^2 + C^2 gt^2) e^{-2 gt L} R2h
//       - l (T2^2 + ft^2 gt^2 T1^2)/(2 ft).
// The hatted terms vanish for Neumann/Dirichlet ends, which reproduces the
// per-case specialisations.
//
// H2/H3 formulas exist for the DD and ND pairs (DN through the reflection
// identity lambda1_DN(alpha, l) = lambda1_ND(L-alpha-l, l), whose derivative
// is the negated ND derivative at the mirrored start).  NN cannot leave H1,
// and no closed form covers general Robin ends there: NoFormula.
inline SensitivityTerms dlambda_dalpha_closed(const SpectralResult& result,
                                              const ZoneLayout& layout, const BoundarySpec& bc,
                                              const GrowthPair& growth) {
    const double lambda = result.lambda1;
    if (result.case_tag == CaseTag::H1) {
        const auto c = h1_constants(lambda, layout, bc, growth);
        const double ft = c.ft, gt = c.gt;
        const double L = layout.L, l = layout.l, al = layout.alpha;
        const double num = ft * gt * gt * (ft * ft + gt * gt) * c.T1 * c.T3;
        const double af = c.A * c.A * ft * ft + c.C * c.C * gt * gt;
        const double bf = c.B * c.B * ft * ft + c.D * c.D * gt * gt;
        const double E = -(ft / (2.0 * gt) + gt / (2.0 * ft)) * c.T1 * c.T4 +
                         ft * (ft * ft + gt * gt) / 2.0 * c.T1 * al * c.T3 -
                         2.0 * ft * af * (L - l) * c.R2 + ft * bf * c.R1_hat +
                         ft * af * std::exp(-2.0 * gt * L) * c.R2_hat -
                         l * (c.T2 * c.T2 + ft * ft * gt * gt * c.T1 * c.T1) / (2.0 * ft);
        const double scale = std::abs(c.T2 * c.T2) + std::abs(c.T1 * c.T4) + 1.0;
        if (std::abs(E) < 1e-14 * scale)
            throw SingularDenominator("dlambda_dalpha_closed: vanishing H1 denominator");
        SensitivityTerms out;
        out.constants = c;
        out.E_denominator = E;
        out.dlambda_dalpha = num / E;
        return out;
    }

    const bool dd = bc.kind_left == BoundaryKind::Dirichlet && bc.kind_right == BoundaryKind::Dirichlet;
    const bool nd = bc.kind_left == BoundaryKind::Neumann && bc.kind_right == BoundaryKind::Dirichlet;
    const bool dn = bc.kind_left == BoundaryKind::Dirichlet && bc.kind_right == BoundaryKind::Neumann;
    SensitivityTerms out;
    if (dd) out = detail::dd_seam_sensitivity(lambda, layout, growth);
    else if (nd) out = detail::nd_seam_sensitivity(lambda, layout, growth);
    else if (dn) {
        out = detail::nd_seam_sensitivity(lambda, layout.reflected(), growth);
        out.dlambda_dalpha = -out.dlambda_dalpha;
    } else {
        throw NoFormula("dlambda_dalpha_closed: no closed form for this boundary pair "
                        "outside the H1 regime");
    }
    if (!(std::abs(out.E_denominator) > 1e-14 * (1.0 + std::abs(out.dlambda_dalpha))))
        throw SingularDenominator("dlambda_dalpha_closed: vanishing seam denominator");
    return out;
}

// Finite-difference oracle for the derivative: Richardson-refined centred
// differences (one-sided at the feasibility ends).
inline double dlambda_dalpha_fd(const ZoneLayout& layout, const BoundarySpec& bc,
                                const GrowthPair& growth, double step = 0.0) {
    const double slack = layout.L - layout.l;
    if (!(slack > 0.0))
        throw ValidationError("dlambda_dalpha_fd: zone fills the habitat, alpha is fixed");
    if (step <= 0.0) step = 1e-4 * layout.L;
    step = std::min(step, slack / 4.0);
    const double tol = std::min(1e-12, step * step * step);
    auto lam = [&](double a) {
        return principal_eigenvalue(ZoneLayout(layout.L, a, layout.l), bc, growth, tol).lambda1;
    };
    // pick the stencil once, from the larger step, so both Richardson levels
    // share the same O(h^2) error form
    enum { Centred, Forward, Backward } mode = Centred;
    if (layout.alpha - step < 0.0) mode = Forward;
    else if (layout.alpha + step > slack) mode = Backward;
    auto diff = [&](double h) {
        switch (mode) {
            case Forward:
                return (-3.0 * lam(layout.alpha) + 4.0 * lam(layout.alpha + h) -
                        lam(layout.alpha + 2.0 * h)) / (2.0 * h);
            case Backward:
                return (3.0 * lam(layout.alpha) - 4.0 * lam(layout.alpha - h) +
                        lam(layout.alpha - 2.0 * h)) / (2.0 * h);
            default:
                return (lam(layout.alpha + h) - lam(layout.alpha - h)) / (2.0 * h);
        }
    };
    const double d1 = diff(step);
    const double d2 = diff(step / 2.0);
    return (4.0 * d2 - d1) / 3.0;
}

} // namespace alleezone
