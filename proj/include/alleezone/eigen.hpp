#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "alleezone/baseline.hpp"
#include "alleezone/errors.hpp"
#include "alleezone/model.hpp"
#include "alleezone/transfer.hpp"

namespace alleezone {

// ── Characteristic function ───────────────────────────────────────────────────
//
// The linearised problem  -phi'' + H(x) phi = lambda phi  has the piecewise
// potential H = -g'(0), -f'(0), -g'(0) on [0,alpha], [alpha,alpha+l],
// [alpha+l,L].  Starting from the left-admissible state (phi, phi') = (a1, a2)
// (which satisfies a1 phi'(0) - a2 phi(0) = 0 for any scaling) and composing
// the three segment propagators, lambda is an eigenvalue exactly when the
// right boundary functional  b1 phi'(L) + b2 phi(L)  vanishes.
//
// The returned value is scaled by a positive factor on strongly hyperbolic
// segments (overflow guard), which preserves every root and sign change.
inline double characteristic_residual(double lambda, const ZoneLayout& layout,
                                      const BoundarySpec& bc, const GrowthPair& growth) {
    std::array<double, 2> v{bc.a1, bc.a2};
    const double seg_pot[3] = {-growth.gp0, -growth.fp0, -growth.gp0};
    const double seg_len[3] = {layout.alpha, layout.l, layout.L - layout.alpha - layout.l};
    for (int i = 0; i < 3; ++i) {
        const auto st = detail::segment_transfer_scaled(lambda, seg_pot[i], seg_len[i]);
        v = st.mat.apply(v);
        const double nv = std::max(std::abs(v[0]), std::abs(v[1]));
        if (nv > 1e100) { v[0] /= nv; v[1] /= nv; }
    }
    return bc.b1 * v[1] + bc.b2 * v[0];
}

namespace detail {

// phi on a uniform grid, by propagating the left-admissible state; used for
// the node-count assertion and the eigenfunction samples.  When a segment's
// hyperbolic factor is pulled out, the samples already collected are scaled
// *down* by it instead, so the grid stays mutually consistent without ever
// multiplying by a large exponential.
inline std::vector<std::pair<double, double>>
propagate_samples(double lambda, const ZoneLayout& layout, const BoundarySpec& bc,
                  const GrowthPair& growth, int n_samples) {
    const double seg_pot[3] = {-growth.gp0, -growth.fp0, -growth.gp0};
    const double seg_x0[3] = {0.0, layout.alpha, layout.alpha + layout.l};
    const double seg_x1[3] = {layout.alpha, layout.alpha + layout.l, layout.L};

    std::vector<std::pair<double, double>> out;
    std::vector<double> log_scale(static_cast<std::size_t>(n_samples), 0.0);
    out.reserve(static_cast<std::size_t>(n_samples));
    std::array<double, 2> state{bc.a1, bc.a2};
    double state_ls = 0.0; // true state = state * e^{state_ls}
    int j = 0;
    for (int seg = 0; seg < 3; ++seg) {
        for (; j < n_samples; ++j) {
            const double x = layout.L * static_cast<double>(j) / (n_samples - 1);
            if (seg < 2 && x > seg_x1[seg] + 1e-14 * layout.L) break;
            const auto part = segment_transfer_scaled(lambda, seg_pot[seg], x - seg_x0[seg]);
            const auto v = part.mat.apply(state);
            log_scale[out.size()] = state_ls + part.log_scale;
            out.emplace_back(x, v[0]);
        }
        const auto full =
            segment_transfer_scaled(lambda, seg_pot[seg], seg_x1[seg] - seg_x0[seg]);
        state = full.mat.apply(state);
        state_ls += full.log_scale;
    }
    // anchor every sample to the largest pulled-out factor; entries at far
    // smaller scales underflow to ~0, which is their correct relative size
    double ls_max = 0.0;
    for (std::size_t k = 0; k < out.size(); ++k) ls_max = std::max(ls_max, log_scale[k]);
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k].second *= std::exp(log_scale[k] - ls_max);
    return out;
}

// Samples at the solver-residual scale (boundary zeros of Dirichlet ends,
// resolved only to bisection accuracy) must not register as nodes.
inline int count_sign_changes(const std::vector<std::pair<double, double>>& samples) {
    double peak = 0.0;
    for (const auto& [x, value] : samples) peak = std::max(peak, std::abs(value));
    const double floor_mag = 1e-9 * peak;
    int changes = 0;
    double prev = 0.0;
    for (const auto& [x, value] : samples) {
        (void)x;
        if (std::abs(value) <= floor_mag) continue;
        if (prev != 0.0 && (value > 0.0) != (prev > 0.0)) ++changes;
        prev = value;
    }
    return changes;
}

} // namespace detail

// ── Principal eigenvalue ──────────────────────────────────────────────────────

inline constexpr int kBracketScanPanels = 256;
inline constexpr int kNodeCheckSamples = 512;

// lambda1(alpha, l): leftmost root of the characteristic residual inside the
// rigid bracket (lambda_{L,f}, lambda_{L,g}), refined by bisection, with the
// principal character asserted by a node count of the propagated phi.
//
// The scan window is widened a hair below lambda_{L,f}: no spectrum exists
// below it, but the degenerate layout l = L attains it exactly.
inline SpectralResult principal_eigenvalue(const ZoneLayout& layout, const BoundarySpec& bc,
                                           const GrowthPair& growth, double tol = 1e-12) {
    if (!(tol > 0.0)) throw ValidationError("principal_eigenvalue: tol must be positive");
    const Bracket br = spectral_bracket(layout.L, bc, growth);
    const double width = br.hi - br.lo;
    const double eps = 1e-12 * width;
    const double scan_lo = br.lo - 1e-7 * width - eps;
    const double scan_hi = br.hi - eps;

    auto resid = [&](double lam) { return characteristic_residual(lam, layout, bc, growth); };

    double lo = scan_lo, hi = scan_hi;
    double flo = resid(lo);
    bool bracketed = false;
    for (int i = 1; i <= kBracketScanPanels; ++i) {
        const double x = scan_lo + (scan_hi - scan_lo) * static_cast<double>(i) / kBracketScanPanels;
        const double fx = resid(x);
        if (flo == 0.0) { hi = lo; bracketed = true; break; }
        if (flo * fx < 0.0) { hi = x; bracketed = true; break; }
        lo = x;
        flo = fx;
    }
    if (!bracketed) {
        if (flo == 0.0) hi = lo;
        else throw NoSignChange("principal_eigenvalue: no sign change in the spectral bracket");
    }
    // tol below the floating-point resolution of the bracket would spin
    const double tol_eff =
        std::max(tol, 8.0 * std::numeric_limits<double>::epsilon() *
                          std::max({std::abs(lo), std::abs(hi), 1.0}));
    while (hi - lo > tol_eff) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double fm = resid(mid);
        if (fm == 0.0) { lo = hi = mid; break; }
        if (flo * fm < 0.0) hi = mid;
        else { lo = mid; flo = fm; }
    }
    const double lambda1 = 0.5 * (lo + hi);

    SpectralResult res;
    res.lambda1 = lambda1;
    res.residual = resid(lambda1);
    if (!(lambda1 + growth.fp0 > 0.0))
        throw NumericalError("principal_eigenvalue: lambda1 + f'(0) <= 0 (bracket violated)");
    res.f_tilde = std::sqrt(growth.fp0 + lambda1);
    res.g_tilde = std::sqrt(std::abs(growth.gp0 + lambda1));
    res.case_tag = classify_case(lambda1, growth.gp0);

    auto samples = detail::propagate_samples(lambda1, layout, bc, growth, kNodeCheckSamples);
    if (detail::count_sign_changes(samples) != 0)
        throw NodeCountNonzero("principal_eigenvalue: leftmost root has interior nodes");
    double peak = 0.0;
    for (const auto& [x, v] : samples) peak = std::max(peak, std::abs(v));
    const double sign = [&] {
        for (const auto& [x, v] : samples)
            if (v != 0.0) return v > 0.0 ? 1.0 : -1.0;
        return 1.0;
    }();
    res.phi_samples = std::move(samples);
    for (auto& [x, v] : res.phi_samples) v *= sign / peak;
    return res;
}

// Re-sample the eigenfunction of a computed result on an n_samples grid,
// normalised to max 1.
inline std::vector<std::pair<double, double>>
eigenfunction(const SpectralResult& result, const ZoneLayout& layout, const BoundarySpec& bc,
              const GrowthPair& growth, int n_samples) {
    if (n_samples < 2) throw ValidationError("eigenfunction: need at least two samples");
    auto samples = detail::propagate_samples(result.lambda1, layout, bc, growth, n_samples);
    double peak = 0.0;
    for (const auto& [x, v] : samples) peak = std::max(peak, std::abs(v));
    double sign = 1.0;
    for (const auto& [x, v] : samples)
        if (v != 0.0) { sign = v > 0.0 ? 1.0 : -1.0; break; }
    for (auto& [x, v] : samples) v *= sign / peak;
    return samples;
}

// ── Closed-form constants of the hyperbolic (H1) regime ───────────────────────
//
// With ft = sqrt(f'(0)+lambda1), gt = sqrt(-(g'(0)+lambda1)):
//   R1 = (a1 gt - a2)/(a1 gt + a2),   R2 = e^{-2 gt L} (b1 gt - b2)/(b1 gt + b2),
//   A  = R1 e^{-gt alpha} + e^{gt alpha},      B = e^{-gt(alpha+l)} + R2 e^{gt(alpha+l)},
//   C  = -R1 e^{-gt alpha} + e^{gt alpha},     D = -e^{-gt(alpha+l)} + R2 e^{gt(alpha+l)},
//   T1 = BC - AD, T2 = ft^2 AB + gt^2 CD, T3 = BC + AD, T4 = AB ft^2 - CD gt^2,
//   R1h = 2 a1 a2/(a1 gt + a2)^2,     R2h = 2 b1 b2/(b1 gt + b2)^2,
// and the eigenvalue relation reads  tan(ft l) = ft gt T1 / T2.
struct PaperConstants {
    double ft = 0.0, gt = 0.0;
    double R1 = 0.0, R2 = 0.0;
    double A = 0.0, B = 0.0, C = 0.0, D = 0.0;
    double T1 = 0.0, T2 = 0.0, T3 = 0.0, T4 = 0.0;
    double R1_hat = 0.0, R2_hat = 0.0;
};

inline PaperConstants h1_constants(double lambda, const ZoneLayout& layout,
                                   const BoundarySpec& bc, const GrowthPair& growth) {
    if (!(growth.gp0 + lambda < 0.0))
        throw NoFormula("h1_constants: requires g'(0) + lambda < 0");
    PaperConstants c;
    c.ft = std::sqrt(growth.fp0 + lambda);
    c.gt = std::sqrt(-(growth.gp0 + lambda));
    const double gt = c.gt;
    c.R1 = (bc.a1 * gt - bc.a2) / (bc.a1 * gt + bc.a2);
    c.R2 = std::exp(-2.0 * gt * layout.L) * (bc.b1 * gt - bc.b2) / (bc.b1 * gt + bc.b2);
    const double ea = std::exp(gt * layout.alpha), ema = std::exp(-gt * layout.alpha);
    const double eb = std::exp(gt * (layout.alpha + layout.l));
    const double emb = std::exp(-gt * (layout.alpha + layout.l));
    c.A = c.R1 * ema + ea;
    c.B = emb + c.R2 * eb;
    c.C = -c.R1 * ema + ea;
    c.D = -emb + c.R2 * eb;
    c.T1 = c.B * c.C - c.A * c.D;
    c.T2 = c.ft * c.ft * c.A * c.B + gt * gt * c.C * c.D;
    c.T3 = c.B * c.C + c.A * c.D;
    c.T4 = c.A * c.B * c.ft * c.ft - c.C * c.D * gt * gt;
    c.R1_hat = 2.0 * bc.a1 * bc.a2 / ((bc.a1 * gt + bc.a2) * (bc.a1 * gt + bc.a2));
    c.R2_hat = 2.0 * bc.b1 * bc.b2 / ((bc.b1 * gt + bc.b2) * (bc.b1 * gt + bc.b2));
    return c;
}

// ── Post-hoc verification against the case transcendental relations ──────────
//
// Each relation tan(ft l) = N / D is evaluated in the pole-safe
// cross-multiplied form  sin(ft l) D - N cos(ft l).  A computed eigenvalue
// must drive the applicable residuals to ~0; failure flags disagreement
// between the transfer-matrix solve and the closed-form algebra.
struct EquationResidual {
    std::string equation;
    double residual;
};

namespace detail {

inline double h1_general_residual(const PaperConstants& c, double l) {
    return std::sin(c.ft * l) * c.T2 - c.ft * c.gt * c.T1 * std::cos(c.ft * l);
}

// Neumann-Neumann relation, written from its printed exponential form.
inline double h1_nn_residual(double ft, double gt, const ZoneLayout& lay) {
    const double L = lay.L, al = lay.alpha, l = lay.l;
    const double num = 2.0 * ft * gt * (std::exp(-gt * l) - std::exp(-2.0 * gt * L) * std::exp(gt * l));
    const double den =
        ft * ft * (std::exp(-gt * al) + std::exp(gt * al)) *
            (std::exp(-gt * (al + l)) + std::exp(-2.0 * gt * L) * std::exp(gt * (al + l))) +
        gt * gt * (-std::exp(-gt * al) + std::exp(gt * al)) *
            (-std::exp(-gt * (al + l)) + std::exp(-2.0 * gt * L) * std::exp(gt * (al + l)));
    return std::sin(ft * l) * den - num * std::cos(ft * l);
}

inline double h1_dd_residual(double ft, double gt, const ZoneLayout& lay) {
    const double L = lay.L, al = lay.alpha, l = lay.l;
    const double num = 2.0 * ft * gt * (std::exp(-gt * l) - std::exp(-2.0 * gt * L) * std::exp(gt * l));
    const double den =
        -gt * gt * (std::exp(-gt * al) + std::exp(gt * al)) *
            (std::exp(-gt * (al + l)) + std::exp(-2.0 * gt * L) * std::exp(gt * (al + l))) -
        ft * ft * (-std::exp(-gt * al) + std::exp(gt * al)) *
            (-std::exp(-gt * (al + l)) + std::exp(-2.0 * gt * L) * std::exp(gt * (al + l)));
    return std::sin(ft * l) * den - num * std::cos(ft * l);
}

inline double h1_nd_residual(double ft, double gt, const ZoneLayout& lay) {
    const double L = lay.L, al = lay.alpha, l = lay.l;
    const double num = 2.0 * ft * gt * (std::exp(-gt * l) + std::exp(-2.0 * gt * L) * std::exp(gt * l));
    const double den =
        ft * ft * (std::exp(-gt * al) + std::exp(gt * al)) *
            (std::exp(-gt * (al + l)) - std::exp(-2.0 * gt * L) * std::exp(gt * (al + l))) +
        gt * gt * (-std::exp(-gt * al) + std::exp(gt * al)) *
            (-std::exp(-gt * (al + l)) - std::exp(-2.0 * gt * L) * std::exp(gt * (al + l)));
    return std::sin(ft * l) * den - num * std::cos(ft * l);
}

// H2 seam relations (g'(0)+lambda1 = 0).
inline double h2_dd_residual(double ft, const ZoneLayout& lay) {
    const double L = lay.L, al = lay.alpha, l = lay.l;
    const double P = ft * ft * al * (L - al - l) - 1.0;
    return std::sin(ft * l) * P - ft * (L - l) * std::cos(ft * l);
}

inline double h2_nd_residual(double ft, const ZoneLayout& lay) {
    const double L = lay.L, al = lay.alpha, l = lay.l;
    return std::sin(ft * l) * ft * (L - al - l) - std::cos(ft * l);
}

// H3 oscillatory relations (g'(0)+lambda1 > 0).
inline double h3_dd_residual(double ft, double gt, const ZoneLayout& lay) {
    const double L = lay.L, al = lay.alpha, l = lay.l;
    const double Tdd = ft * ft * std::sin(gt * al) * std::sin(gt * (L - al - l)) -
                       gt * gt * std::cos(gt * al) * std::cos(gt * (L - al - l));
    return std::sin(ft * l) * Tdd - ft * gt * std::sin(gt * (L - l)) * std::cos(ft * l);
}

inline double h3_nd_residual(double ft, double gt, const ZoneLayout& lay) {
    const double L = lay.L, al = lay.alpha, l = lay.l;
    const double Tnd = ft * ft * std::cos(gt * al) * std::sin(gt * (L - al - l)) +
                       gt * gt * std::sin(gt * al) * std::cos(gt * (L - al - l));
    return std::sin(ft * l) * Tnd - ft * gt * std::cos(gt * (L - l)) * std::cos(ft * l);
}

} // namespace detail

inline constexpr double kTranscendentalTol = 1e-6;

inline std::vector<EquationResidual>
verify_transcendental(const SpectralResult& result, const ZoneLayout& layout,
                      const BoundarySpec& bc, const GrowthPair& growth,
                      double tol = kTranscendentalTol) {
    std::vector<EquationResidual> report;
    const double ft = result.f_tilde, gt = result.g_tilde;
    const bool nn = bc.kind_left == BoundaryKind::Neumann && bc.kind_right == BoundaryKind::Neumann;
    const bool dd = bc.kind_left == BoundaryKind::Dirichlet && bc.kind_right == BoundaryKind::Dirichlet;
    const bool nd = bc.kind_left == BoundaryKind::Neumann && bc.kind_right == BoundaryKind::Dirichlet;
    const bool dn = bc.kind_left == BoundaryKind::Dirichlet && bc.kind_right == BoundaryKind::Neumann;

    if (result.case_tag == CaseTag::H1) {
        const auto c = h1_constants(result.lambda1, layout, bc, growth);
        report.push_back({"h1_general_tan", detail::h1_general_residual(c, layout.l)});
        if (nn) report.push_back({"h1_nn_tan", detail::h1_nn_residual(ft, gt, layout)});
        if (dd) report.push_back({"h1_dd_tan", detail::h1_dd_residual(ft, gt, layout)});
        if (nd) report.push_back({"h1_nd_tan", detail::h1_nd_residual(ft, gt, layout)});
        if (dn) // the mirrored layout satisfies the Neumann-Dirichlet relation
            report.push_back({"h1_nd_tan_reflected",
                              detail::h1_nd_residual(ft, gt, layout.reflected())});
    } else if (result.case_tag == CaseTag::H2) {
        if (dd) report.push_back({"h2_dd_tan", detail::h2_dd_residual(ft, layout)});
        if (nd) report.push_back({"h2_nd_tan", detail::h2_nd_residual(ft, layout)});
        if (dn) report.push_back({"h2_nd_tan_reflected",
                                  detail::h2_nd_residual(ft, layout.reflected())});
    } else {
        if (dd) report.push_back({"h3_dd_tan", detail::h3_dd_residual(ft, gt, layout)});
        if (nd) report.push_back({"h3_nd_tan", detail::h3_nd_residual(ft, gt, layout)});
        if (dn) report.push_back({"h3_nd_tan_reflected",
                                  detail::h3_nd_residual(ft, gt, layout.reflected())});
        // no closed relation exists for general Robin ends in this regime
    }

    for (const auto& entry : report)
        if (!(std::abs(entry.residual) <= tol))
            throw ResidualTooLarge("verify_transcendental: " + entry.equation + " residual " +
                                   std::to_string(entry.residual));
    return report;
}

} // namespace alleezone
