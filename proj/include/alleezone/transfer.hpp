#pragma once

#include <array>
#include <cmath>

#include "alleezone/errors.hpp"

namespace alleezone {

// 2x2 propagator mapping (phi, phi') across a constant-potential segment of
// the problem -phi'' + q phi = lambda phi.  With k^2 = lambda - q the
// propagator is a rotation (k^2 > 0), its hyperbolic analogue (k^2 < 0), or
// the shear [[1, s], [0, 1]] at zero curvature.  All three have determinant 1.
struct TransferMatrix {
    double m11 = 1.0, m12 = 0.0;
    double m21 = 0.0, m22 = 1.0;

    double det() const { return m11 * m22 - m12 * m21; }

    TransferMatrix operator*(const TransferMatrix& o) const {
        return {m11 * o.m11 + m12 * o.m21, m11 * o.m12 + m12 * o.m22,
                m21 * o.m11 + m22 * o.m21, m21 * o.m12 + m22 * o.m22};
    }

    std::array<double, 2> apply(const std::array<double, 2>& v) const {
        return {m11 * v[0] + m12 * v[1], m21 * v[0] + m22 * v[1]};
    }
};

// Curvature band below which the shear propagator replaces the exact one;
// removes the 0/0 in sin(k s)/k near the H2 seam.  The neglected curvature
// term is O(|k^2| s^2 / 2), far below solver tolerances at this band.
inline constexpr double kZeroCurvatureBand = 1e-9;

inline TransferMatrix segment_transfer(double lambda, double potential, double length) {
    if (length < 0.0) throw ValidationError("segment_transfer: negative length");
    if (length == 0.0) return {};
    const double k2 = lambda - potential;
    if (std::abs(k2) < kZeroCurvatureBand) return {1.0, length, 0.0, 1.0};
    if (k2 > 0.0) {
        const double k = std::sqrt(k2);
        const double c = std::cos(k * length), s = std::sin(k * length);
        return {c, s / k, -k * s, c};
    }
    const double m = std::sqrt(-k2);
    const double ch = std::cosh(m * length), sh = std::sinh(m * length);
    return {ch, sh / m, m * sh, ch};
}

namespace detail {

// Scaled variant used on the root-finding path: for strongly hyperbolic
// segments the factor e^{m s} is pulled out (log_scale accumulates it) so
// compositions over long habitats cannot overflow.  Scaling by a positive
// factor moves no root of the boundary functional.
struct ScaledTransfer {
    TransferMatrix mat;
    double log_scale = 0.0;
};

inline constexpr double kHyperbolicScaleThreshold = 30.0;

inline ScaledTransfer segment_transfer_scaled(double lambda, double potential, double length) {
    if (length <= 0.0) return {};
    const double k2 = lambda - potential;
    if (k2 < -kZeroCurvatureBand) {
        const double m = std::sqrt(-k2);
        const double ms = m * length;
        if (ms > kHyperbolicScaleThreshold) {
            const double e = std::exp(-2.0 * ms); // cosh = e^{ms}(1+e)/2, sinh = e^{ms}(1-e)/2
            const double ch = 0.5 * (1.0 + e), sh = 0.5 * (1.0 - e);
            return {{ch, sh / m, m * sh, ch}, ms};
        }
    }
    return {segment_transfer(lambda, potential, length), 0.0};
}

} // namespace detail

} // namespace alleezone
