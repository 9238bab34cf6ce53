#pragma once

#include "gazemetry/errors.hpp"
#include "gazemetry/types.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace gazemetry {

inline constexpr double kDegPerRad = 180.0 / std::numbers::pi;

// Gaze vectors shorter than this (in mm) are degenerate: no direction can be
// inferred from them.
inline constexpr double kMinGazeVectorMm = 1e-6;

/// A visual angle in degrees, guaranteed finite and within [0, 180].
class Angle {
public:
    Angle() = default;
    explicit Angle(double degrees) : degrees_(degrees) {
        if (!(std::isfinite(degrees) && degrees >= 0.0 && degrees <= 180.0)) {
            throw ConfigError("angle must be finite and within [0, 180] degrees");
        }
    }
    [[nodiscard]] double degrees() const { return degrees_; }

private:
    double degrees_ = 0.0;
};

/// Angular speed in degrees per second, or the distinguished Invalid state
/// used when neither eye could provide a measurement.
class Velocity {
public:
    Velocity() = default;  // Invalid
    explicit Velocity(double deg_per_s) : value_(deg_per_s) {
        if (!(std::isfinite(deg_per_s) && deg_per_s >= 0.0)) {
            throw ConfigError("velocity must be finite and non-negative");
        }
    }
    [[nodiscard]] static Velocity invalid() { return Velocity(); }
    [[nodiscard]] bool valid() const { return value_.has_value(); }
    [[nodiscard]] double deg_per_s() const { return value_.value(); }

private:
    std::optional<double> value_;
};

/// Temporal midpoint of two timestamps; the time coordinate of a midpoint sample.
inline double midpoint_time(double t1_ms, double t2_ms) {
    if (!(t1_ms < t2_ms)) {
        throw OrderingError("midpoint_time requires t1 < t2");
    }
    return (t1_ms + t2_ms) / 2.0;
}

/// Componentwise mean of two positions. Accepts any Eigen expression.
template <typename DerivedA, typename DerivedB>
[[nodiscard]] auto mean_position(const Eigen::MatrixBase<DerivedA>& a,
                                 const Eigen::MatrixBase<DerivedB>& b) {
    return ((a + b) / 2).eval();
}

/// Angle subtended at `eye` between the rays toward g1 and g2.
///
/// Identical gaze points yield exactly zero. Otherwise the normalized dot
/// product is clamped to [-1, 1] before the arccos so nearly-collinear rays
/// cannot produce NaN. Gaze vectors shorter than kMinGazeVectorMm throw.
template <typename DerivedE, typename DerivedA, typename DerivedB>
[[nodiscard]] Angle visual_angle(const Eigen::MatrixBase<DerivedE>& eye,
                                 const Eigen::MatrixBase<DerivedA>& g1,
                                 const Eigen::MatrixBase<DerivedB>& g2) {
    const Vec3 u = g1 - eye;
    const Vec3 v = g2 - eye;
    const double nu = u.norm();
    const double nv = v.norm();
    if (nu < kMinGazeVectorMm || nv < kMinGazeVectorMm) {
        throw DegenerateGeometryError("gaze vector shorter than 1e-6 mm");
    }
    if ((u.array() == v.array()).all()) {
        return Angle(0.0);
    }
    const double cosine = std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
    return Angle(std::acos(cosine) * kDegPerRad);
}

/// Angular velocity of an `angle` traversed over `dt_ms`, in degrees/second.
inline Velocity angular_velocity(Angle angle, double dt_ms) {
    if (!(dt_ms > 0.0)) {
        throw OrderingError("angular_velocity requires dt > 0");
    }
    return Velocity(angle.degrees() / (dt_ms / 1000.0));
}

/// Binocular aggregation: mean of both velocities when both eyes delivered,
/// the available one when only one did, Invalid when neither did.
inline Velocity binocular_velocity(Velocity left, Velocity right) {
    if (left.valid() && right.valid()) {
        return Velocity((left.deg_per_s() + right.deg_per_s()) / 2.0);
    }
    if (left.valid()) return left;
    if (right.valid()) return right;
    return Velocity::invalid();
}

/// Same aggregation rule applied to per-eye visual angles (used when testing
/// whether two fixation groups are close enough in space to merge).
inline std::optional<Angle> binocular_angle(std::optional<Angle> left,
                                            std::optional<Angle> right) {
    if (left && right) {
        return Angle((left->degrees() + right->degrees()) / 2.0);
    }
    if (left) return left;
    if (right) return right;
    return std::nullopt;
}

}  // namespace gazemetry
