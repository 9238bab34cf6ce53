#include "gazemetry/ivt.hpp"

#include "gazemetry/errors.hpp"

#include <cmath>

namespace gazemetry {

void validate_config(const IvtConfig& config) {
    if (!(std::isfinite(config.velocity_threshold_deg_s) &&
          config.velocity_threshold_deg_s > 0.0)) {
        throw ConfigError("velocity threshold must be finite and > 0");
    }
    if (!(std::isfinite(config.max_time_betw_fixations_ms) &&
          config.max_time_betw_fixations_ms > 0.0)) {
        throw ConfigError("max time between fixations must be finite and > 0");
    }
    if (!(std::isfinite(config.max_angle_betw_fixations_deg) &&
          config.max_angle_betw_fixations_deg > 0.0)) {
        throw ConfigError("max angle between fixations must be finite and > 0");
    }
}

namespace {

struct EyeContribution {
    Velocity velocity;  // Invalid when the eye did not contribute
    std::optional<Vec3> eye_mid;
    std::optional<Vec3> gaze_mid;
};

/// Steps for one eye across one consecutive pair: midpoint eye position,
/// visual angle between the two gaze points seen from there, velocity over
/// the pair's dt. The eye contributes only when valid at both endpoints and
/// the geometry is usable.
EyeContribution eye_velocity(const EyeSample& at_t1, const EyeSample& at_t2, double dt_ms) {
    EyeContribution out;
    if (!at_t1.valid || !at_t2.valid) {
        return out;
    }
    const Vec3 eye_mid = mean_position(at_t1.eye_position, at_t2.eye_position);
    // Degenerate at the midpoint eye position (gaze point on top of the eye):
    // treat as not inferable so the other eye can take over.
    if ((at_t1.gaze_position - eye_mid).norm() < kMinGazeVectorMm ||
        (at_t2.gaze_position - eye_mid).norm() < kMinGazeVectorMm) {
        return out;
    }
    const Angle angle = visual_angle(eye_mid, at_t1.gaze_position, at_t2.gaze_position);
    out.velocity = angular_velocity(angle, dt_ms);
    out.eye_mid = eye_mid;
    out.gaze_mid = mean_position(at_t1.gaze_position, at_t2.gaze_position);
    return out;
}

}  // namespace

std::vector<MidpointSample> velocity_stream(const Recording& recording) {
    if (recording.samples.size() < 2) {
        throw InsufficientDataError("velocity stream over '" + recording.participant_id +
                                    "' needs at least 2 samples, got " +
                                    std::to_string(recording.samples.size()));
    }
    std::vector<MidpointSample> stream;
    stream.reserve(recording.samples.size() - 1);

    for (std::size_t i = 0; i + 1 < recording.samples.size(); ++i) {
        const GazeSample& s1 = recording.samples[i];
        const GazeSample& s2 = recording.samples[i + 1];
        const double dt_ms = s2.timestamp_ms - s1.timestamp_ms;

        MidpointSample mid;
        mid.timestamp_ms = midpoint_time(s1.timestamp_ms, s2.timestamp_ms);

        const EyeContribution left = eye_velocity(s1.left, s2.left, dt_ms);
        const EyeContribution right = eye_velocity(s1.right, s2.right, dt_ms);
        mid.velocity = binocular_velocity(left.velocity, right.velocity);
        mid.eye3d = {left.eye_mid, right.eye_mid};
        mid.gaze3d = {left.gaze_mid, right.gaze_mid};
        if (s1.gaze2d && s2.gaze2d) {
            mid.gaze2d = mean_position(*s1.gaze2d, *s2.gaze2d);
        }
        stream.push_back(std::move(mid));
    }
    return stream;
}

std::vector<EventKind> label_stream(const std::vector<MidpointSample>& stream,
                                    double velocity_threshold_deg_s) {
    if (!(std::isfinite(velocity_threshold_deg_s) && velocity_threshold_deg_s > 0.0)) {
        throw ConfigError("velocity threshold must be finite and > 0");
    }
    std::vector<EventKind> labels;
    labels.reserve(stream.size());
    for (const MidpointSample& sample : stream) {
        if (!sample.velocity.valid()) {
            labels.push_back(EventKind::Invalid);
        } else if (sample.velocity.deg_per_s() <= velocity_threshold_deg_s) {
            labels.push_back(EventKind::Fixation);
        } else {
            labels.push_back(EventKind::Saccade);
        }
    }
    return labels;
}

}  // namespace gazemetry
