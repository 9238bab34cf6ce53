#pragma once

#include "gazemetry/geometry.hpp"
#include "gazemetry/types.hpp"

#include <optional>
#include <vector>

namespace gazemetry {

/// I-VT configuration. The velocity threshold separates fixation from
/// saccade samples; 30 °/s and 100 °/s are the stock Tobii fixation- and
/// attention-filter settings. The two gap thresholds control fixation
/// merging (strict '<' comparisons).
struct IvtConfig {
    double velocity_threshold_deg_s = 30.0;
    bool merging_enabled = false;
    double max_time_betw_fixations_ms = 75.0;
    double max_angle_betw_fixations_deg = 0.5;
};

/// Throws ConfigError unless every threshold is finite and > 0.
void validate_config(const IvtConfig& config);

/// The derived sample between two consecutive raw samples: the temporal
/// midpoint, the binocular point-to-point angular velocity across the pair,
/// and the midpoint eye/gaze positions of every eye that contributed (an eye
/// contributes only when it is valid at both endpoints).
struct MidpointSample {
    double timestamp_ms = 0.0;
    Velocity velocity;
    PerEye<std::optional<Vec3>> eye3d;
    PerEye<std::optional<Vec3>> gaze3d;
    std::optional<Vec2> gaze2d;
};

/// Build the midpoint velocity stream for a recording: one MidpointSample
/// per consecutive raw pair (output length = input length - 1).
///
/// Per eye and pair: mean eye position across the pair, visual angle between
/// the two gaze points as seen from that mean eye position, divided by the
/// pair's time delta; the two eyes are then aggregated with
/// binocular_velocity. An eye that is invalid at either endpoint, or whose
/// gaze vector degenerates at the midpoint eye position, contributes
/// nothing for that pair.
///
/// Throws InsufficientDataError for recordings with fewer than 2 samples.
std::vector<MidpointSample> velocity_stream(const Recording& recording);

/// I-VT labeling: velocity <= threshold is a fixation sample, above it a
/// saccade sample; samples with Invalid velocity stay Invalid at any
/// threshold. Returns one label per stream element, order preserved.
std::vector<EventKind> label_stream(const std::vector<MidpointSample>& stream,
                                    double velocity_threshold_deg_s);

}  // namespace gazemetry
