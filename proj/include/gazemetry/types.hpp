#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace gazemetry {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

/// Classification shared by velocity samples and event groups.
enum class EventKind { Fixation, Saccade, Invalid };

/// Something measured once per eye.
template <typename T>
struct PerEye {
    T left{};
    T right{};
};

/// One eye at one raw timestamp. Positions are millimeters in the tracker's
/// scene-camera frame; the pipeline only ever uses relative geometry, so the
/// frame origin does not matter. When valid is false the positions are
/// meaningless and must be ignored.
struct EyeSample {
    Vec3 eye_position = Vec3::Zero();
    Vec3 gaze_position = Vec3::Zero();
    bool valid = false;
};

/// One raw eye-tracker record.
struct GazeSample {
    double timestamp_ms = 0.0;  // since recording start, finite and >= 0
    EyeSample left;
    EyeSample right;
    // Normalized display coordinates. Carried through parsing and the
    // midpoint stream for completeness; no downstream computation uses it.
    std::optional<Vec2> gaze2d;
};

/// A participant's gaze stream. Timestamps are strictly increasing.
struct Recording {
    std::string participant_id;
    std::vector<GazeSample> samples;
    double sample_rate_hz = 100.0;  // nominal

    [[nodiscard]] double span_ms() const {
        return samples.empty() ? 0.0
                               : samples.back().timestamp_ms - samples.front().timestamp_ms;
    }
};

struct GroupAssignment {
    std::string participant_id;
    std::string group_label;  // e.g. "expert", "novice"
};

[[nodiscard]] inline const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::Fixation: return "fixation";
        case EventKind::Saccade: return "saccade";
        case EventKind::Invalid: return "invalid";
    }
    return "invalid";
}

}  // namespace gazemetry
