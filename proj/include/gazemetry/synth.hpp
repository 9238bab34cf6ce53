#pragma once

#include "gazemetry/events.hpp"
#include "gazemetry/types.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace gazemetry {

// ---------------------------------------------------------------------------
// Scenario description
// ---------------------------------------------------------------------------

/// Hold gaze on a fixed 3D target (scene-camera frame, mm).
struct FixationSpec {
    Vec3 target = Vec3::Zero();
    double duration_ms = 0.0;
};

/// Sweep gaze from one point to another at constant angular velocity.
/// `from` must equal the position where the previous event left the gaze.
struct SaccadeSpec {
    Vec3 from = Vec3::Zero();
    Vec3 to = Vec3::Zero();
    double duration_ms = 0.0;
};

enum class DropoutEyes { Left, Right, Both };

/// Signal loss (blink, tracking loss): the named eyes go invalid while gaze
/// holds at its current position for any eye still tracked.
struct DropoutSpec {
    double duration_ms = 0.0;
    DropoutEyes eyes = DropoutEyes::Both;
};

using ScenarioEvent = std::variant<FixationSpec, SaccadeSpec, DropoutSpec>;
using Scenario = std::vector<ScenarioEvent>;

/// Eye placement: eyes sit at (+-interocular/2, 0, 0); viewing_distance_mm
/// locates the nominal target plane used for the 2D gaze projection.
struct EyeGeometry {
    double interocular_mm = 65.0;
    double viewing_distance_mm = 600.0;
};

// ---------------------------------------------------------------------------
// Ground truth
// ---------------------------------------------------------------------------

struct TruthEvent {
    EventKind kind = EventKind::Invalid;
    double start_ms = 0.0;
    double end_ms = 0.0;
};

/// Ordered, non-overlapping intervals tiling the span of the emitted
/// samples. A Dropout maps to an Invalid interval only when both eyes drop;
/// a one-eyed dropout stays classifiable through the other eye and is truth
/// Fixation. Adjacent intervals of equal kind are coalesced.
struct GroundTruth {
    std::vector<TruthEvent> events;
};

struct SyntheticTrace {
    Recording recording;
    GroundTruth truth;
};

/// Generate a synthetic recording plus its ground truth. Samples are placed
/// at uniform 1000/rate ms spacing. Fixations emit the target plus isotropic
/// angular noise of the given standard deviation (a small random rotation of
/// each eye's gaze ray); saccades interpolate along the from->to arc at
/// constant angular velocity, noiseless. Fully reproducible from the seed.
///
/// Throws ConfigError for a non-positive rate, an empty scenario, broken
/// saccade continuity, non-positive durations, or impossible geometry (zero
/// viewing distance).
SyntheticTrace generate_trace(const Scenario& scenario, double sample_rate_hz,
                              const EyeGeometry& geometry, double noise_deg,
                              std::uint64_t seed,
                              const std::string& participant_id = "synthetic");

// ---------------------------------------------------------------------------
// Detection scoring
// ---------------------------------------------------------------------------

struct KindScore {
    std::size_t truth_count = 0;
    std::size_t detected_count = 0;
    std::size_t matched = 0;
    double precision = 1.0;  // 1.0 when nothing of this kind was detected
    double recall = 1.0;     // 1.0 when nothing of this kind is in the truth
};

struct DetectionScores {
    KindScore fixation;
    KindScore saccade;
    KindScore invalid;
    // Fraction of the overlapped time span on which detected and truth kinds
    // agree (the continuous analog of per-sample agreement).
    double agreement_fraction = 0.0;
};

/// Event-level precision/recall per kind (an event matches when the kinds
/// agree and both boundaries are within the tolerance; matching is greedy
/// one-to-one in temporal order) plus the time-weighted agreement fraction.
DetectionScores score_detection(const std::vector<TruthEvent>& detected,
                                const GroundTruth& truth, double boundary_tolerance_ms);

/// Convenience overload for pipeline output.
DetectionScores score_detection(const std::vector<EventGroup>& detected,
                                const GroundTruth& truth, double boundary_tolerance_ms);

}  // namespace gazemetry
