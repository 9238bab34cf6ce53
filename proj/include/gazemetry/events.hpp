#pragma once

#include "gazemetry/ivt.hpp"
#include "gazemetry/types.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace gazemetry {

/// One classified interval: a maximal run of equally-labeled midpoint
/// samples. Interior group boundaries sit halfway between the last sample of
/// one group and the first sample of the next, so consecutive groups tile
/// the covered span without gaps or overlaps; the first group starts at its
/// first sample and the last group ends at its last sample.
struct EventGroup {
    EventKind kind = EventKind::Invalid;
    double start_ms = 0.0;
    double end_ms = 0.0;
    double duration_ms = 0.0;  // end - start
    std::size_t sample_count = 0;
    int index = 0;  // 1-based ordinal among groups of the same kind

    // Means over the constituent midpoint samples. Per-eye entries are
    // present only if that eye contributed to at least one sample; the
    // *_count fields say how many samples went into each mean.
    PerEye<std::optional<Vec3>> mean_eye3d;
    PerEye<std::optional<Vec3>> mean_gaze3d;
    PerEye<std::size_t> eye_sample_count{0, 0};
    std::optional<Vec2> mean_gaze2d;
    std::size_t gaze2d_count = 0;
};

/// Collapse a labeled midpoint stream into event groups. `labels` must be
/// parallel to `stream`. Throws InsufficientDataError on empty input.
std::vector<EventGroup> group_events(const std::vector<MidpointSample>& stream,
                                     const std::vector<EventKind>& labels);

/// Merge fixation groups that are separated only by saccade/invalid groups
/// and are close in both time and space: gap (start of f2 - end of f1)
/// strictly below config.max_time_betw_fixations_ms AND the binocular visual
/// angle between the groups' mean gaze positions (seen from the mean of
/// their mean eye positions, per eye, aggregated like binocular_velocity)
/// strictly below config.max_angle_betw_fixations_deg.
///
/// Scans left to right; a freshly merged group is immediately eligible to
/// merge with the next fixation group, and passes repeat until no merge
/// applies, so the operation is idempotent. Intervening saccade/invalid
/// groups are discarded, and merged positions are sample-count-weighted
/// means over the constituent fixation samples only. Ordinals are
/// recomputed. Never increases the fixation count and never decreases total
/// fixation duration.
std::vector<EventGroup> merge_fixations(std::vector<EventGroup> groups,
                                        const IvtConfig& config);

/// Full pipeline for one recording: velocity_stream -> label_stream ->
/// group_events -> merge_fixations (when config.merging_enabled).
std::vector<EventGroup> segment(const Recording& recording, const IvtConfig& config);

}  // namespace gazemetry
