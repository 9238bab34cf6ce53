#include "gazemetry/events.hpp"

#include "gazemetry/errors.hpp"
#include "gazemetry/geometry.hpp"

#include <utility>

namespace gazemetry {

namespace {

struct MeanAccumulator3 {
    Vec3 sum = Vec3::Zero();
    std::size_t count = 0;

    void add(const std::optional<Vec3>& value) {
        if (value) {
            sum += *value;
            ++count;
        }
    }
    [[nodiscard]] std::optional<Vec3> mean() const {
        if (count == 0) return std::nullopt;
        return Vec3(sum / static_cast<double>(count));
    }
};

void assign_indices(std::vector<EventGroup>& groups) {
    int counters[3] = {0, 0, 0};
    for (EventGroup& group : groups) {
        group.index = ++counters[static_cast<int>(group.kind)];
    }
}

/// Count-weighted mean of two per-eye means; exact because the weights are
/// the numbers of samples behind each mean.
std::optional<Vec3> weighted_mean(const std::optional<Vec3>& a, std::size_t ca,
                                  const std::optional<Vec3>& b, std::size_t cb) {
    if (a && b) {
        return Vec3((*a * static_cast<double>(ca) + *b * static_cast<double>(cb)) /
                    static_cast<double>(ca + cb));
    }
    if (a) return a;
    if (b) return b;
    return std::nullopt;
}

/// Spatial closeness test between two fixation groups: per eye, the visual
/// angle between the groups' mean gaze points as seen from the mean of their
/// mean eye positions; eyes aggregated with the usual binocular rule. Empty
/// when neither eye has positions in both groups (the merge condition then
/// fails).
std::optional<Angle> merge_angle(const EventGroup& f1, const EventGroup& f2) {
    auto per_eye = [](const std::optional<Vec3>& eye1, const std::optional<Vec3>& gaze1,
                      const std::optional<Vec3>& eye2,
                      const std::optional<Vec3>& gaze2) -> std::optional<Angle> {
        if (!eye1 || !gaze1 || !eye2 || !gaze2) {
            return std::nullopt;
        }
        const Vec3 vertex = mean_position(*eye1, *eye2);
        if ((*gaze1 - vertex).norm() < kMinGazeVectorMm ||
            (*gaze2 - vertex).norm() < kMinGazeVectorMm) {
            return std::nullopt;
        }
        return visual_angle(vertex, *gaze1, *gaze2);
    };
    return binocular_angle(per_eye(f1.mean_eye3d.left, f1.mean_gaze3d.left,
                                   f2.mean_eye3d.left, f2.mean_gaze3d.left),
                           per_eye(f1.mean_eye3d.right, f1.mean_gaze3d.right,
                                   f2.mean_eye3d.right, f2.mean_gaze3d.right));
}

/// One fixation group spanning f1..f2; discarded saccade/invalid samples in
/// between contribute nothing to the means.
EventGroup merge_pair(const EventGroup& f1, const EventGroup& f2) {
    EventGroup merged;
    merged.kind = EventKind::Fixation;
    merged.start_ms = f1.start_ms;
    merged.end_ms = f2.end_ms;
    merged.duration_ms = merged.end_ms - merged.start_ms;
    merged.sample_count = f1.sample_count + f2.sample_count;

    merged.mean_eye3d.left = weighted_mean(f1.mean_eye3d.left, f1.eye_sample_count.left,
                                           f2.mean_eye3d.left, f2.eye_sample_count.left);
    merged.mean_eye3d.right = weighted_mean(f1.mean_eye3d.right, f1.eye_sample_count.right,
                                            f2.mean_eye3d.right, f2.eye_sample_count.right);
    merged.mean_gaze3d.left = weighted_mean(f1.mean_gaze3d.left, f1.eye_sample_count.left,
                                            f2.mean_gaze3d.left, f2.eye_sample_count.left);
    merged.mean_gaze3d.right = weighted_mean(f1.mean_gaze3d.right, f1.eye_sample_count.right,
                                             f2.mean_gaze3d.right, f2.eye_sample_count.right);
    merged.eye_sample_count.left = f1.eye_sample_count.left + f2.eye_sample_count.left;
    merged.eye_sample_count.right = f1.eye_sample_count.right + f2.eye_sample_count.right;

    if (f1.mean_gaze2d && f2.mean_gaze2d) {
        merged.mean_gaze2d =
            Vec2((*f1.mean_gaze2d * static_cast<double>(f1.gaze2d_count) +
                  *f2.mean_gaze2d * static_cast<double>(f2.gaze2d_count)) /
                 static_cast<double>(f1.gaze2d_count + f2.gaze2d_count));
    } else if (f1.mean_gaze2d) {
        merged.mean_gaze2d = f1.mean_gaze2d;
    } else {
        merged.mean_gaze2d = f2.mean_gaze2d;
    }
    merged.gaze2d_count = f1.gaze2d_count + f2.gaze2d_count;
    return merged;
}

}  // namespace

std::vector<EventGroup> group_events(const std::vector<MidpointSample>& stream,
                                     const std::vector<EventKind>& labels) {
    if (stream.size() != labels.size()) {
        throw ConfigError("group_events: labels must be parallel to the stream");
    }
    if (stream.empty()) {
        throw InsufficientDataError("group_events: empty labeled stream");
    }

    struct Run {
        std::size_t first;
        std::size_t last;
        EventKind kind;
    };
    std::vector<Run> runs;
    std::size_t run_start = 0;
    for (std::size_t i = 1; i <= stream.size(); ++i) {
        if (i == stream.size() || labels[i] != labels[run_start]) {
            runs.push_back({run_start, i - 1, labels[run_start]});
            run_start = i;
        }
    }

    std::vector<EventGroup> groups;
    groups.reserve(runs.size());
    for (std::size_t k = 0; k < runs.size(); ++k) {
        const Run& run = runs[k];
        EventGroup group;
        group.kind = run.kind;
        group.sample_count = run.last - run.first + 1;

        group.start_ms = (k == 0)
                             ? stream[run.first].timestamp_ms
                             : (stream[runs[k - 1].last].timestamp_ms +
                                stream[run.first].timestamp_ms) / 2.0;
        group.end_ms = (k + 1 == runs.size())
                           ? stream[run.last].timestamp_ms
                           : (stream[run.last].timestamp_ms +
                              stream[runs[k + 1].first].timestamp_ms) / 2.0;
        group.duration_ms = group.end_ms - group.start_ms;

        MeanAccumulator3 eye_left, eye_right, gaze_left, gaze_right;
        Vec2 gaze2d_sum = Vec2::Zero();
        std::size_t gaze2d_count = 0;
        for (std::size_t i = run.first; i <= run.last; ++i) {
            eye_left.add(stream[i].eye3d.left);
            eye_right.add(stream[i].eye3d.right);
            gaze_left.add(stream[i].gaze3d.left);
            gaze_right.add(stream[i].gaze3d.right);
            if (stream[i].gaze2d) {
                gaze2d_sum += *stream[i].gaze2d;
                ++gaze2d_count;
            }
        }
        group.mean_eye3d = {eye_left.mean(), eye_right.mean()};
        group.mean_gaze3d = {gaze_left.mean(), gaze_right.mean()};
        group.eye_sample_count = {eye_left.count, eye_right.count};
        if (gaze2d_count > 0) {
            group.mean_gaze2d = Vec2(gaze2d_sum / static_cast<double>(gaze2d_count));
        }
        group.gaze2d_count = gaze2d_count;

        groups.push_back(std::move(group));
    }
    assign_indices(groups);
    return groups;
}

namespace {

/// One left-to-right pass. A freshly merged group is immediately eligible to
/// merge with the next fixation group.
std::vector<EventGroup> merge_pass(std::vector<EventGroup> groups,
                                   const IvtConfig& config) {
    std::vector<EventGroup> result;
    result.reserve(groups.size());

    // Current fixation candidate plus the non-fixation groups seen since it;
    // the buffer is flushed when the next fixation refuses to merge and
    // discarded when it does.
    std::optional<EventGroup> candidate;
    std::vector<EventGroup> between;

    auto flush = [&]() {
        if (candidate) {
            result.push_back(std::move(*candidate));
            candidate.reset();
        }
        for (EventGroup& g : between) {
            result.push_back(std::move(g));
        }
        between.clear();
    };

    for (EventGroup& group : groups) {
        if (group.kind != EventKind::Fixation) {
            if (candidate) {
                between.push_back(std::move(group));
            } else {
                result.push_back(std::move(group));
            }
            continue;
        }
        if (!candidate) {
            candidate = std::move(group);
            continue;
        }
        const double gap_ms = group.start_ms - candidate->end_ms;
        bool merged = false;
        if (gap_ms < config.max_time_betw_fixations_ms) {
            const std::optional<Angle> angle = merge_angle(*candidate, group);
            if (angle && angle->degrees() < config.max_angle_betw_fixations_deg) {
                candidate = merge_pair(*candidate, group);
                between.clear();  // discarded along with their samples
                merged = true;
            }
        }
        if (!merged) {
            flush();
            candidate = std::move(group);
        }
    }
    flush();
    return result;
}

}  // namespace

std::vector<EventGroup> merge_fixations(std::vector<EventGroup> groups,
                                        const IvtConfig& config) {
    validate_config(config);
    // Iterate to a fixpoint: a merge shifts the merged group's mean position,
    // which can bring it within the angle threshold of a neighbor that
    // previously failed the test, so a single pass is not idempotent.
    while (true) {
        const std::size_t before = groups.size();
        groups = merge_pass(std::move(groups), config);
        if (groups.size() == before) {
            break;
        }
    }
    assign_indices(groups);
    return groups;
}

std::vector<EventGroup> segment(const Recording& recording, const IvtConfig& config) {
    validate_config(config);
    const std::vector<MidpointSample> stream = velocity_stream(recording);
    const std::vector<EventKind> labels =
        label_stream(stream, config.velocity_threshold_deg_s);
    std::vector<EventGroup> groups = group_events(stream, labels);
    if (config.merging_enabled) {
        groups = merge_fixations(std::move(groups), config);
    }
    return groups;
}

}  // namespace gazemetry
