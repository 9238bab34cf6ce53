#include "gazemetry/synth.hpp"

#include "gazemetry/errors.hpp"
#include "gazemetry/geometry.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <random>

namespace gazemetry {

namespace {

constexpr double kContinuityTolMm = 1e-6;

/// Deterministic standard normal via Marsaglia polar on mt19937_64; the
/// generator's bit stream is pinned by the standard, so a seed fully
/// reproduces a trace on a given build.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

    double next(double sigma) {
        if (have_spare_) {
            have_spare_ = false;
            return spare_ * sigma;
        }
        double u, v, s;
        do {
            u = uniform_pm1();
            v = uniform_pm1();
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double factor = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * factor;
        have_spare_ = true;
        return u * factor * sigma;
    }

private:
    double uniform_pm1() {
        // 53-bit uniform in [0,1), mapped to (-1, 1).
        const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
        return 2.0 * u - 1.0;
    }
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Unit vectors spanning the plane orthogonal to dir.
void tangent_basis(const Vec3& dir, Vec3& u, Vec3& v) {
    const Vec3 axis = (std::abs(dir.x()) < 0.9) ? Vec3::UnitX() : Vec3::UnitY();
    u = dir.cross(axis).normalized();
    v = dir.cross(u).normalized();
}

/// Rotate the eye->point ray by independent tangential angles (radians),
/// keeping the distance. Small-angle construction; adequate for sub-degree
/// noise magnitudes.
Vec3 perturb_ray(const Vec3& eye, const Vec3& point, double angle_u, double angle_v) {
    const Vec3 ray = point - eye;
    const double radius = ray.norm();
    const Vec3 dir = ray / radius;
    Vec3 u, v;
    tangent_basis(dir, u, v);
    const Vec3 rotated = (dir + angle_u * u + angle_v * v).normalized();
    return eye + rotated * radius;
}

/// Constant-angular-velocity interpolation of a gaze point about the origin
/// (the cyclopean eye center): spherical interpolation of the direction with
/// linear interpolation of the distance.
Vec3 arc_interpolate(const Vec3& from, const Vec3& to, double fraction) {
    const double r_from = from.norm();
    const double r_to = to.norm();
    const Vec3 d_from = from / r_from;
    const Vec3 d_to = to / r_to;
    const double cosine = std::clamp(d_from.dot(d_to), -1.0, 1.0);
    const double omega = std::acos(cosine);
    const double radius = r_from + (r_to - r_from) * fraction;
    if (omega < 1e-12) {
        return from + (to - from) * fraction;
    }
    const double sin_omega = std::sin(omega);
    const Vec3 dir = (std::sin((1.0 - fraction) * omega) * d_from +
                      std::sin(fraction * omega) * d_to) / sin_omega;
    return dir.normalized() * radius;
}

struct EventWindow {
    double start_ms;
    double end_ms;
    const ScenarioEvent* event;
    Vec3 gaze_at_start;  // held position for dropouts
};

Vec3 event_end_position(const ScenarioEvent& event, const Vec3& current) {
    if (const auto* fix = std::get_if<FixationSpec>(&event)) return fix->target;
    if (const auto* sac = std::get_if<SaccadeSpec>(&event)) return sac->to;
    return current;
}

double event_duration(const ScenarioEvent& event) {
    return std::visit([](const auto& e) { return e.duration_ms; }, event);
}

EventKind truth_kind(const ScenarioEvent& event) {
    if (std::holds_alternative<FixationSpec>(event)) return EventKind::Fixation;
    if (std::holds_alternative<SaccadeSpec>(event)) return EventKind::Saccade;
    const auto& drop = std::get<DropoutSpec>(event);
    // With one eye still tracked the interval stays classifiable as the held
    // fixation; only a both-eye dropout turns into an invalid interval.
    return drop.eyes == DropoutEyes::Both ? EventKind::Invalid : EventKind::Fixation;
}

}  // namespace

SyntheticTrace generate_trace(const Scenario& scenario, double sample_rate_hz,
                              const EyeGeometry& geometry, double noise_deg,
                              std::uint64_t seed, const std::string& participant_id) {
    if (scenario.empty()) {
        throw ConfigError("scenario has no events");
    }
    if (!(std::isfinite(sample_rate_hz) && sample_rate_hz > 0.0)) {
        throw ConfigError("sample rate must be finite and > 0");
    }
    if (!(std::isfinite(geometry.viewing_distance_mm) && geometry.viewing_distance_mm > 0.0)) {
        throw ConfigError("viewing distance must be finite and > 0");
    }
    if (!(std::isfinite(geometry.interocular_mm) && geometry.interocular_mm >= 0.0)) {
        throw ConfigError("interocular distance must be finite and >= 0");
    }
    if (!(std::isfinite(noise_deg) && noise_deg >= 0.0)) {
        throw ConfigError("noise must be finite and >= 0");
    }
    if (std::holds_alternative<DropoutSpec>(scenario.front())) {
        throw ConfigError("scenario must open with a fixation or saccade");
    }

    // Lay out the timeline and check saccade continuity.
    std::vector<EventWindow> windows;
    windows.reserve(scenario.size());
    double clock_ms = 0.0;
    Vec3 current = Vec3::Zero();
    bool have_position = false;
    for (const ScenarioEvent& event : scenario) {
        const double duration = event_duration(event);
        if (!(std::isfinite(duration) && duration > 0.0)) {
            throw ConfigError("scenario event durations must be finite and > 0");
        }
        if (const auto* sac = std::get_if<SaccadeSpec>(&event)) {
            if (have_position && (sac->from - current).norm() > kContinuityTolMm) {
                throw ConfigError("saccade 'from' must continue from the previous position");
            }
            current = sac->from;
            have_position = true;
        }
        windows.push_back({clock_ms, clock_ms + duration, &event, current});
        current = event_end_position(event, current);
        have_position = true;
        clock_ms += duration;
    }
    const double total_ms = clock_ms;

    const Vec3 left_eye(-geometry.interocular_mm / 2.0, 0.0, 0.0);
    const Vec3 right_eye(geometry.interocular_mm / 2.0, 0.0, 0.0);
    const double noise_rad = noise_deg / kDegPerRad;
    GaussianSource noise(seed);

    Recording recording;
    recording.participant_id = participant_id;
    recording.sample_rate_hz = sample_rate_hz;

    const double dt_ms = 1000.0 / sample_rate_hz;
    std::size_t window_idx = 0;
    for (std::size_t i = 0;; ++i) {
        const double t = static_cast<double>(i) * dt_ms;
        if (t >= total_ms) {
            break;
        }
        while (t >= windows[window_idx].end_ms) {
            ++window_idx;
        }
        const EventWindow& window = windows[window_idx];

        Vec3 gaze;
        bool left_valid = true;
        bool right_valid = true;
        bool noisy = false;
        if (const auto* fix = std::get_if<FixationSpec>(window.event)) {
            gaze = fix->target;
            noisy = noise_rad > 0.0;
        } else if (const auto* sac = std::get_if<SaccadeSpec>(window.event)) {
            const double fraction = (t - window.start_ms) / (window.end_ms - window.start_ms);
            gaze = arc_interpolate(sac->from, sac->to, fraction);
        } else {
            const auto& drop = std::get<DropoutSpec>(*window.event);
            gaze = window.gaze_at_start;
            left_valid = drop.eyes == DropoutEyes::Right;
            right_valid = drop.eyes == DropoutEyes::Left;
        }

        GazeSample sample;
        sample.timestamp_ms = t;
        if (left_valid) {
            sample.left.valid = true;
            sample.left.eye_position = left_eye;
            sample.left.gaze_position =
                noisy ? perturb_ray(left_eye, gaze, noise.next(noise_rad), noise.next(noise_rad))
                      : gaze;
        }
        if (right_valid) {
            sample.right.valid = true;
            sample.right.eye_position = right_eye;
            sample.right.gaze_position =
                noisy ? perturb_ray(right_eye, gaze, noise.next(noise_rad), noise.next(noise_rad))
                      : gaze;
        }
        // Simple symmetric projection for the carried-along 2D coordinates:
        // +-50 degrees of visual field maps onto [0,1] x [0,1].
        const Vec3 cyclo_ray = gaze;  // cyclopean eye sits at the origin
        if (cyclo_ray.norm() >= kMinGazeVectorMm && cyclo_ray.z() > 0.0) {
            const double u = 0.5 + std::atan2(cyclo_ray.x(), cyclo_ray.z()) * kDegPerRad / 100.0;
            const double v = 0.5 + std::atan2(cyclo_ray.y(), cyclo_ray.z()) * kDegPerRad / 100.0;
            sample.gaze2d = Vec2(u, v);
        }
        recording.samples.push_back(sample);
    }

    if (recording.samples.size() < 2) {
        throw ConfigError("scenario too short: fewer than 2 samples at this rate");
    }

    // Ground truth: scenario intervals with the dropout mapping applied,
    // clamped to the emitted sample span, adjacent equal kinds coalesced.
    const double span_end = recording.samples.back().timestamp_ms;
    GroundTruth truth;
    for (const EventWindow& window : windows) {
        const double start = std::min(window.start_ms, span_end);
        const double end = std::min(window.end_ms, span_end);
        if (end <= start) {
            continue;
        }
        const EventKind kind = truth_kind(*window.event);
        if (!truth.events.empty() && truth.events.back().kind == kind &&
            truth.events.back().end_ms == start) {
            truth.events.back().end_ms = end;
        } else {
            truth.events.push_back({kind, start, end});
        }
    }
    return {std::move(recording), std::move(truth)};
}

namespace {

struct KindLists {
    std::vector<const TruthEvent*> truth;
    std::vector<const TruthEvent*> detected;
};

void score_kind(KindScore& score, const std::vector<const TruthEvent*>& truth,
                const std::vector<const TruthEvent*>& detected, double tol_ms) {
    score.truth_count = truth.size();
    score.detected_count = detected.size();
    score.matched = 0;

    // Greedy one-to-one matching in temporal order.
    std::size_t next_detected = 0;
    for (const TruthEvent* t : truth) {
        for (std::size_t j = next_detected; j < detected.size(); ++j) {
            const TruthEvent* d = detected[j];
            if (d->start_ms > t->start_ms + tol_ms) {
                break;  // later candidates start even further away
            }
            if (std::fabs(d->start_ms - t->start_ms) <= tol_ms &&
                std::fabs(d->end_ms - t->end_ms) <= tol_ms) {
                ++score.matched;
                next_detected = j + 1;
                break;
            }
        }
    }
    score.precision = detected.empty()
                          ? 1.0
                          : static_cast<double>(score.matched) /
                                static_cast<double>(detected.size());
    score.recall = truth.empty() ? 1.0
                                 : static_cast<double>(score.matched) /
                                       static_cast<double>(truth.size());
}

EventKind kind_at(const std::vector<TruthEvent>& events, std::size_t& cursor, double t) {
    while (cursor + 1 < events.size() && t >= events[cursor].end_ms) {
        ++cursor;
    }
    return events[cursor].kind;
}

}  // namespace

DetectionScores score_detection(const std::vector<TruthEvent>& detected,
                                const GroundTruth& truth, double boundary_tolerance_ms) {
    if (!(std::isfinite(boundary_tolerance_ms) && boundary_tolerance_ms >= 0.0)) {
        throw ConfigError("boundary tolerance must be finite and >= 0");
    }
    DetectionScores scores;

    KindLists lists[3];
    for (const TruthEvent& event : truth.events) {
        lists[static_cast<int>(event.kind)].truth.push_back(&event);
    }
    for (const TruthEvent& event : detected) {
        lists[static_cast<int>(event.kind)].detected.push_back(&event);
    }
    score_kind(scores.fixation, lists[0].truth, lists[0].detected, boundary_tolerance_ms);
    score_kind(scores.saccade, lists[1].truth, lists[1].detected, boundary_tolerance_ms);
    score_kind(scores.invalid, lists[2].truth, lists[2].detected, boundary_tolerance_ms);

    // Time-weighted kind agreement over the overlapping span.
    if (detected.empty() && truth.events.empty()) {
        scores.agreement_fraction = 1.0;
        return scores;
    }
    if (detected.empty() || truth.events.empty()) {
        scores.agreement_fraction = 0.0;
        return scores;
    }
    const double lo = std::max(detected.front().start_ms, truth.events.front().start_ms);
    const double hi = std::min(detected.back().end_ms, truth.events.back().end_ms);
    if (hi <= lo) {
        scores.agreement_fraction = 0.0;
        return scores;
    }
    std::vector<double> cuts;
    cuts.push_back(lo);
    for (const TruthEvent& e : detected) {
        if (e.start_ms > lo && e.start_ms < hi) cuts.push_back(e.start_ms);
        if (e.end_ms > lo && e.end_ms < hi) cuts.push_back(e.end_ms);
    }
    for (const TruthEvent& e : truth.events) {
        if (e.start_ms > lo && e.start_ms < hi) cuts.push_back(e.start_ms);
        if (e.end_ms > lo && e.end_ms < hi) cuts.push_back(e.end_ms);
    }
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    double agreed = 0.0;
    std::size_t det_cursor = 0;
    std::size_t truth_cursor = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double mid = (cuts[i] + cuts[i + 1]) / 2.0;
        if (kind_at(detected, det_cursor, mid) == kind_at(truth.events, truth_cursor, mid)) {
            agreed += cuts[i + 1] - cuts[i];
        }
    }
    scores.agreement_fraction = agreed / (hi - lo);
    return scores;
}

DetectionScores score_detection(const std::vector<EventGroup>& detected,
                                const GroundTruth& truth, double boundary_tolerance_ms) {
    std::vector<TruthEvent> events;
    events.reserve(detected.size());
    for (const EventGroup& group : detected) {
        events.push_back({group.kind, group.start_ms, group.end_ms});
    }
    return score_detection(events, truth, boundary_tolerance_ms);
}

}  // namespace gazemetry
