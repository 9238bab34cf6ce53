#include "gazemetry/recording.hpp"

#include "gazemetry/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

namespace gazemetry {

namespace {

bool both_eyes_invalid(const GazeSample& sample) {
    return !sample.left.valid && !sample.right.valid;
}

}  // namespace

RecordingSummary summarize(const Recording& recording) {
    RecordingSummary summary;
    summary.sample_count = recording.samples.size();
    if (recording.samples.empty()) {
        return summary;
    }
    summary.first_timestamp_ms = recording.samples.front().timestamp_ms;
    summary.last_timestamp_ms = recording.samples.back().timestamp_ms;

    std::size_t invalid = 0;
    std::size_t run = 0;
    for (const GazeSample& sample : recording.samples) {
        if (both_eyes_invalid(sample)) {
            ++invalid;
            ++run;
            summary.longest_invalid_run = std::max(summary.longest_invalid_run, run);
        } else {
            run = 0;
        }
    }
    summary.invalid_fraction =
        static_cast<double>(invalid) / static_cast<double>(recording.samples.size());

    if (recording.samples.size() >= 2) {
        std::vector<double> intervals;
        intervals.reserve(recording.samples.size() - 1);
        for (std::size_t i = 1; i < recording.samples.size(); ++i) {
            intervals.push_back(recording.samples[i].timestamp_ms -
                                recording.samples[i - 1].timestamp_ms);
        }
        std::sort(intervals.begin(), intervals.end());
        const std::size_t mid = intervals.size() / 2;
        summary.median_interval_ms = (intervals.size() % 2 == 1)
                                         ? intervals[mid]
                                         : (intervals[mid - 1] + intervals[mid]) / 2.0;
        if (summary.median_interval_ms > 0.0) {
            summary.effective_rate_hz = 1000.0 / summary.median_interval_ms;
        }
    }
    return summary;
}

std::vector<ValidationIssue> validate(const Recording& recording) {
    std::vector<ValidationIssue> issues;
    const RecordingSummary summary = summarize(recording);

    char buf[160];
    if (summary.invalid_fraction > 0.0) {
        std::snprintf(buf, sizeof(buf), "invalid fraction %.2f", summary.invalid_fraction);
        issues.push_back({"invalid_fraction", buf, summary.invalid_fraction});
        std::snprintf(buf, sizeof(buf), "longest invalid run %zu samples",
                      summary.longest_invalid_run);
        issues.push_back({"longest_invalid_run", buf,
                          static_cast<double>(summary.longest_invalid_run)});
    }
    if (summary.sample_count >= 2 && recording.sample_rate_hz > 0.0) {
        const double nominal_interval = 1000.0 / recording.sample_rate_hz;
        if (std::fabs(summary.median_interval_ms - nominal_interval) > 0.1 * nominal_interval) {
            std::snprintf(buf, sizeof(buf),
                          "nominal %.0f Hz but median interval %.2f ms (effective %.2f Hz)",
                          recording.sample_rate_hz, summary.median_interval_ms,
                          summary.effective_rate_hz);
            issues.push_back({"rate_mismatch", buf, summary.effective_rate_hz});
        }
    }
    return issues;
}

Recording window(const Recording& recording, double start_ms, double duration_ms) {
    if (!(duration_ms > 0.0)) {
        throw ConfigError("window duration must be > 0");
    }
    Recording out;
    out.participant_id = recording.participant_id;
    out.sample_rate_hz = recording.sample_rate_hz;
    const double end_ms = start_ms + duration_ms;
    for (const GazeSample& sample : recording.samples) {
        if (sample.timestamp_ms >= start_ms && sample.timestamp_ms < end_ms) {
            out.samples.push_back(sample);
        }
    }
    if (out.samples.size() < 2) {
        throw InsufficientDataError("window over '" + recording.participant_id + "' keeps " +
                                    std::to_string(out.samples.size()) +
                                    " samples; at least 2 required");
    }
    return out;
}

}  // namespace gazemetry
