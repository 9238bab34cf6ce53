#pragma once

#include "gazemetry/types.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace gazemetry {

/// One diagnostic finding from validate(). `value` carries the number the
/// message reports (fraction, run length, effective rate).
struct ValidationIssue {
    std::string code;
    std::string message;
    double value = 0.0;
};

/// Descriptive statistics over a recording; never mutates it.
struct RecordingSummary {
    std::size_t sample_count = 0;
    double first_timestamp_ms = 0.0;
    double last_timestamp_ms = 0.0;
    double invalid_fraction = 0.0;        // samples with both eyes invalid
    std::size_t longest_invalid_run = 0;  // consecutive both-eyes-invalid samples
    double median_interval_ms = 0.0;      // 0 when fewer than 2 samples
    double effective_rate_hz = 0.0;       // 1000 / median interval
};

RecordingSummary summarize(const Recording& recording);

/// Diagnostic checks: both-eyes-invalid fraction, longest invalid run, and
/// effective vs nominal sample rate (flagged when the median inter-sample
/// interval deviates from nominal by more than 10%). Pure; an empty list
/// means nothing looked wrong.
std::vector<ValidationIssue> validate(const Recording& recording);

/// Keep exactly the samples with start_ms <= t < start_ms + duration_ms.
/// Throws ConfigError when duration_ms <= 0 and InsufficientDataError when
/// fewer than 2 samples survive.
Recording window(const Recording& recording, double start_ms, double duration_ms);

}  // namespace gazemetry
