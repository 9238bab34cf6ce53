#pragma once

#include "gazemetry/events.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace gazemetry {

/// Eye-tracking parameters for one participant. The Gaze Relational Index
/// (GRI) is the mean fixation duration divided by the fixation count, in ms
/// per fixation; lower values go with more, shorter fixations. Note the GRI
/// depends on how long the analyzed window is (the count keeps growing with
/// recording length while the mean duration stays put), so
/// recording_duration_ms is always carried along.
struct PersonMetrics {
    std::string participant_id;
    std::size_t fixation_number = 0;
    double mean_fixation_duration_ms = 0.0;
    double gri = 0.0;
    double total_fixation_duration_ms = 0.0;
    double recording_duration_ms = 0.0;
};

/// Group-level parameters: means of the members' fixation numbers and mean
/// durations, with the group GRI as the ratio of those two means (not the
/// mean of per-person GRIs).
struct GroupMetrics {
    std::string group_label;
    double mean_fixation_number = 0.0;
    double mean_fixation_duration_ms = 0.0;
    double gri = 0.0;
    std::size_t member_count = 0;
};

/// Compute per-participant metrics from segmented events. Only Fixation
/// groups count. Throws ZeroFixationError when there are none (the GRI is
/// undefined then).
PersonMetrics person_metrics(const std::vector<EventGroup>& groups,
                             const std::string& participant_id,
                             double recording_duration_ms);

/// Aggregate members into group metrics. Throws InsufficientDataError on an
/// empty member list.
GroupMetrics group_metrics(const std::vector<PersonMetrics>& members,
                           const std::string& group_label);

}  // namespace gazemetry
