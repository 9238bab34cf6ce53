#include "gazemetry/metrics.hpp"

#include "gazemetry/errors.hpp"

namespace gazemetry {

PersonMetrics person_metrics(const std::vector<EventGroup>& groups,
                             const std::string& participant_id,
                             double recording_duration_ms) {
    PersonMetrics metrics;
    metrics.participant_id = participant_id;
    metrics.recording_duration_ms = recording_duration_ms;

    for (const EventGroup& group : groups) {
        if (group.kind == EventKind::Fixation) {
            ++metrics.fixation_number;
            metrics.total_fixation_duration_ms += group.duration_ms;
        }
    }
    if (metrics.fixation_number == 0) {
        throw ZeroFixationError("participant '" + participant_id +
                                "' has no fixations; GRI undefined");
    }
    const double fixnr = static_cast<double>(metrics.fixation_number);
    metrics.mean_fixation_duration_ms = metrics.total_fixation_duration_ms / fixnr;
    metrics.gri = metrics.mean_fixation_duration_ms / fixnr;
    return metrics;
}

GroupMetrics group_metrics(const std::vector<PersonMetrics>& members,
                           const std::string& group_label) {
    if (members.empty()) {
        throw InsufficientDataError("group '" + group_label + "' has no members");
    }
    GroupMetrics metrics;
    metrics.group_label = group_label;
    metrics.member_count = members.size();

    double fixnr_sum = 0.0;
    double fixdur_sum = 0.0;
    for (const PersonMetrics& member : members) {
        fixnr_sum += static_cast<double>(member.fixation_number);
        fixdur_sum += member.mean_fixation_duration_ms;
    }
    const double n = static_cast<double>(members.size());
    metrics.mean_fixation_number = fixnr_sum / n;
    metrics.mean_fixation_duration_ms = fixdur_sum / n;
    metrics.gri = metrics.mean_fixation_duration_ms / metrics.mean_fixation_number;
    return metrics;
}

}  // namespace gazemetry
