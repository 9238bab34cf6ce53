#pragma once

#include "gazemetry/metrics.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gazemetry {

/// Stock threshold grid: 10..150 °/s in steps of 10.
std::vector<double> default_thresholds();

/// True for the two thresholds shipped as named defaults in common tooling
/// (30 °/s fixation filter, 100 °/s attention filter).
bool is_named_default(double threshold_deg_s);

/// One (participant, threshold, merging) cell. metrics is empty when the
/// participant had zero fixations in this cell — an explicit undefined-GRI
/// marker, never a silent omission.
struct SweepCell {
    std::string participant_id;
    double threshold_deg_s = 0.0;
    bool merging = false;
    std::optional<PersonMetrics> metrics;
};

/// Complete sensitivity-sweep grid: |participants| x |thresholds| x
/// |merge settings| cells, ordered by participant id, then threshold
/// ascending, then merging false-before-true.
struct SweepTable {
    std::vector<std::string> participant_ids;  // sorted
    std::vector<double> thresholds;            // ascending, deduplicated
    std::vector<bool> merge_settings;          // false-before-true
    std::vector<SweepCell> cells;

    [[nodiscard]] const SweepCell* find(const std::string& participant_id,
                                        double threshold_deg_s, bool merging) const;
};

/// Run the full pipeline across the grid. The velocity stream is computed
/// exactly once per recording and re-labeled per threshold. Cells where a
/// participant has zero fixations carry an empty metrics field.
SweepTable run_sweep(const std::vector<Recording>& recordings,
                     std::vector<double> thresholds, std::vector<bool> merge_settings,
                     const IvtConfig& base_config);

/// Participants ordered by ascending GRI at one grid point; ties broken by
/// participant id. Cells with undefined GRI are skipped. Throws LookupError
/// when the threshold or merge setting is not in the table.
std::vector<std::string> rank_order(const SweepTable& table, double threshold_deg_s,
                                    bool merging);

/// Group means at one grid point, one GroupMetrics per distinct label,
/// ordered by label. Every participant in the table must be assigned
/// (AssignmentError otherwise); members with undefined metrics at this grid
/// point are excluded, and a group with no defined member throws
/// InsufficientDataError.
std::vector<GroupMetrics> group_contrast(const SweepTable& table,
                                         const std::vector<GroupAssignment>& assignments,
                                         double threshold_deg_s, bool merging);

}  // namespace gazemetry
